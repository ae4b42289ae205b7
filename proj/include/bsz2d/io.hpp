#pragma once

#include <iosfwd>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bsz2d/ortho_system.hpp"
#include "bsz2d/poly.hpp"
#include "bsz2d/recurrence.hpp"
#include "bsz2d/weights.hpp"

namespace bsz2d {

// {"basis": "chebU" | "monomial", "coeffs": [[...], ...]}, rows by x-degree.
nlohmann::json to_json(const BivariatePoly& p);
BivariatePoly poly_from_json(const nlohmann::json& j);

// {"product": [a1, ...]} or {"generic_h": [[h_0 coeffs], [h_1 coeffs], ...]}.
nlohmann::json to_json(const WeightSpec& spec);
WeightSpec weight_from_json(const nlohmann::json& j);
// Parses, validates the declared invariants and certifies stability.
WeightSpec load_weight_file(const std::string& path);

nlohmann::json to_json(const OrthoSystem& sys);
nlohmann::json to_json(const StructureReport& rep);

// Rows of "%.17g" values separated by commas.
void write_csv(std::ostream& os, const Eigen::MatrixXd& m);
std::string format_double(double v);

}  // namespace bsz2d
