#pragma once

// Worked example weights with their closed forms, and a regression
// runner that checks the library against them.
//
//   single-factor          h = 1 - 2 a y z + a^2 z^2                     |a| < 1
//   linear-quadratic       h = (1 - 2 b z)(1 - 2 a y z + a^2 z^2)        0 < |a| < 1, |b| < 1/2
//   two-factor             h = prod_i (1 - 2 a_i y z + a_i^2 z^2)        0 < |a_i| < 1
//   two-linear-quadratic   h = (1 - b1 z)(1 - b2 z)(1 - 2 a y z + a^2 z^2)
//
// a = 0 in the single-factor case is the product Chebyshev measure, encoded
// as the product weight with no factors.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "bsz2d/moment_oracle.hpp"
#include "bsz2d/weights.hpp"

namespace bsz2d {

enum class ExampleKind { SingleFactor, LinearQuadratic, TwoFactor, TwoLinearQuadratic };

struct ExampleId {
  ExampleKind kind = ExampleKind::SingleFactor;
  double a = 0.0, b = 0.0;    // single-factor, linear-quadratic, two-linear-quadratic
  double a1 = 0.0, a2 = 0.0;  // two-factor
  double b1 = 0.0, b2 = 0.0;  // two-linear-quadratic

  static ExampleId single_factor(double a);
  static ExampleId linear_quadratic(double a, double b);
  static ExampleId two_factor(double a1, double a2);
  static ExampleId two_linear_quadratic(double b1, double b2, double a);

  std::string name() const;
  nlohmann::json parameters() const;
};

// Accepts the role names above and the short aliases ex1, ex2, ex4, remark.
ExampleKind example_kind_from_string(const std::string& s);

WeightSpec example_weight(const ExampleId& ex);

// Closed-form total-degree blocks at level n, where stated.
struct ExpectedBlocks {
  std::optional<Eigen::MatrixXd> ax, ay, bx, by;
};
ExpectedBlocks expected_total_blocks(const ExampleId& ex, int n);

// Degree-n orthogonal polynomial of the y-marginal (ChebU in y, not
// normalized), as corrected; nullopt when no closed form is known.
std::optional<UnivariatePoly> expected_marginal_poly(const ExampleId& ex, int n);
// The same family as literally printed, for reporting.
std::optional<UnivariatePoly> literal_marginal_poly(const ExampleId& ex, int n);

// Closed form of the y-marginal density int dmu_y(x), and the constant c with
// int dmu_y(x) = c * int sqrt(1-x^2)/|h|^2 dx.
std::optional<double> expected_marginal_density(const ExampleId& ex, double y);
double marginal_constant(const ExampleId& ex);

// Printed q_k (k >= 1) before normalization, and the literal print where it
// differs from the corrected reading.
std::optional<BivariatePoly> expected_qk(const ExampleId& ex, int k);
std::optional<BivariatePoly> literal_qk(const ExampleId& ex, int k);

struct CheckResult {
  std::string id;
  std::string origin;   // "closed-form", "derived", "invariant", "literal"
  bool pass = false;
  bool informational = false;  // reported, not asserted
  double deviation = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct RegressionReport {
  std::string name;
  nlohmann::json parameters;
  int depth = 0;
  std::vector<CheckResult> checks;

  bool pass() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

// Invariant suite for any stable weight: oracle agreement, Gram identity,
// recurrence residuals and block structure up to the given depth.
RegressionReport run_invariants(const WeightSpec& spec, int depth, const QuadratureOptions& opt = {});
// Invariants plus the closed forms of the example.
RegressionReport run_regression(const ExampleId& ex, int depth, const QuadratureOptions& opt = {});

}  // namespace bsz2d
