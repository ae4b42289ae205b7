#include "bsz2d/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace bsz2d {

nlohmann::json to_json(const BivariatePoly& p) {
  nlohmann::json rows = nlohmann::json::array();
  const auto& g = p.coeffs();
  for (int i = 0; i < g.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < g.cols(); ++j) row.push_back(g(i, j));
    rows.push_back(std::move(row));
  }
  return {{"basis", p.basis() == Basis::ChebU ? "chebU" : "monomial"}, {"coeffs", std::move(rows)}};
}

BivariatePoly poly_from_json(const nlohmann::json& j) {
  const auto basis_name = j.at("basis").get<std::string>();
  Basis basis;
  if (basis_name == "chebU") basis = Basis::ChebU;
  else if (basis_name == "monomial") basis = Basis::Monomial;
  else throw InvalidArgument("unknown polynomial basis '" + basis_name + "'");
  const auto& rows = j.at("coeffs");
  const int r = static_cast<int>(rows.size());
  int c = 0;
  for (const auto& row : rows) c = std::max(c, static_cast<int>(row.size()));
  Grid<double> g(r, c);
  for (int i = 0; i < r; ++i)
    for (int k = 0; k < static_cast<int>(rows[i].size()); ++k) g(i, k) = rows[i][k].get<double>();
  return {basis, std::move(g)};
}

nlohmann::json to_json(const WeightSpec& spec) {
  if (spec.is_product()) {
    nlohmann::json j{{"product", spec.factors()}};
    if (spec.reflected()) j["reflected"] = true;
    return j;
  }
  nlohmann::json h = nlohmann::json::array();
  for (const auto& p : spec.h()) h.push_back(p.coeffs());
  return {{"generic_h", std::move(h)}};
}

WeightSpec weight_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("product") && j.contains("generic_h"))
      throw InvalidWeight("weight config must contain exactly one of 'product' or 'generic_h'");
    if (j.contains("product"))
      return WeightSpec::product(j.at("product").get<std::vector<double>>(),
                                 j.value("reflected", false));
    if (j.contains("generic_h"))
      return WeightSpec::generic(j.at("generic_h").get<std::vector<std::vector<double>>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidWeight(std::string("malformed weight config: ") + e.what());
  }
  throw InvalidWeight("weight config must contain 'product' or 'generic_h'");
}

WeightSpec load_weight_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidWeight("cannot read weight config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidWeight("cannot parse weight config '" + path + "': " + e.what());
  }
  WeightSpec spec = weight_from_json(j);
  const auto st = is_stable(spec);
  if (!st.stable) {
    std::ostringstream os;
    os << "weight is not stable on the closed disk: min root modulus " << st.min_modulus;
    if (st.witness_y) os << " at y = " << *st.witness_y;
    throw InvalidWeight(os.str());
  }
  return spec;
}

nlohmann::json to_json(const OrthoSystem& sys) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : sys.entries)
    entries.push_back({{"index", {e.index.i, e.index.j}},
                       {"norm", e.norm},
                       {"source", e.source},
                       {"poly", to_json(e.poly)}});
  return {{"ordering", std::string(to_string(sys.ordering))},
          {"n", sys.n},
          {"m", sys.m},
          {"entries", std::move(entries)}};
}

nlohmann::json to_json(const StructureReport& rep) {
  auto viol = [](const std::vector<Violation>& vs) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : vs)
      a.push_back({{"block", v.block}, {"i", v.i}, {"j", v.j}, {"value", v.value}, {"expected", v.expected}});
    return a;
  };
  return {{"pass", rep.pass},
          {"checks", rep.checks},
          {"max_deviation", rep.max_deviation},
          {"violations", viol(rep.violations)},
          {"seam", viol(rep.seam)}};
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << format_double(m(i, j));
    os << '\n';
  }
}

}  // namespace bsz2d
