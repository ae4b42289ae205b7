#include "bsz2d/examples_suite.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bsz2d/lex_order.hpp"
#include "bsz2d/recurrence.hpp"
#include "bsz2d/szego.hpp"
#include "bsz2d/total_order.hpp"

namespace bsz2d {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

using P = UnivariatePoly;

P mono(std::vector<double> c) { return P::monomial(std::move(c)); }

}  // namespace

ExampleId ExampleId::single_factor(double a) {
  require(std::abs(a) < 1.0, "single-factor example needs |a| < 1");
  ExampleId e;
  e.kind = ExampleKind::SingleFactor;
  e.a = a;
  return e;
}

ExampleId ExampleId::linear_quadratic(double a, double b) {
  require(a != 0.0 && std::abs(a) < 1.0, "linear-quadratic example needs 0 < |a| < 1");
  require(std::abs(b) < 0.5, "linear-quadratic example needs |b| < 1/2");
  ExampleId e;
  e.kind = ExampleKind::LinearQuadratic;
  e.a = a;
  e.b = b;
  return e;
}

ExampleId ExampleId::two_factor(double a1, double a2) {
  require(a1 != 0.0 && std::abs(a1) < 1.0 && a2 != 0.0 && std::abs(a2) < 1.0,
          "two-factor example needs 0 < |a1|, |a2| < 1");
  ExampleId e;
  e.kind = ExampleKind::TwoFactor;
  e.a1 = a1;
  e.a2 = a2;
  return e;
}

ExampleId ExampleId::two_linear_quadratic(double b1, double b2, double a) {
  require(std::abs(b1) < 1.0 && std::abs(b2) < 1.0, "two-linear-quadratic example needs |b1|, |b2| < 1");
  require(a != 0.0 && std::abs(a) < 1.0, "two-linear-quadratic example needs 0 < |a| < 1");
  ExampleId e;
  e.kind = ExampleKind::TwoLinearQuadratic;
  e.a = a;
  e.b1 = b1;
  e.b2 = b2;
  return e;
}

std::string ExampleId::name() const {
  switch (kind) {
    case ExampleKind::SingleFactor: return "single-factor";
    case ExampleKind::LinearQuadratic: return "linear-quadratic";
    case ExampleKind::TwoFactor: return "two-factor";
    case ExampleKind::TwoLinearQuadratic: return "two-linear-quadratic";
  }
  return "?";
}

nlohmann::json ExampleId::parameters() const {
  switch (kind) {
    case ExampleKind::SingleFactor: return {{"a", a}};
    case ExampleKind::LinearQuadratic: return {{"a", a}, {"b", b}};
    case ExampleKind::TwoFactor: return {{"a1", a1}, {"a2", a2}};
    case ExampleKind::TwoLinearQuadratic: return {{"a", a}, {"b1", b1}, {"b2", b2}};
  }
  return {};
}

ExampleKind example_kind_from_string(const std::string& s) {
  if (s == "single-factor" || s == "ex1") return ExampleKind::SingleFactor;
  if (s == "linear-quadratic" || s == "ex2") return ExampleKind::LinearQuadratic;
  if (s == "two-factor" || s == "ex4") return ExampleKind::TwoFactor;
  if (s == "two-linear-quadratic" || s == "remark") return ExampleKind::TwoLinearQuadratic;
  throw InvalidArgument("unknown example '" + s + "'");
}

WeightSpec example_weight(const ExampleId& ex) {
  switch (ex.kind) {
    case ExampleKind::SingleFactor:
      return ex.a == 0.0 ? WeightSpec::product({}) : WeightSpec::product({-ex.a});
    case ExampleKind::LinearQuadratic: {
      const double a = ex.a, b = ex.b;
      return WeightSpec::generic(std::vector<std::vector<double>>{
          {1.0}, {-2 * b, -2 * a}, {a * a, 4 * a * b}, {-2 * a * a * b}});
    }
    case ExampleKind::TwoFactor:
      return WeightSpec::product({-ex.a1, -ex.a2});
    case ExampleKind::TwoLinearQuadratic: {
      const double a = ex.a, s = ex.b1 + ex.b2, p = ex.b1 * ex.b2;
      return WeightSpec::generic(std::vector<std::vector<double>>{
          {1.0}, {-s, -2 * a}, {p + a * a, 2 * a * s}, {-a * a * s, -2 * a * p}, {a * a * p}});
    }
  }
  throw InvalidArgument("unknown example");
}

ExpectedBlocks expected_total_blocks(const ExampleId& ex, int n) {
  ExpectedBlocks e;
  if (n < 0) return e;
  if (ex.kind != ExampleKind::SingleFactor && ex.kind != ExampleKind::LinearQuadratic) return e;
  Eigen::MatrixXd ax = Eigen::MatrixXd::Zero(n + 1, n + 2);
  Eigen::MatrixXd ay = Eigen::MatrixXd::Zero(n + 1, n + 2);
  ax(0, 0) = 0.5 * ex.a;
  ax(0, 1) = 0.5 * std::sqrt(1 - ex.a * ex.a);
  for (int i = 1; i <= n; ++i) ax(i, i + 1) = 0.5;
  for (int i = 0; i <= n; ++i) ay(i, i) = 0.5;
  e.ax = ax;
  e.ay = ay;
  Eigen::MatrixXd bx = Eigen::MatrixXd::Zero(n + 1, n + 1);
  Eigen::MatrixXd by = Eigen::MatrixXd::Zero(n + 1, n + 1);
  if (ex.kind == ExampleKind::LinearQuadratic) {
    const double a = ex.a, b = ex.b, s = std::sqrt(1 - a * a);
    if (n == 0) {
      bx(0, 0) = b;
      by(0, 0) = b * a;
    } else {
      bx(0, 0) = b * (1 - a * a);
      bx(0, 1) = bx(1, 0) = -b * a * s;
      bx(1, 1) = b * a * a;
    }
  }
  e.bx = bx;
  e.by = by;
  return e;
}

std::optional<UnivariatePoly> expected_marginal_poly(const ExampleId& ex, int n) {
  if (n < 0) return std::nullopt;
  auto u = [](int k) { return u_index<double>(k); };
  switch (ex.kind) {
    case ExampleKind::SingleFactor: return u(n);
    case ExampleKind::LinearQuadratic: return u(n) - (2 * ex.a * ex.b) * u(n - 1);
    case ExampleKind::TwoFactor: return u(n) - (ex.a1 * ex.a2) * u(n - 2);
    case ExampleKind::TwoLinearQuadratic: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<UnivariatePoly> literal_marginal_poly(const ExampleId& ex, int n) {
  if (n < 0) return std::nullopt;
  auto u = [](int k) { return u_index<double>(k); };
  switch (ex.kind) {
    case ExampleKind::LinearQuadratic: {
      // The printed case split selects this branch for |2ab| < 1.
      const double c = 2 * ex.a * ex.b;
      if (std::abs(c) < 1) return c * u(n) - u(n - 1);
      return u(n) - c * u(n - 1);
    }
    case ExampleKind::TwoFactor: return u(n) - (ex.a1 * ex.a2) * u(n - 1);
    default: return std::nullopt;
  }
}

std::optional<double> expected_marginal_density(const ExampleId& ex, double y) {
  switch (ex.kind) {
    case ExampleKind::SingleFactor: return 1.0;
    case ExampleKind::LinearQuadratic:
      return 1.0 / (1 - 4 * ex.a * ex.b * y + 4 * ex.a * ex.a * ex.b * ex.b);
    case ExampleKind::TwoFactor: {
      const double c = ex.a1 * ex.a2;
      return (1 + c) / ((1 - c) * ((1 + c) * (1 + c) - 4 * c * y * y));
    }
    case ExampleKind::TwoLinearQuadratic: return std::nullopt;
  }
  return std::nullopt;
}

double marginal_constant(const ExampleId& ex) {
  const double two_over_pi = 2.0 / std::numbers::pi;
  switch (ex.kind) {
    case ExampleKind::SingleFactor:
    case ExampleKind::LinearQuadratic:
    case ExampleKind::TwoLinearQuadratic:
      return two_over_pi * (1 - ex.a * ex.a);
    case ExampleKind::TwoFactor:
      return two_over_pi * (1 - ex.a1 * ex.a1) * (1 - ex.a2 * ex.a2);
  }
  return two_over_pi;
}

std::optional<BivariatePoly> expected_qk(const ExampleId& ex, int k) {
  if (k < 1) return std::nullopt;
  const double a = ex.a, b = ex.b;
  switch (ex.kind) {
    case ExampleKind::SingleFactor:
      return qk_from_h<double>({mono({1}), mono({0, -2 * a}), mono({a * a})}, k);
    case ExampleKind::LinearQuadratic:
      return qk_from_h<double>(
          {mono({1}), mono({-2 * b, -2 * a}), mono({a * a, a * 4 * b}), mono({-2 * a * a * b})}, k);
    case ExampleKind::TwoFactor: {
      const double a1 = ex.a1, a2 = ex.a2;
      return qk_from_h<double>({mono({1}), mono({0, -2 * (a1 + a2)}),
                                mono({a1 * a1 + a2 * a2, 0, 4 * a1 * a2}),
                                mono({0, -2 * a1 * a2 * (a1 + a2)}), mono({a1 * a1 * a2 * a2})},
                               k);
    }
    case ExampleKind::TwoLinearQuadratic: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<BivariatePoly> literal_qk(const ExampleId& ex, int k) {
  if (k < 1 || ex.kind != ExampleKind::TwoFactor) return std::nullopt;
  const double a1 = ex.a1, a2 = ex.a2, c = -2 * a1 * a2 * (a1 + a2);
  return qk_from_h<double>({mono({1}), mono({c}), mono({a1 * a1 + a2 * a2, 0, 4 * a1 * a2}),
                            mono({c}), mono({a1 * a1 * a2 * a2})},
                           k);
}

bool RegressionReport::pass() const {
  for (const auto& c : checks)
    if (!c.informational && !c.pass) return false;
  return true;
}

nlohmann::json RegressionReport::to_json() const {
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"id", c.id},
                  {"origin", c.origin},
                  {"pass", c.pass},
                  {"informational", c.informational},
                  {"deviation", c.deviation},
                  {"tolerance", c.tolerance},
                  {"note", c.note}});
  return {{"name", name}, {"parameters", parameters}, {"depth", depth}, {"pass", pass()}, {"checks", cs}};
}

std::string RegressionReport::summary() const {
  std::ostringstream os;
  int failed = 0, info = 0;
  for (const auto& c : checks) {
    if (c.informational) ++info;
    else if (!c.pass) ++failed;
  }
  os << name << " depth " << depth << ": " << checks.size() << " checks, " << failed << " failed, "
     << info << " informational";
  for (const auto& c : checks)
    if (!c.pass)
      os << "\n  " << (c.informational ? "info " : "FAIL ") << c.id << " deviation " << c.deviation
         << (c.note.empty() ? "" : " (" + c.note + ")");
  return os.str();
}

namespace {

struct Recorder {
  RegressionReport& rep;

  void deviation(std::string id, std::string origin, double dev, double tol, std::string note = {},
                 bool informational = false) {
    CheckResult c;
    c.id = std::move(id);
    c.origin = std::move(origin);
    c.deviation = dev;
    c.tolerance = tol;
    c.pass = std::isfinite(dev) && dev <= tol;
    c.informational = informational;
    c.note = std::move(note);
    rep.checks.push_back(std::move(c));
  }

  void flag(std::string id, std::string origin, bool ok, std::string note = {}) {
    CheckResult c;
    c.id = std::move(id);
    c.origin = std::move(origin);
    c.pass = ok;
    c.note = std::move(note);
    rep.checks.push_back(std::move(c));
  }

  void structure(std::string id, const StructureReport& s) {
    CheckResult c;
    c.id = std::move(id);
    c.origin = "invariant";
    c.pass = s.pass;
    c.deviation = s.max_deviation;
    if (!s.pass) c.note = s.summary();
    rep.checks.push_back(std::move(c));
  }

  // Runs fn; an exception becomes a failed check.
  template <class F>
  void guard(const std::string& id, F&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      flag(id, "invariant", false, e.what());
    }
  }
};

double system_diff(const OrthoSystem& a, const OrthoSystem& b) {
  double d = 0.0;
  for (const auto& e : a.entries) d = std::max(d, max_abs_diff(e.poly, b.at(e.index).poly));
  return d;
}

double gram_defect(const MomentOracle& oracle, const std::vector<OrthoEntry>& es) {
  double d = 0.0;
  for (std::size_t i = 0; i < es.size(); ++i)
    for (std::size_t j = i; j < es.size(); ++j) {
      const double g = oracle.inner(es[i].poly, es[j].poly);
      d = std::max(d, std::abs(g - (i == j ? 1.0 : 0.0)));
    }
  return d;
}

double mat_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

void invariants(Recorder& rec, const MomentOracle& oracle, int depth, std::vector<TotalBlocks>* keep) {
  const WeightSpec& spec = oracle.spec();
  const int D = depth;
  constexpr double agree_tol = 1e-8, gram_tol = 1e-9, resid_tol = 1e-8;

  const auto st = is_stable(spec);
  rec.flag("weight.stable", "invariant", st.stable);

  rec.guard("total", [&] {
    const OrthoSystem sys = build_total_system(oracle, D + 1);
    const OrthoSystem ref = gram_schmidt(oracle, Ordering::TotalDegree, D + 1);
    rec.deviation("total.oracle-agreement", "invariant", system_diff(sys, ref), agree_tol);
    rec.deviation("total.gram", "invariant", gram_defect(oracle, sys.entries), gram_tol);

    std::vector<TotalBlocks> blocks;
    for (int n = 0; n <= D; ++n) blocks.push_back(total_blocks(oracle, sys, n));
    double resid = 0.0, cross = 0.0;
    for (int n = 1; n <= D; ++n) {
      resid = std::max(resid, blocks[n].residual);
      cross = std::max(cross, cross_level_defect(blocks[n - 1], blocks[n]));
    }
    rec.deviation("total.recurrence-residual", "invariant", resid, resid_tol);
    rec.deviation("total.cross-level", "invariant", cross, resid_tol);
    double sym = 0.0;
    for (const auto& b : blocks)
      sym = std::max({sym, mat_diff(b.bx, b.bx.transpose()), mat_diff(b.by, b.by.transpose())});
    rec.deviation("total.B-symmetric", "invariant", sym, 1e-12);

    const int from = std::max(0, ceil_half(spec.n_h() - 1));
    for (int n = from; n <= D; ++n)
      rec.structure("total.structure.n" + std::to_string(n), verify_total_structure(blocks[n], spec));
    if (keep) *keep = std::move(blocks);
  });

  rec.guard("lex", [&] {
    const OrthoSystem sys = build_lex_system(oracle, D, D);
    const OrthoSystem ref = gram_schmidt(oracle, Ordering::Lex, D, D);
    rec.deviation("lex.oracle-agreement", "invariant", system_diff(sys, ref), agree_tol);
    const int from = std::max(1, ceil_half(spec.n_h() + 1));
    for (int n = from; n <= D; ++n) {
      const LexBlocks b = lex_blocks(oracle, sys, n);
      rec.structure("lex.structure.n" + std::to_string(n), verify_lex_structure(b, spec));
      if (spec.is_product() && n > 2 * spec.n_f() && D > 2 * spec.n_f())
        rec.structure("lex.collapse.n" + std::to_string(n), verify_half_collapse(b));
    }
    const ConnectionView cv = connection_reshape(sys, D, D);
    rec.flag("lex.connection-triangular", "invariant", cv.lower_triangular_positive);
    rec.deviation("lex.connection-reconstruction", "invariant", cv.reconstruction_error, 1e-9);
  });

  if (!spec.is_product()) return;
  rec.guard("revlex", [&] {
    const OrthoSystem sys = build_revlex_system(oracle, D, D);
    const OrthoSystem ref = gram_schmidt(oracle, Ordering::RevLex, D, D);
    rec.deviation("revlex.oracle-agreement", "invariant", system_diff(sys, ref), agree_tol);
    const int from = std::max(1, ceil_half(spec.n_h() + 1));
    for (int t = from; t <= D; ++t) {
      const LexBlocks b = lex_blocks(oracle, sys, t);
      rec.structure("revlex.structure.n" + std::to_string(t), verify_lex_structure(b, spec));
      if (t > 2 * spec.n_f() && D > 2 * spec.n_f())
        rec.structure("revlex.collapse.n" + std::to_string(t), verify_half_collapse(b));
    }
  });
}

}  // namespace

RegressionReport run_invariants(const WeightSpec& spec, int depth, const QuadratureOptions& opt) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  RegressionReport rep;
  rep.name = "weight " + spec.fingerprint();
  rep.parameters = {{"fingerprint", spec.fingerprint()}};
  rep.depth = depth;
  Recorder rec{rep};
  MomentOracle oracle(spec, opt);
  invariants(rec, oracle, depth, nullptr);
  return rep;
}

RegressionReport run_regression(const ExampleId& ex, int depth, const QuadratureOptions& opt) {
  if (depth < 1) throw InvalidArgument("depth must be at least 1");
  RegressionReport rep;
  rep.name = ex.name();
  rep.parameters = ex.parameters();
  rep.depth = depth;
  Recorder rec{rep};
  const WeightSpec spec = example_weight(ex);
  MomentOracle oracle(spec, opt);
  std::vector<TotalBlocks> blocks;
  invariants(rec, oracle, depth, &blocks);
  const std::string tag = ex.name();

  // Closed-form recurrence blocks.
  if (!blocks.empty()) {
    double dax = 0, day = 0, dbx = 0, dby = 0;
    bool any = false, any_b = false;
    for (int n = 0; n <= depth; ++n) {
      const auto e = expected_total_blocks(ex, n);
      if (e.ax) any = true, dax = std::max(dax, mat_diff(blocks[n].ax, *e.ax));
      if (e.ay) day = std::max(day, mat_diff(blocks[n].ay, *e.ay));
      if (e.bx) any_b = true, dbx = std::max(dbx, mat_diff(blocks[n].bx, *e.bx));
      if (e.by) dby = std::max(dby, mat_diff(blocks[n].by, *e.by));
    }
    if (any) {
      rec.deviation(tag + ".A_x", "closed-form", dax, 1e-8);
      rec.deviation(tag + ".A_y", "closed-form", day, 1e-8);
    }
    if (any_b) {
      rec.deviation(tag + ".B_x", "closed-form", dbx, 1e-8);
      rec.deviation(tag + ".B_y", "closed-form", dby, 1e-8);
    }
  }

  // q_k as printed against the construction.
  {
    double d = 0, dl = 0;
    bool any = false, any_l = false;
    for (int k = 1; k <= depth + 1; ++k) {
      const BivariatePoly q = build_qk(spec, k);
      const double scale = std::max(1.0, max_abs_coeff(q));
      if (auto e = expected_qk(ex, k)) any = true, d = std::max(d, max_abs_diff(q, *e) / scale);
      if (auto e = literal_qk(ex, k)) any_l = true, dl = std::max(dl, max_abs_diff(q, *e) / scale);
    }
    if (any) rec.deviation(tag + ".q_k", "closed-form", d, 1e-14);
    if (any_l)
      rec.deviation(tag + ".q_k.literal", "literal", dl, 1e-14,
                    "printed U_{k-1} and U_{k-3} coefficients differ from the expansion of h", true);
  }

  // Marginal density.
  {
    double d = 0;
    bool any = false;
    for (double y : {-0.9, -0.35, 0.0, 0.4, 0.85}) {
      auto e = expected_marginal_density(ex, y);
      if (!e) continue;
      any = true;
      const double v = marginal_constant(ex) * univariate_integral(spec, [](double) { return 1.0; }, y);
      d = std::max(d, std::abs(v - *e) / std::abs(*e));
    }
    if (any) rec.deviation(tag + ".marginal-density", "closed-form", d, 1e-9);
  }

  // p_n^0 against the marginal family.
  rec.guard(tag + ".marginal-family", [&] {
    const OrthoSystem sys = build_total_system(oracle, depth);
    double d = 0, dl = 0, ydep = 0;
    bool any = false, any_l = false;
    for (int n = 0; n <= depth; ++n) {
      const OrthoEntry& e = sys.at({0, n});
      for (int i = 1; i < e.poly.coeffs().rows(); ++i)
        for (int j = 0; j < e.poly.coeffs().cols(); ++j) ydep = std::max(ydep, std::abs(e.poly.coeffs()(i, j)));
      if (auto v = expected_marginal_poly(ex, n)) {
        any = true;
        auto ref = normalize_entry(oracle, lift_y(*v), Ordering::TotalDegree, {0, n}, "closed");
        d = std::max(d, max_abs_diff(e.poly, ref.poly));
      }
      if (auto v = literal_marginal_poly(ex, n)) {
        any_l = true;
        const BivariatePoly lp = lift_y(*v);
        if (lp.leading_slot(Ordering::TotalDegree) == Slot{0, n}) {
          auto ref = normalize_entry(oracle, lp, Ordering::TotalDegree, {0, n}, "closed");
          dl = std::max(dl, max_abs_diff(e.poly, ref.poly));
        } else {
          dl = std::max(dl, 1.0);
        }
      }
    }
    rec.deviation(tag + ".p_n^0.y-only", "derived", ydep, 1e-9);
    if (any) rec.deviation(tag + ".p_n^0.marginal", "closed-form", d, 1e-8);
    if (any_l)
      rec.deviation(tag + ".p_n^0.literal", "literal", dl, 1e-8, "marginal family as printed", true);
  });

  if (ex.kind == ExampleKind::LinearQuadratic) {
    rec.flag(tag + ".kappa", "derived", spec.kappa() == 1,
             "max deg h_i = " + std::to_string(spec.kappa()));
    rec.guard(tag + ".lex-kappa2", [&] {
      const OrthoSystem sys = build_lex_system(oracle, depth, depth);
      for (int n = std::max(1, ceil_half(spec.n_h() + 1)); n <= depth; ++n)
        rec.structure(tag + ".lex.structure-kappa2.n" + std::to_string(n),
                      verify_lex_structure(lex_blocks(oracle, sys, n), spec, 2));
    });
  }
  return rep;
}

}  // namespace bsz2d
