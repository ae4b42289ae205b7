#include "bsz2d/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "bsz2d/lex_order.hpp"
#include "bsz2d/total_order.hpp"

namespace bsz2d {

namespace {

using Level = std::vector<const OrthoEntry*>;

Eigen::MatrixXd block(const MomentOracle& oracle, const Level& rows, const Level& cols, bool by_x) {
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto moved = by_x ? mul_x(rows[i]->poly) : mul_y(rows[i]->poly);
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = oracle.inner(moved, cols[j]->poly);
  }
  return out;
}

double residual(const Level& lo, const Level& mid, const Level& hi, const Eigen::MatrixXd& a_hi,
                const Eigen::MatrixXd& b, const Eigen::MatrixXd& a_lo_t, bool by_x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < mid.size(); ++i) {
    BivariatePoly r = by_x ? mul_x(mid[i]->poly) : mul_y(mid[i]->poly);
    for (std::size_t j = 0; j < hi.size(); ++j) r = r - a_hi(i, j) * hi[j]->poly;
    for (std::size_t j = 0; j < mid.size(); ++j) r = r - b(i, j) * mid[j]->poly;
    for (std::size_t j = 0; j < lo.size(); ++j) r = r - a_lo_t(i, j) * lo[j]->poly;
    worst = std::max(worst, max_abs_coeff(r));
  }
  return worst;
}

void require_level(const Level& l, std::size_t size, const char* what, int n) {
  if (l.size() != size) {
    std::ostringstream os;
    os << what << " level " << n << " has " << l.size() << " entries, expected " << size;
    throw InvalidArgument(os.str());
  }
}

struct Checker {
  StructureReport& rep;
  double tol;
  void expect(const std::string& name, int i, int j, double value, double expected) {
    const double dev = std::abs(value - expected);
    rep.max_deviation = std::max(rep.max_deviation, dev);
    if (dev > tol) {
      rep.pass = false;
      rep.violations.push_back({name, i, j, value, expected});
    }
  }
  void positive(const std::string& name, int i, int j, double value) {
    if (!(value > tol)) {
      rep.pass = false;
      rep.violations.push_back({name, i, j, value, 1.0});
    }
  }
};

void check_symmetric(Checker& ck, const std::string& name, const Eigen::MatrixXd& b) {
  ck.rep.checks.push_back(name + " symmetric");
  for (int i = 0; i < b.rows(); ++i)
    for (int j = i + 1; j < b.cols(); ++j) ck.expect(name + " symmetry", i, j, b(i, j) - b(j, i), 0.0);
}

void check_full_row_rank(Checker& ck, const std::string& name, const Eigen::MatrixXd& a) {
  ck.rep.checks.push_back(name + " full row rank");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const double smin = svd.singularValues().minCoeff();
  if (!(smin > ck.tol)) {
    ck.rep.pass = false;
    ck.rep.violations.push_back({name + " rank", 0, 0, smin, 1.0});
  }
}

}  // namespace

std::string StructureReport::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "FAIL") << ": " << checks.size() << " checks, " << violations.size()
     << " violations, max deviation " << max_deviation;
  for (const auto& v : violations)
    os << "\n  " << v.block << "(" << v.i << "," << v.j << ") = " << v.value << ", expected "
       << v.expected;
  return os.str();
}

TotalBlocks total_blocks(const MomentOracle& oracle, const OrthoSystem& sys, int n) {
  if (sys.ordering != Ordering::TotalDegree) throw InvalidArgument("total blocks need a total-degree system");
  if (n < 0 || n + 1 > sys.n) throw InvalidArgument("total blocks at level n need levels up to n+1");
  const Level mid = total_level(sys, n), hi = total_level(sys, n + 1);
  const Level lo = n > 0 ? total_level(sys, n - 1) : Level{};
  require_level(mid, n + 1, "total", n);
  require_level(hi, n + 2, "total", n + 1);
  TotalBlocks t;
  t.n = n;
  t.ax = block(oracle, mid, hi, true);
  t.bx = block(oracle, mid, mid, true);
  t.ay = block(oracle, mid, hi, false);
  t.by = block(oracle, mid, mid, false);
  if (n > 0) {
    require_level(lo, n, "total", n - 1);
    t.ax_below = block(oracle, mid, lo, true);
    t.ay_below = block(oracle, mid, lo, false);
    // A_{.,n-1} from the level below, transposed.
    const Eigen::MatrixXd ax_prev_t = block(oracle, lo, mid, true).transpose();
    const Eigen::MatrixXd ay_prev_t = block(oracle, lo, mid, false).transpose();
    t.residual = std::max(residual(lo, mid, hi, t.ax, t.bx, ax_prev_t, true),
                          residual(lo, mid, hi, t.ay, t.by, ay_prev_t, false));
  } else {
    const Eigen::MatrixXd none(1, 0);
    t.residual = std::max(residual({}, mid, hi, t.ax, t.bx, none, true),
                          residual({}, mid, hi, t.ay, t.by, none, false));
  }
  return t;
}

LexBlocks lex_blocks(const MomentOracle& oracle, const OrthoSystem& sys, int n) {
  if (sys.ordering == Ordering::TotalDegree) throw InvalidArgument("lex blocks need a lex or revlex system");
  const bool rev = sys.ordering == Ordering::RevLex;
  const int levels = rev ? sys.m : sys.n;  // largest level index
  const int width = rev ? sys.n : sys.m;   // vector length - 1
  if (n < 0 || n > levels) throw InvalidArgument("lex level outside the window");
  const bool by_x = !rev;
  const Level mid = lex_level(sys, n);
  require_level(mid, width + 1, rev ? "revlex" : "lex", n);
  LexBlocks out;
  out.ordering = sys.ordering;
  out.n = n;
  out.m = width;
  out.b = block(oracle, mid, mid, by_x);
  Level lo;
  if (n > 0) {
    lo = lex_level(sys, n - 1);
    out.a = block(oracle, lo, mid, by_x);
  }
  if (n + 1 <= levels) {
    const Level hi = lex_level(sys, n + 1);
    const Eigen::MatrixXd a_next = block(oracle, mid, hi, by_x);
    const Eigen::MatrixXd a_lo_t = n > 0 ? Eigen::MatrixXd(out.a.transpose()) : Eigen::MatrixXd(width + 1, 0);
    out.residual = residual(lo, mid, hi, a_next, out.b, a_lo_t, by_x);
  }
  return out;
}

StructureReport verify_total_structure(const TotalBlocks& t, const WeightSpec& spec, double tol) {
  const int nh = spec.n_h();
  const int n = t.n;
  if (n < std::max(0, ceil_half(nh - 1))) {
    std::ostringstream os;
    os << "total structure needs n >= " << ceil_half(nh - 1) << ", got " << n;
    throw InvalidArgument(os.str());
  }
  StructureReport rep;
  Checker ck{rep, tol};
  const int cy = std::max(0, ceil_half(nh - 1));
  const int dy = std::max(0, ceil_half(nh - 2));
  const int cx = std::max(0, ceil_half(nh + 1));
  const int dx = std::max(0, ceil_half(nh));

  rep.checks.push_back("A_y block pattern");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n + 1; ++j) {
      if (i >= cy) ck.expect("A_y", i, j, t.ay(i, j), i == j ? 0.5 : 0.0);
      else if (j >= cy) ck.expect("A_y", i, j, t.ay(i, j), 0.0);
    }
  rep.checks.push_back("A_y lower triangular, positive diagonal");
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 1; j <= n + 1; ++j) ck.expect("A_y", i, j, t.ay(i, j), 0.0);
    ck.positive("A_y diagonal", i, i, t.ay(i, i));
  }
  rep.checks.push_back("B_y block pattern");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i >= dy || j >= dy) ck.expect("B_y", i, j, t.by(i, j), 0.0);

  rep.checks.push_back("A_x block pattern");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n + 1; ++j) {
      if (i >= cx) ck.expect("A_x", i, j, t.ax(i, j), j == i + 1 ? 0.5 : 0.0);
      else if (j > cx) ck.expect("A_x", i, j, t.ax(i, j), 0.0);
    }
  if (cx >= 1 && cx - 1 <= n) rep.seam.push_back({"A_x", cx - 1, cx, t.ax(cx - 1, cx), 0.5});
  rep.checks.push_back("A_x lower Hessenberg, positive superdiagonal");
  for (int i = 0; i <= n; ++i) {
    for (int j = i + 2; j <= n + 1; ++j) ck.expect("A_x", i, j, t.ax(i, j), 0.0);
    ck.positive("A_x superdiagonal", i, i + 1, t.ax(i, i + 1));
  }
  rep.checks.push_back("B_x block pattern");
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (i >= dx || j >= dx) ck.expect("B_x", i, j, t.bx(i, j), 0.0);

  check_symmetric(ck, "B_x", t.bx);
  check_symmetric(ck, "B_y", t.by);
  check_full_row_rank(ck, "A_x", t.ax);
  check_full_row_rank(ck, "A_y", t.ay);
  return rep;
}

StructureReport verify_lex_structure(const LexBlocks& b, const WeightSpec& spec, std::optional<int> kappa,
                                     double tol) {
  const int nh = spec.n_h();
  if (b.n < std::max(1, ceil_half(nh + 1))) {
    std::ostringstream os;
    os << "lex structure needs level n >= " << std::max(1, ceil_half(nh + 1)) << ", got " << b.n;
    throw InvalidArgument(os.str());
  }
  const int kap = kappa.value_or(spec.kappa());
  const int low = std::clamp(b.m - kap + 1, 0, b.m + 1);
  StructureReport rep;
  Checker ck{rep, tol};
  rep.checks.push_back("A leading 1/2 identity block");
  rep.checks.push_back("B leading zero block");
  for (int i = 0; i <= b.m; ++i)
    for (int j = 0; j <= b.m; ++j) {
      if (i < low || j < low) {
        ck.expect("A", i, j, b.a(i, j), i == j ? 0.5 : 0.0);
        ck.expect("B", i, j, b.b(i, j), 0.0);
      }
    }
  rep.checks.push_back("A lower triangular, positive diagonal");
  for (int i = 0; i <= b.m; ++i) {
    for (int j = i + 1; j <= b.m; ++j) ck.expect("A", i, j, b.a(i, j), 0.0);
    ck.positive("A diagonal", i, i, b.a(i, i));
  }
  check_symmetric(ck, "B", b.b);
  return rep;
}

StructureReport verify_half_collapse(const LexBlocks& b, double tol) {
  if (b.a.size() == 0) throw InvalidArgument("collapse check needs level n >= 1");
  StructureReport rep;
  Checker ck{rep, tol};
  rep.checks.push_back("A = 1/2 I");
  rep.checks.push_back("B = 0");
  for (int i = 0; i <= b.m; ++i)
    for (int j = 0; j <= b.m; ++j) {
      ck.expect("A", i, j, b.a(i, j), i == j ? 0.5 : 0.0);
      ck.expect("B", i, j, b.b(i, j), 0.0);
    }
  return rep;
}

double mixed_action_defect(const std::vector<TotalBlocks>& levels, int n) {
  if (n < 0 || n + 1 >= static_cast<int>(levels.size()))
    throw InvalidArgument("mixed action at level n needs blocks up to n+1");
  const auto& c = levels[n];
  const auto& up = levels[n + 1];
  double d = 0.0;
  auto acc = [&](const Eigen::MatrixXd& m) {
    if (m.size()) d = std::max(d, m.cwiseAbs().maxCoeff());
  };
  acc(c.ay * up.ax - c.ax * up.ay);
  acc(c.ay * up.bx + c.by * c.ax - c.ax * up.by - c.bx * c.ay);
  Eigen::MatrixXd pn = c.ay * c.ax.transpose() + c.by * c.bx - c.ax * c.ay.transpose() - c.bx * c.by;
  if (n >= 1) {
    const auto& dn = levels[n - 1];
    pn += dn.ay.transpose() * dn.ax - dn.ax.transpose() * dn.ay;
    acc(c.by * dn.ax.transpose() + dn.ay.transpose() * dn.bx - c.bx * dn.ay.transpose() -
        dn.ax.transpose() * dn.by);
    if (n >= 2) {
      const auto& d2 = levels[n - 2];
      acc(dn.ay.transpose() * d2.ax.transpose() - dn.ax.transpose() * d2.ay.transpose());
    }
  }
  acc(pn);
  return d;
}

double cross_level_defect(const TotalBlocks& below, const TotalBlocks& level) {
  if (level.n != below.n + 1) throw InvalidArgument("cross-level check needs consecutive levels");
  return std::max((level.ax_below - below.ax.transpose()).cwiseAbs().maxCoeff(),
                  (level.ay_below - below.ay.transpose()).cwiseAbs().maxCoeff());
}

}  // namespace bsz2d
