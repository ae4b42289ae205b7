#include "bsz2d/lex_order.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <type_traits>

#include <Eigen/SVD>

#include "bsz2d/parallel.hpp"
#include "bsz2d/total_order.hpp"

namespace bsz2d {

namespace {

bool forbidden(int i, int j, int r, int k, int m) { return j > m || i > r || (i == r && j > k); }

// Zeroes coefficients outside the admissible region of slot (r,k) in the
// window with y-range m; returns the largest magnitude removed.
double clean_outside(BivariatePoly& p, int r, int k, int m) {
  Grid<double> g = p.coeffs();
  double removed = 0.0;
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (forbidden(i, j, r, k, m)) {
        removed = std::max(removed, std::abs(g(i, j)));
        g(i, j) = 0.0;
      }
  p = BivariatePoly(p.basis(), std::move(g));
  return removed;
}

void check_high_window(int nf, int r, int k, int m) {
  if (r < 2 * nf || m < 2 * nf || k <= m - nf || k > m) {
    std::ostringstream os;
    os << "high band needs r, m >= " << 2 * nf << " and " << m - nf << " < k <= m; got (r,k,m) = ("
       << r << "," << k << "," << m << ")";
    throw InvalidArgument(os.str());
  }
}

template <class T>
double to_dbl(const T& v) {
  return static_cast<double>(v);
}

template <class T>
double max_abs(const LaurentPoly<T>& p) {
  double mx = 0.0;
  for (const auto& [e, c] : p.terms()) mx = std::max(mx, std::abs(to_dbl(c)));
  return mx;
}

// Drop rounding residue (double) relative to `scale`; exact types untouched.
template <class T>
LaurentPoly<T> settle(const LaurentPoly<T>& p, double scale) {
  if constexpr (std::is_same_v<T, double>) return p.pruned(1e-12 * std::max(scale, 1.0));
  else return p;
}

}  // namespace

int lex_low_threshold(const WeightSpec& spec) { return std::max(0, ceil_half(spec.n_h() - 1)); }

OrthoEntry build_lex_low(const MomentOracle& oracle, int r, int k) {
  const int thr = lex_low_threshold(oracle.spec());
  if (r < thr || k < 0) {
    std::ostringstream os;
    os << "lex low band needs r >= " << thr << " and k >= 0, got (r,k) = (" << r << "," << k << ")";
    throw BelowThreshold(os.str());
  }
  auto p = times_u_y(build_qk(oracle.spec(), r), k);
  return normalize_entry(oracle, std::move(p), Ordering::Lex, {r, k}, "closed");
}

LexHighResult build_lex_high(const MomentOracle& oracle, int r, int k, int m) {
  const WeightSpec base = WeightSpec::product(oracle.spec().factors());
  const int nf = base.n_f();
  check_high_window(nf, r, k, m);
  const int terms = k - (m - nf);

  std::vector<BivariatePoly> gens;
  for (int j = 0; j < terms; ++j) {
    gens.push_back(times_u_y(build_qk(base, r + j), k - j));
    gens.push_back(times_u_x(build_tilde_ql(base, m + 1 + j), r + k - m - 1 - j));
  }
  int rows = 0, cols = 0;
  for (const auto& g : gens) {
    rows = std::max(rows, g.coeffs().rows());
    cols = std::max(cols, g.coeffs().cols());
  }
  std::vector<Slot> bad;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      if (forbidden(i, j, r, k, m)) bad.push_back({i, j});
  Eigen::MatrixXd a(bad.size(), gens.size());
  for (std::size_t row = 0; row < bad.size(); ++row)
    for (std::size_t c = 0; c < gens.size(); ++c) a(row, c) = gens[c].coeff(bad[row].i, bad[row].j);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-8 * smax) ++rank;
  LexHighResult res;
  res.nullity = static_cast<int>(gens.size()) - rank;
  res.sigma_gap = rank > 0 ? sv(rank - 1) / smax : 0.0;
  if (res.nullity != 1) {
    std::ostringstream os;
    os << "high-band system at (r,k,m) = (" << r << "," << k << "," << m << ") has nullity "
       << res.nullity << ", expected 1";
    throw DegenerateWindow(res.nullity, os.str());
  }
  Eigen::VectorXd v = svd.matrixV().col(gens.size() - 1);
  res.a0_anomaly = std::abs(v(0)) < 1e-8 * v.norm();
  if (!res.a0_anomaly) v /= v(0);

  BivariatePoly p(Basis::ChebU, {});
  for (std::size_t c = 0; c < gens.size(); ++c) p = p + v(c) * gens[c];
  res.forbidden_residual = clean_outside(p, r, k, m);
  for (int j = 0; j < terms; ++j) {
    res.a.push_back(v(2 * j));
    res.b.push_back(v(2 * j + 1));
  }
  res.pre_norm = std::sqrt(oracle.inner(p, p));
  res.entry = normalize_entry(oracle, std::move(p), Ordering::Lex, {r, k}, "closed");
  return res;
}

template <class T>
RecursionResult<T> lex_high_recursion(const std::vector<T>& a, int r, int k, int m, double tol) {
  const int nf = static_cast<int>(a.size());
  check_high_window(nf, r, k, m);
  const int steps = k - (m - nf);
  const auto h = product_h<T>(a);
  using Poly = BasicBivariatePoly<T>;
  using Laurent = LaurentPoly<T>;
  auto q = [&](int idx) { return qk_from_h(h, idx); };
  auto qt = [&](int idx) { return swap_xy(qk_from_h(h, idx)); };

  // S^j_{r,mu} and its mirror for coefficient lists c, d.
  auto family = [&](const std::vector<T>& c, const std::vector<T>& d, int j, int mu) {
    Poly s(Basis::ChebU, {});
    for (int al = 0; al < static_cast<int>(c.size()); ++al)
      s = s + c[al] * times_u_y(q(r + al), mu - nf + j - al);
    for (int be = 0; be < static_cast<int>(d.size()); ++be)
      s = s + d[be] * times_u_x(qt(mu + 1 + be), r - nf + j - 1 - be);
    return s;
  };
  auto mirror = [&](const std::vector<T>& c, const std::vector<T>& d, int j, int mu) {
    Poly s(Basis::ChebU, {});
    for (int al = 0; al < static_cast<int>(c.size()); ++al)
      s = s + c[al] * times_u_x(qt(mu + al), r - nf + j - al);
    for (int be = 0; be < static_cast<int>(d.size()); ++be)
      s = s + d[be] * times_u_y(q(r + 1 + be), mu - nf + j - 1 - be);
    return s;
  };

  Laurent omega = Laurent::monomial(0, 0);
  Laurent omega_j = Laurent::monomial(0, 0);
  for (const T& ai : a) {
    omega = omega * (Laurent::monomial(0, 0) + Laurent::monomial(1, 1, ai));
    omega_j = omega_j * (Laurent::monomial(0, 1) + Laurent::monomial(1, 0, ai));
  }

  RecursionResult<T> out;
  out.c = {T(1)};
  for (int j = 0; j < steps; ++j) {
    const int mu = m + steps - j - 1;
    const Laurent ta = t_map(family(out.c, out.d, j, mu + 1)).w_row(-(mu + 1));
    const Laurent tb = t_map(mirror(out.c, out.d, j, mu + 1)).w_row(-(mu + 1));
    // Pivot on the largest corner coefficient of the mirror row.
    std::optional<std::pair<int, int>> pivot;
    double best = 0.0;
    for (const auto& [e, v] : tb.terms())
      if (std::abs(to_dbl(v)) > best) {
        best = std::abs(to_dbl(v));
        pivot = e;
      }
    if (!pivot || best < tol) {
      std::ostringstream os;
      os << "elimination corner coefficient vanishes at step " << j + 1;
      throw EliminationBreakdown(j + 1, os.str());
    }
    const T kk = ta.coeff(pivot->first, pivot->second) / tb.coeff(pivot->first, pivot->second);

    std::vector<T> c(std::max(out.c.size(), out.d.size() + 1), T(0));
    std::vector<T> d(std::max(out.d.size() + 1, out.c.size()), T(0));
    for (std::size_t al = 0; al < c.size(); ++al) {
      if (al < out.c.size()) c[al] += out.c[al];
      if (al >= 1 && al - 1 < out.d.size()) c[al] -= kk * out.d[al - 1];
    }
    for (std::size_t be = 0; be < d.size(); ++be) {
      if (be >= 1 && be - 1 < out.d.size()) d[be] += out.d[be - 1];
      if (be < out.c.size()) d[be] -= kk * out.c[be];
    }
    out.c = std::move(c);
    out.d = std::move(d);

    Laurent next = omega_j - kk * omega_j.swapped();
    next = settle(next, max_abs(omega_j));
    Laurent shifted;
    for (const auto& [e, v] : next.terms())
      if (e.second >= 1) shifted.add(e.first, e.second - 1, v);
    omega_j = shifted;

    EliminationState<T> st;
    st.step = j + 1;
    st.window = mu;
    st.k = kk;
    st.s = family(out.c, out.d, j + 1, mu);
    st.s_tilde = mirror(out.c, out.d, j + 1, mu);
    st.t_s = t_map(st.s);
    st.t_s_tilde = t_map(st.s_tilde);
    st.omega_j = omega_j;
    const Laurent expected = (omega * omega_j).shifted(-r, -mu);
    st.invariant_defect = max_abs(st.t_s - expected);
    st.homogeneous = omega_j.homogeneous_of_degree(nf - j - 1) && !omega_j.is_zero();
    st.row_cleared = settle(st.t_s.w_row(-(mu + 1)), max_abs(st.t_s)).is_zero();
    out.states.push_back(std::move(st));
  }
  out.poly = out.states.empty() ? family(out.c, out.d, 0, m) : out.states.back().s;
  return out;
}

template RecursionResult<double> lex_high_recursion(const std::vector<double>&, int, int, int, double);
template RecursionResult<Rational> lex_high_recursion(const std::vector<Rational>&, int, int, int,
                                                      double);

LexRecursionOutput build_lex_high_recursion(const MomentOracle& oracle, int r, int k, int m) {
  auto res = lex_high_recursion<double>(oracle.spec().factors(), r, k, m, 1e-12);
  BivariatePoly p = res.poly;
  clean_outside(p, r, k, m);
  return {normalize_entry(oracle, std::move(p), Ordering::Lex, {r, k}, "recursion"),
          std::move(res.states)};
}

LexRecursionOutput build_lex_high_recursion_exact(const MomentOracle& oracle, int r, int k, int m) {
  std::vector<Rational> a;
  for (double v : oracle.spec().factors()) a.push_back(to_rational(v));
  auto res = lex_high_recursion<Rational>(a, r, k, m, 0.0);
  LexRecursionOutput out{normalize_entry(oracle, to_double(res.poly), Ordering::Lex, {r, k},
                                         "recursion-exact"),
                         {}};
  for (const auto& s : res.states) {
    EliminationState<double> d;
    d.step = s.step;
    d.window = s.window;
    d.s = to_double(s.s);
    d.s_tilde = to_double(s.s_tilde);
    d.t_s = t_map(d.s);
    d.t_s_tilde = t_map(d.s_tilde);
    for (const auto& [e, v] : s.omega_j.terms()) d.omega_j.add(e.first, e.second, static_cast<double>(v));
    d.k = static_cast<double>(s.k);
    d.invariant_defect = s.invariant_defect;
    d.homogeneous = s.homogeneous;
    d.row_cleared = s.row_cleared;
    out.states.push_back(std::move(d));
  }
  return out;
}

namespace {

enum class Band { Low, High, Oracle };

Band lex_band(const WeightSpec& spec, int r, int k, int m) {
  if (r >= lex_low_threshold(spec) && k <= m - spec.kappa()) return Band::Low;
  if (spec.is_product()) {
    const int nf = spec.n_f();
    if (r >= 2 * nf && m >= 2 * nf && k > m - nf && k <= m) return Band::High;
  }
  return Band::Oracle;
}

}  // namespace

OrthoEntry build_revlex(const MomentOracle& oracle, int l, int t, int n) {
  const WeightSpec& spec = oracle.spec();
  if (!spec.is_product()) throw Unsupported("reverse lex construction needs a product weight");
  BivariatePoly p;
  switch (lex_band(spec, t, l, n)) {
    case Band::Low:
      p = times_u_x(build_tilde_ql(WeightSpec::product(spec.factors()), t), l);
      break;
    case Band::High:
      p = swap_xy(build_lex_high(oracle, t, l, n).entry.poly);
      break;
    case Band::Oracle: {
      std::ostringstream os;
      os << "revlex slot (" << l << "," << t << ") with x-range " << n << " has no closed form";
      throw BelowThreshold(os.str());
    }
  }
  return normalize_entry(oracle, std::move(p), Ordering::RevLex, {l, t}, "closed");
}

OrthoSystem build_lex_system(const MomentOracle& oracle, int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("window sizes must be >= 0");
  OrthoSystem sys;
  sys.ordering = Ordering::Lex;
  sys.n = n;
  sys.m = m;
  const auto slots = lex_slots(n, m);
  oracle.table(2 * std::max(n, m) + 2);
  bool need_oracle = false;
  for (const auto& s : slots)
    if (lex_band(oracle.spec(), s.i, s.j, m) == Band::Oracle) need_oracle = true;
  std::vector<OrthoEntry> fallback;
  if (need_oracle) fallback = gram_schmidt_slots(oracle, slots);
  sys.entries.resize(slots.size());
  parallel_for(static_cast<int>(slots.size()), oracle.options().threads, [&](int idx) {
    const Slot s = slots[idx];
    switch (lex_band(oracle.spec(), s.i, s.j, m)) {
      case Band::Low:
        sys.entries[idx] = build_lex_low(oracle, s.i, s.j);
        break;
      case Band::High:
        sys.entries[idx] = build_lex_high(oracle, s.i, s.j, m).entry;
        break;
      case Band::Oracle:
        sys.entries[idx] = fallback[idx];
        break;
    }
  });
  return sys;
}

OrthoSystem build_revlex_system(const MomentOracle& oracle, int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("window sizes must be >= 0");
  const WeightSpec& spec = oracle.spec();
  if (!spec.is_product()) throw Unsupported("reverse lex construction needs a product weight");
  OrthoSystem sys;
  sys.ordering = Ordering::RevLex;
  sys.n = n;
  sys.m = m;
  const auto slots = revlex_slots(n, m);
  oracle.table(2 * std::max(n, m) + 2);
  bool need_oracle = false;
  for (const auto& s : slots)
    if (lex_band(spec, s.j, s.i, n) == Band::Oracle) need_oracle = true;
  std::vector<OrthoEntry> fallback;
  if (need_oracle) fallback = gram_schmidt_slots(oracle, slots);
  sys.entries.resize(slots.size());
  parallel_for(static_cast<int>(slots.size()), oracle.options().threads, [&](int idx) {
    const Slot s = slots[idx];
    sys.entries[idx] = lex_band(spec, s.j, s.i, n) == Band::Oracle ? fallback[idx]
                                                                     : build_revlex(oracle, s.i, s.j, n);
  });
  return sys;
}

std::vector<const OrthoEntry*> lex_level(const OrthoSystem& sys, int n) {
  std::vector<const OrthoEntry*> out;
  const bool rev = sys.ordering == Ordering::RevLex;
  for (const auto& e : sys.entries)
    if ((rev ? e.index.j : e.index.i) == n) out.push_back(&e);
  std::sort(out.begin(), out.end(), [rev](const OrthoEntry* a, const OrthoEntry* b) {
    return rev ? a->index.i < b->index.i : a->index.j < b->index.j;
  });
  return out;
}

ConnectionView connection_reshape(const OrthoSystem& lex_system, int n, int m) {
  if (lex_system.ordering != Ordering::Lex) throw InvalidArgument("connection view needs a lex system");
  const auto level = lex_level(lex_system, n);
  if (static_cast<int>(level.size()) != m + 1) {
    std::ostringstream os;
    os << "lex level " << n << " has " << level.size() << " entries, expected " << m + 1;
    throw InvalidArgument(os.str());
  }
  ConnectionView v;
  v.n = n;
  v.m = m;
  v.k.assign(n + 1, Eigen::MatrixXd::Zero(m + 1, m + 1));
  for (int l = 0; l <= m; ++l) {
    const auto mono = to_monomial(level[l]->poly);
    Grid<double> rebuilt(n + 1, m + 1);
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= m; ++j) {
        v.k[i](l, j) = mono.coeff(i, j);
        rebuilt(i, j) = v.k[i](l, j);
      }
    v.reconstruction_error = std::max(
        v.reconstruction_error, max_abs_diff(mono, BivariatePoly(Basis::Monomial, std::move(rebuilt))));
  }
  const auto& top = v.k[n];
  double scale = 0.0;
  v.min_diagonal = top(0, 0);
  for (int l = 0; l <= m; ++l) {
    v.min_diagonal = std::min(v.min_diagonal, top(l, l));
    scale = std::max(scale, std::abs(top(l, l)));
    for (int j = l + 1; j <= m; ++j) v.upper_defect = std::max(v.upper_defect, std::abs(top(l, j)));
  }
  v.lower_triangular_positive = v.min_diagonal > 0.0 && v.upper_defect <= 1e-8 * std::max(scale, 1.0);
  return v;
}

}  // namespace bsz2d
