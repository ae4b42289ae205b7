#include "bsz2d/szego.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace bsz2d {

BivariatePoly build_qk(const WeightSpec& spec, int k) {
  if (k < 0) throw InvalidArgument("q_k needs k >= 0");
  auto q = qk_from_h(spec.h(), k);
  return spec.reflected() ? swap_xy(q) : q;
}

BivariatePoly build_tilde_ql(const WeightSpec& spec, int l) {
  return build_qk(tilde_expand(spec), l);
}

std::optional<double> qk_norm_closed(const WeightSpec& spec, int k) {
  const int n = spec.n_h();
  if (k < ceil_half(n - 2)) {
    std::ostringstream os;
    os << "closed-form norm needs k >= " << ceil_half(n - 2) << ", got " << k;
    throw BelowThreshold(os.str());
  }
  const double half_pi = std::numbers::pi / 2;
  if (k >= ceil_half(n - 1)) return half_pi;
  if (2 * k + 2 == n) {
    const auto& top = spec.h().back();
    if (top.degree() > 0) return std::nullopt;
    return half_pi * (1.0 - top.coeff(0));
  }
  return std::nullopt;
}

UnivariatePoly q_1d(const std::vector<double>& h, int t) {
  UnivariatePoly out(Basis::ChebU, {});
  for (int i = 0; i < static_cast<int>(h.size()); ++i)
    out = out + h[i] * u_index<double>(t - i);
  return out;
}

Completion complete_1d(const std::vector<double>& h, int k, double tol) {
  const int n = static_cast<int>(h.size()) - 1;
  if (n < 0 || std::abs(h[0] - 1.0) > 1e-12) throw InvalidWeight("complete_1d needs h_0 = 1");
  const int kmax = ceil_half(n - 2) - 1;
  if (k < 0 || k > kmax) {
    std::ostringstream os;
    os << "complete_1d needs 0 <= k <= " << kmax << " for N = " << n << ", got " << k;
    throw InvalidArgument(os.str());
  }
  auto h_at = [&](int j) { return j >= 0 && j <= n ? h[j] : 0.0; };

  const int lo = k + 1, hi = n - k - 2;
  for (int t = hi; t >= lo; --t)
    if (std::abs(h_at(0) - h_at(2 * t + 2)) < tol) {
      std::ostringstream os;
      os << "completion pivot h_0 - h_" << 2 * t + 2 << " vanishes at t = " << t;
      throw EliminationBreakdown(t, os.str());
    }

  // Square system: pick h'_t so every U_s coefficient, lo <= s <= hi, of
  // q_k + sum h'_t q_t vanishes. Rows/columns run from the top degree down.
  const int dim = hi - lo + 1;
  const UnivariatePoly qk = q_1d(h, k);
  Eigen::MatrixXd m(dim, dim);
  Eigen::VectorXd rhs(dim);
  std::vector<UnivariatePoly> qs;
  for (int c = 0; c < dim; ++c) qs.push_back(q_1d(h, hi - c));
  for (int r = 0; r < dim; ++r) {
    const int s = hi - r;
    rhs(r) = -qk.coeff(s);
    for (int c = 0; c < dim; ++c) m(r, c) = qs[c].coeff(s);
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  lu.setThreshold(tol);
  if (!lu.isInvertible()) throw EliminationBreakdown(-1, "completion system is singular");
  const Eigen::VectorXd coef = lu.solve(rhs);

  Completion out;
  {
    UnivariatePoly pass = qk;
    for (int c = 0; c < dim; ++c) {
      const int t = hi - c;
      const double mult = -pass.coeff(t) / qs[c].coeff(t);
      out.sweep.emplace_back(t, mult);
      pass = pass + mult * qs[c];
    }
    for (int s = k + 1; s <= pass.degree(); ++s)
      out.sweep_residual = std::max(out.sweep_residual, std::abs(pass.coeff(s)));
  }
  UnivariatePoly acc = qk;
  for (int c = 0; c < dim; ++c) {
    out.chain.emplace_back(hi - c, coef(c));
    acc = acc + coef(c) * qs[c];
  }
  // Entries above k are cancellation residue; drop them.
  double scale = 1.0, residue = 0.0;
  for (int s = 0; s <= acc.degree(); ++s) {
    scale = std::max(scale, std::abs(acc.coeff(s)));
    if (s > k) residue = std::max(residue, std::abs(acc.coeff(s)));
  }
  if (residue > 1e-8 * scale) throw EliminationBreakdown(k, "completion left terms above degree k");
  std::vector<double> kept(acc.coeffs().begin(),
                           acc.coeffs().begin() + std::min<std::size_t>(acc.coeffs().size(), k + 1));
  out.q_hat = UnivariatePoly::cheb_u(std::move(kept));
  if (out.q_hat.degree() != k) throw EliminationBreakdown(k, "completed polynomial lost its degree");
  return out;
}

}  // namespace bsz2d
