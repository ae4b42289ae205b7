#pragma once

// The families q_k(x,y) = sum_i h_i(y) U_{k-i}(x) and their tilde mirrors,
// closed-form norms, and the one-variable low-degree completion.

#include <optional>
#include <utility>
#include <vector>

#include "bsz2d/poly.hpp"
#include "bsz2d/weights.hpp"

namespace bsz2d {

// sum_i h_i(y) U_{k-i}(x) for h_i given in any basis of y; result in ChebU.
template <class T>
BasicBivariatePoly<T> qk_from_h(const std::vector<BasicUnivariatePoly<T>>& h, int k) {
  BasicBivariatePoly<T> out(Basis::ChebU, {});
  for (int i = 0; i < static_cast<int>(h.size()); ++i) {
    if (h[i].is_zero() || k - i == -1) continue;
    out = out + mul(lift_x(u_index<T>(k - i)), lift_y(to_cheb_u(h[i])));
  }
  return out;
}

// q_k in ChebU x ChebU. For a reflected product weight the parameter
// variable is x, so the result is the tilde family.
BivariatePoly build_qk(const WeightSpec& spec, int k);
// q~_l(x,y) = sum_j h~_j(x) U_{l-j}(y).
BivariatePoly build_tilde_ql(const WeightSpec& spec, int l);

// Squared norm of q_k under sqrt(1-x^2)/|h(z,y)|^2 dx (no 2/pi factor).
// Throws BelowThreshold for k < ceil((N_h-2)/2).
std::optional<double> qk_norm_closed(const WeightSpec& spec, int k);

// One variable, constant coefficients: q_t(x) = sum_i h_i U_{t-i}(x).
UnivariatePoly q_1d(const std::vector<double>& h, int t);

struct Completion {
  UnivariatePoly q_hat;                         // ChebU, exact degree k
  std::vector<std::pair<int, double>> chain;    // (t, h'_t), t descending
  // One top-down pass cancelling U_t with q_t, t descending. Lower q_t
  // reach back above their own degree, so this pass alone leaves residue
  // above k once N > 2k+3; `chain` is the exact solution.
  std::vector<std::pair<int, double>> sweep;
  double sweep_residual = 0.0;
};

// q^_k = q_k + sum_{t=k+1}^{N-k-2} h'_t q_t with all U_s, s > k, cancelled.
Completion complete_1d(const std::vector<double>& h, int k, double tol = 1e-10);

}  // namespace bsz2d
