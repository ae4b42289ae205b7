#pragma once

// Lexicographical (x-degree major) and reverse-lexicographical systems on the
// window [0,n] x [0,m]. p^k_{r,m} has lex leading slot (r, k).
//
//   low band   k <= m - kappa          q_r(x,y) U_k(y)
//   high band  m - N_f < k <= m        sum_j a_j q_{r+j} U_{k-j}(y)
//                                            + b_j q~_{m+1+j} U_{r+k-m-1-j}(x)
//
// The high band is solved as a nullspace problem (production path) and,
// independently, by the Laurent-side elimination recursion.

#include <vector>

#include "bsz2d/exact.hpp"
#include "bsz2d/laurent.hpp"
#include "bsz2d/moment_oracle.hpp"
#include "bsz2d/ortho_system.hpp"
#include "bsz2d/szego.hpp"

namespace bsz2d {

int lex_low_threshold(const WeightSpec& spec);  // ceil((N_h-1)/2), clamped at 0

OrthoEntry build_lex_low(const MomentOracle& oracle, int r, int k);

struct LexHighResult {
  OrthoEntry entry;
  double pre_norm = 0.0;       // norm with a_0 = 1
  int nullity = 0;
  double sigma_gap = 0.0;      // smallest kept / largest singular value
  double forbidden_residual = 0.0;
  bool a0_anomaly = false;
  std::vector<double> a, b;    // ansatz coefficients, a_0 = 1
};

LexHighResult build_lex_high(const MomentOracle& oracle, int r, int k, int m);

template <class T>
struct EliminationState {
  int step = 0;                  // j after the update
  int window = 0;                // mu: S^j_{r,mu}
  BasicBivariatePoly<T> s, s_tilde;
  LaurentPoly<T> t_s, t_s_tilde;
  LaurentPoly<T> omega_j;        // homogeneous of degree N_f - j
  T k{};                         // constant eliminated at this step
  double invariant_defect = 0;   // |T(S^j) - z^-r w^-mu omega omega^j|
  bool homogeneous = false;
  bool row_cleared = false;      // no w^{-(mu+1)} terms left
};

template <class T>
struct RecursionResult {
  BasicBivariatePoly<T> poly;   // S^J_{r,m}, leading coefficient 1 at (r,k)
  std::vector<T> c, d;
  std::vector<EliminationState<T>> states;
};

// Recursion over factor parameters a (any scalar type). Requires
// r, m >= 2 N_f and m - N_f < k <= m.
template <class T>
RecursionResult<T> lex_high_recursion(const std::vector<T>& a, int r, int k, int m, double tol);

extern template RecursionResult<double> lex_high_recursion(const std::vector<double>&, int, int,
                                                           int, double);
extern template RecursionResult<Rational> lex_high_recursion(const std::vector<Rational>&, int, int,
                                                             int, double);

struct LexRecursionOutput {
  OrthoEntry entry;
  std::vector<EliminationState<double>> states;
};

LexRecursionOutput build_lex_high_recursion(const MomentOracle& oracle, int r, int k, int m);
// Exact-rational recursion, converted to double and normalized at the end.
LexRecursionOutput build_lex_high_recursion_exact(const MomentOracle& oracle, int r, int k, int m);

// Reverse lex: p~^l_{n,t}, revlex leading slot (l, t) in the window
// [0,n] x [0,m]; l <= n - N_f low band, else high band.
OrthoEntry build_revlex(const MomentOracle& oracle, int l, int t, int n);

// Full window systems; slots outside both closed bands come from the oracle.
OrthoSystem build_lex_system(const MomentOracle& oracle, int n, int m);
OrthoSystem build_revlex_system(const MomentOracle& oracle, int n, int m);

// Entries of the lex level n (x-degree n) ordered by y-degree, or the revlex
// level t (y-degree t) ordered by x-degree.
std::vector<const OrthoEntry*> lex_level(const OrthoSystem& sys, int n);

struct ConnectionView {
  int n = 0, m = 0;
  std::vector<Eigen::MatrixXd> k;   // k[i](l, j): coefficient of x^i y^j in p^l_{n,m}
  double upper_defect = 0.0;        // largest |entry| above the diagonal of k[n]
  double min_diagonal = 0.0;
  double reconstruction_error = 0.0;
  bool lower_triangular_positive = false;
};

ConnectionView connection_reshape(const OrthoSystem& lex_system, int n, int m);

}  // namespace bsz2d
