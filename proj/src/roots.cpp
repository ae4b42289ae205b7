#include "bsz2d/roots.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace bsz2d {

Eigen::MatrixXd balance_matrix(const Eigen::MatrixXd& a) {
  Eigen::MatrixXd b = a;
  const Eigen::Index n = b.rows();
  constexpr double radix = 2.0;
  bool converged = false;
  while (!converged) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(b(j, i));
        r += std::abs(b(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        converged = false;
        b.row(i) /= f;
        b.col(i) *= f;
      }
    }
  }
  return b;
}

RootResult polynomial_roots(std::span<const double> ascending, double drop_tol) {
  RootResult out;
  int deg = static_cast<int>(ascending.size()) - 1;
  out.nominal_degree = std::max(deg, 0);
  double scale = 0.0;
  for (double c : ascending) scale = std::max(scale, std::abs(c));
  while (deg > 0 && std::abs(ascending[deg]) <= drop_tol * scale) --deg;
  out.effective_degree = std::max(deg, 0);
  if (deg <= 0) return out;

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -ascending[i] / ascending[deg];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(balance_matrix(companion), false);
  const auto& ev = solver.eigenvalues();
  out.roots.assign(ev.data(), ev.data() + ev.size());
  return out;
}

}  // namespace bsz2d
