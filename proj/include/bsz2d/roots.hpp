#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace bsz2d {

// Parlett-Reinsch balancing by powers of two; returns D^{-1} A D.
Eigen::MatrixXd balance_matrix(const Eigen::MatrixXd& a);

struct RootResult {
  std::vector<std::complex<double>> roots;
  int nominal_degree = 0;
  int effective_degree = 0;  // after dropping negligible leading coefficients
};

// Roots of sum_k c[k] z^k via eigenvalues of the balanced companion matrix.
// Leading coefficients below drop_tol * max|c| are treated as zero.
RootResult polynomial_roots(std::span<const double> ascending, double drop_tol = 1e-14);

}  // namespace bsz2d
