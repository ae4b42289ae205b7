#pragma once

// Block recurrence matrices by oracle inner products, and the structural
// checks on them.
//
// Total degree, level n:
//   x P_n = A_{x,n} P_{n+1} + B_{x,n} P_n + A_{x,n-1}^t P_{n-1}   (same for y)
// Lex, x-level n of the window with y-range m (vectors of length m+1):
//   A_{n,m} = <x p_{n-1,m}, p_{n,m}>,  B_{n,m} = <x p_{n,m}, p_{n,m}>
// Reverse lex mirrors the lex blocks with y and the y-levels.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsz2d/moment_oracle.hpp"
#include "bsz2d/ortho_system.hpp"

namespace bsz2d {

struct TotalBlocks {
  int n = 0;
  Eigen::MatrixXd ax, bx, ay, by;  // (n+1)x(n+2), (n+1)x(n+1)
  // <x P_n, P_{n-1}> and <y P_n, P_{n-1}> measured directly (empty for n = 0).
  Eigen::MatrixXd ax_below, ay_below;
  double residual = 0.0;  // three-term residual, coefficient-wise (needs level n-1 blocks)
};

// Needs levels n-1..n+1 in the system. The residual uses A_{.,n-1} computed
// at the level below.
TotalBlocks total_blocks(const MomentOracle& oracle, const OrthoSystem& sys, int n);

struct LexBlocks {
  Ordering ordering = Ordering::Lex;
  int n = 0, m = 0;
  Eigen::MatrixXd a;  // A_{n,m}; empty for n = 0
  Eigen::MatrixXd b;  // B_{n,m}
  std::optional<double> residual;  // needs the level above in the window
};

// For lex: level n is the x-degree and the multiplier is x. For revlex:
// level n is the y-degree and the multiplier is y.
LexBlocks lex_blocks(const MomentOracle& oracle, const OrthoSystem& sys, int n);

struct Violation {
  std::string block;
  int i = 0, j = 0;
  double value = 0.0;
  double expected = 0.0;
};

struct StructureReport {
  bool pass = true;
  std::vector<std::string> checks;       // names of the checks run
  std::vector<Violation> violations;
  std::vector<Violation> seam;           // reported, not asserted
  double max_deviation = 0.0;
  std::string summary() const;
};

// Block pattern for total degree (sizes from N = N_h):
//   A_y: rows >= ceil((N-1)/2) are (1/2) e_i, earlier rows vanish beyond that column;
//   B_y: zero outside a leading ceil((N-2)/2) block;
//   A_x: rows >= ceil((N+1)/2) are (1/2) e_{i+1}, earlier rows only up to that column;
//   B_x: zero outside a leading ceil(N/2) block;
// plus the generic shape: A_y lower triangular with positive diagonal, A_x
// lower Hessenberg with positive superdiagonal, full rank, symmetric B.
StructureReport verify_total_structure(const TotalBlocks& blocks, const WeightSpec& spec,
                                       double tol = 1e-8);

// Lex pattern for n >= ceil((N_h+1)/2): A = diag(1/2 I_{m-kappa+1}, C),
// B = diag(0, D); A lower triangular with positive diagonal; B symmetric.
// `kappa` defaults to the weight's. Revlex blocks use the mirrored roles.
StructureReport verify_lex_structure(const LexBlocks& blocks, const WeightSpec& spec,
                                     std::optional<int> kappa = std::nullopt, double tol = 1e-8);

// The product-weight collapse: A = 1/2 I and B = 0.
StructureReport verify_half_collapse(const LexBlocks& blocks, double tol = 1e-8);

// Commutation of x- and y-actions at level n (needs blocks n-2..n+1).
double mixed_action_defect(const std::vector<TotalBlocks>& levels, int n);
// max |<x P_n, P_{n-1}> - A_{x,n-1}^t| (and y).
double cross_level_defect(const TotalBlocks& below, const TotalBlocks& level);

}  // namespace bsz2d
