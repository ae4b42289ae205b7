#pragma once

// Moments of the probability measure
//   dmu = c sqrt(1-x^2) sqrt(1-y^2) / |h(z,y)|^2 dx dy,   mu([-1,1]^2) = 1,
// by the trapezoid rule in (theta, phi) with x = cos theta, y = cos phi. The
// integrand is analytic and 2pi-periodic, so doubling the resolution until
// the table stops moving gives spectral accuracy and a cheap error estimate.
//
// The primary table holds modified moments m[c][d] = int U_c(x) U_d(y) dmu.
// Inner products of ChebU polynomials are linear in this table through the
// linearization U_a U_b = U_{|a-b|} + ... + U_{a+b}.

#include <functional>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bsz2d/ortho_system.hpp"
#include "bsz2d/weights.hpp"

namespace bsz2d {

struct QuadratureOptions {
  double tol = 1e-11;
  int max_resolution = 1 << 14;
  int threads = 1;
};

struct MomentTable {
  int degree = 0;                // m[c][d] known for c, d <= degree
  Eigen::MatrixXd modified;      // probability normalized
  Eigen::MatrixXd parity_prefix; // P[c][d] = sum of m[c'][d'] with c'=c, d'=d mod 2, c'<=c, d'<=d
  int resolution = 0;            // points per axis at convergence
  double error_estimate = 0.0;   // max change over the last doubling
  double raw_mass = 0.0;         // mass of (4/pi^2) sqrt sqrt / |h|^2
};

// Process-wide read-mostly cache keyed by weight fingerprint, tolerance and
// a degree bucket. The first stored table for a key is kept for good.
class MomentCache {
 public:
  static MomentCache& global();

  std::shared_ptr<const MomentTable> find(const std::string& fingerprint, double tol,
                                          int degree) const;
  // Returns the table now stored under the key (the earlier one if present).
  std::shared_ptr<const MomentTable> insert(const std::string& fingerprint, double tol,
                                            std::shared_ptr<const MomentTable> table);
  void clear();

 private:
  struct Key {
    std::string fingerprint;
    double tol;
    int bucket;
    auto operator<=>(const Key&) const = default;
  };
  mutable std::shared_mutex mu_;
  std::map<Key, std::shared_ptr<const MomentTable>> tables_;
};

// Compute a table directly, without touching any cache.
MomentTable compute_moment_table(const WeightSpec& spec, int degree,
                                 const QuadratureOptions& opt = {});

class MomentOracle {
 public:
  explicit MomentOracle(WeightSpec spec, QuadratureOptions opt = {});

  const WeightSpec& spec() const { return spec_; }
  const QuadratureOptions& options() const { return opt_; }

  // Table covering at least the given degree.
  std::shared_ptr<const MomentTable> table(int degree) const;

  double modified_moment(int c, int d) const;
  // int x^i y^j dmu.
  double moment(int i, int j) const;
  double moment_error(int i, int j) const;

  // <U_a(x)U_b(y), U_c(x)U_d(y)>.
  double basis_inner(Slot s, Slot t) const;
  double integrate(const BivariatePoly& p) const;
  double inner(const BivariatePoly& p, const BivariatePoly& q) const;

 private:
  WeightSpec spec_;
  QuadratureOptions opt_;
  mutable std::shared_mutex mu_;
  mutable std::shared_ptr<const MomentTable> table_;
};

// int f(x) sqrt(1-x^2) / |h(z,y)|^2 dx at fixed y (no normalizing factor).
double univariate_integral(const WeightSpec& spec, const std::function<double(double)>& f,
                           double y, double tol = 1e-11, int max_resolution = 1 << 16);
double univariate_moment(const WeightSpec& spec, int i, double y, double tol = 1e-11);

// Gram-Schmidt of the tensor-U basis in the given ordering over a window:
// total degree <= n, or [0,n]x[0,m] for lex/revlex.
OrthoSystem gram_schmidt(const MomentOracle& oracle, Ordering ordering, int n, int m = 0);
// Same over an explicit slot list, which must already be in `ordering`.
std::vector<OrthoEntry> gram_schmidt_slots(const MomentOracle& oracle, const std::vector<Slot>& slots);

// Orthonormalize arbitrary polynomials in the given order (sign: positive
// coefficient at each input's leading slot in `ordering`).
std::vector<BivariatePoly> orthonormalize(const MomentOracle& oracle,
                                          const std::vector<BivariatePoly>& polys,
                                          Ordering ordering);

// Monomial moment matrix H[a][b] = int s_a s_b dmu for the listed slots.
Eigen::MatrixXd monomial_moment_matrix(const MomentOracle& oracle, const std::vector<Slot>& slots);
// Largest deviation of H from "entry depends only on (i+k, j+l)".
double doubly_hankel_defect(const Eigen::MatrixXd& h, const std::vector<Slot>& slots);

}  // namespace bsz2d
