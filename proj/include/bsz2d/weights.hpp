#pragma once

// Weight specifications h(z, y) = sum_i h_i(y) z^i. The measure on [-1,1]^2 is
// proportional to sqrt(1-x^2) sqrt(1-y^2) / |h(z, y)|^2 with x = (z + 1/z)/2.
//
// Two forms are supported:
//   GenericH      h_i given directly as polynomials in y (monomial basis);
//   ProductOmega  h = prod_i (1 + 2 a_i y z + a_i^2 z^2), i.e. the reduction of
//                 omega(z,w) omega(z,1/w) with omega = prod_i (1 + a_i z w).
// A reflected ProductOmega plays the role of the tilde weight: the same factor
// list with the parameter variable read as x instead of y. Product weights are
// symmetric under x <-> y, so both views describe the same measure.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "bsz2d/laurent.hpp"
#include "bsz2d/poly.hpp"

namespace bsz2d {

// Coefficients h_i (monomial in the parameter variable) of
// prod_i (1 + 2 a_i t z + a_i^2 z^2).
template <class T>
std::vector<BasicUnivariatePoly<T>> product_h(const std::vector<T>& a) {
  using P = BasicUnivariatePoly<T>;
  std::vector<P> h{P::monomial({T(1)})};
  for (const T& ai : a) {
    const std::vector<P> g{P::monomial({T(1)}), P::monomial({T(0), T(2) * ai}),
                           P::monomial({ai * ai})};
    std::vector<P> next(h.size() + 2, P(Basis::Monomial, {}));
    for (std::size_t i = 0; i < h.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) next[i + j] = next[i + j] + mul(h[i], g[j]);
    h = std::move(next);
  }
  return h;
}

class WeightSpec {
 public:
  // h[i] is h_i in the monomial basis of the parameter variable.
  static WeightSpec generic(std::vector<UnivariatePoly> h);
  static WeightSpec generic(const std::vector<std::vector<double>>& h);
  static WeightSpec product(std::vector<double> a, bool reflected = false);

  bool is_product() const { return product_; }
  // Parameter variable is x (the tilde weight) rather than y.
  bool reflected() const { return reflected_; }

  const std::vector<double>& factors() const;
  // Factor parameters when known: product weights, and GenericH specs built
  // by expand_product.
  std::optional<std::vector<double>> factorization() const;
  const std::vector<UnivariatePoly>& h() const { return h_; }

  int n_h() const { return static_cast<int>(h_.size()) - 1; }
  int n_f() const;
  int kappa() const;

  // h_i(t) at a parameter value t.
  double h_at(int i, double t) const;
  std::complex<double> eval(std::complex<double> z, double t) const;
  // |h(e^{i theta}, t)|^2; uses the factored form for product weights.
  double abs_h_sq(double theta, double t) const;

  // Canonical digest of the measure-defining data (sorted a_i or h bytes).
  std::string fingerprint() const;

  // omega(z, w) = prod (1 + a_i z w) as a Laurent polynomial.
  LaurentPoly<double> omega() const;

 private:
  WeightSpec() = default;
  void validate_generic();

  bool product_ = false;
  bool reflected_ = false;
  bool has_factors_ = false;
  std::vector<double> a_;
  std::vector<UnivariatePoly> h_;

  friend WeightSpec expand_product(const std::vector<double>& a);
};

// GenericH expansion of prod (1 + 2 a_i y z + a_i^2 z^2).
WeightSpec expand_product(const std::vector<double>& a);
// Reflected weight h~(x, w) = omega(z,w) omega(1/z,w), as a reflected product
// weight; an involution. Needs a known factorization.
WeightSpec tilde_expand(const WeightSpec& spec);

struct StabilityReport {
  bool stable = false;
  bool analytic = false;       // certified from the factored form
  double min_modulus = 0.0;    // smallest |root| of h(., y) over the samples
  std::optional<double> witness_y;
  int samples = 0;
  std::vector<double> degree_drop_at;  // y values where h_N(y) ~ 0
  double max_abs_top = 0.0;            // max |h_N(y)| over the samples
};

StabilityReport is_stable(const WeightSpec& spec, int y_samples = 129, double tol = 1e-9,
                          int threads = 1);

}  // namespace bsz2d
