#pragma once

// Test-only ground truth, written without the library's quadrature or
// Gram-Schmidt: Gauss-Chebyshev (second kind) product rules evaluated from
// raw h coefficients, and Gram-Schmidt over monomials in long double.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "bsz2d/poly.hpp"

namespace testing_oracle {

// h[i] = monomial coefficients of h_i(y).
using HCoeffs = std::vector<std::vector<double>>;

inline double poly_at(const std::vector<double>& c, double t) {
  double acc = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
  return acc;
}

// |sum_i h_i(y) z^i|^2 at z = x + i sqrt(1-x^2).
inline double abs_h_sq(const HCoeffs& h, double x, double y) {
  const std::complex<double> z(x, std::sqrt(std::max(0.0, 1 - x * x)));
  std::complex<double> acc = 0, zi = 1;
  for (const auto& hi : h) {
    acc += poly_at(hi, y) * zi;
    zi *= z;
  }
  return std::norm(acc);
}

// h for prod_i (1 + 2 a_i y z + a_i^2 z^2), by direct polynomial products.
inline HCoeffs product_h(const std::vector<double>& a) {
  HCoeffs h{{1.0}};
  for (double ai : a) {
    HCoeffs next(h.size() + 2);
    auto add = [](std::vector<double>& dst, const std::vector<double>& src, double s, int shift) {
      if (dst.size() < src.size() + shift) dst.resize(src.size() + shift, 0.0);
      for (std::size_t k = 0; k < src.size(); ++k) dst[k + shift] += s * src[k];
    };
    for (std::size_t i = 0; i < h.size(); ++i) {
      add(next[i], h[i], 1.0, 0);
      add(next[i + 1], h[i], 2 * ai, 1);
      add(next[i + 2], h[i], ai * ai, 0);
    }
    h = std::move(next);
  }
  return h;
}

// Nodes and weights of int g(x) sqrt(1-x^2) dx ~ sum w_k g(x_k).
struct GaussU {
  std::vector<double> x, w;
  explicit GaussU(int n) : x(n), w(n) {
    for (int k = 1; k <= n; ++k) {
      const double t = k * std::numbers::pi / (n + 1);
      x[k - 1] = std::cos(t);
      w[k - 1] = std::numbers::pi / (n + 1) * std::sin(t) * std::sin(t);
    }
  }
};

// Probability measure proportional to sqrt(1-x^2) sqrt(1-y^2) / |h|^2.
class Measure {
 public:
  Measure(HCoeffs h, int nodes = 360) : h_(std::move(h)), g_(nodes) {
    inv_.resize(g_.x.size() * g_.x.size());
    double mass = 0;
    for (std::size_t a = 0; a < g_.x.size(); ++a)
      for (std::size_t b = 0; b < g_.x.size(); ++b) {
        const double v = g_.w[a] * g_.w[b] / abs_h_sq(h_, g_.x[a], g_.x[b]);
        inv_[a * g_.x.size() + b] = v;
        mass += v;
      }
    for (auto& v : inv_) v /= mass;
    raw_mass_ = mass * 4 / (std::numbers::pi * std::numbers::pi);
  }

  double integrate(const std::function<double(double, double)>& f) const {
    long double acc = 0;
    for (std::size_t a = 0; a < g_.x.size(); ++a)
      for (std::size_t b = 0; b < g_.x.size(); ++b) acc += inv_[a * g_.x.size() + b] * f(g_.x[a], g_.x[b]);
    return static_cast<double>(acc);
  }

  double moment(int i, int j) const {
    return integrate([&](double x, double y) { return std::pow(x, i) * std::pow(y, j); });
  }

  double inner(const bsz2d::BivariatePoly& p, const bsz2d::BivariatePoly& q) const {
    return integrate([&](double x, double y) { return bsz2d::evaluate(p, x, y) * bsz2d::evaluate(q, x, y); });
  }

  double raw_mass() const { return raw_mass_; }
  const HCoeffs& h() const { return h_; }

 private:
  HCoeffs h_;
  GaussU g_;
  std::vector<double> inv_;
  double raw_mass_ = 0;
};

// int f(x) sqrt(1-x^2)/|h(z,y)|^2 dx at fixed y (no normalization).
inline double univariate(const HCoeffs& h, double y, const std::function<double(double)>& f, int nodes = 2000) {
  GaussU g(nodes);
  long double acc = 0;
  for (int k = 0; k < nodes; ++k) acc += g.w[k] * f(g.x[k]) / abs_h_sq(h, g.x[k], y);
  return static_cast<double>(acc);
}

// Classical Gram-Schmidt with reorthogonalization over monomials x^i y^j in
// the given slot order, in long double, from the monomial moments. Returns
// monomial-basis orthonormal polynomials with positive leading coefficient.
inline std::vector<bsz2d::BivariatePoly> monomial_gram_schmidt(const Measure& mu,
                                                               const std::vector<bsz2d::Slot>& slots) {
  int deg = 0;
  for (auto s : slots) deg = std::max({deg, s.i, s.j});
  std::vector<std::vector<long double>> mom(2 * deg + 1, std::vector<long double>(2 * deg + 1));
  for (int i = 0; i <= 2 * deg; ++i)
    for (int j = 0; j <= 2 * deg; ++j) mom[i][j] = mu.moment(i, j);
  const std::size_t n = slots.size();
  auto ip = [&](const std::vector<long double>& u, const std::vector<long double>& v) {
    long double acc = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (u[a] != 0 && v[b] != 0) acc += u[a] * v[b] * mom[slots[a].i + slots[b].i][slots[a].j + slots[b].j];
    return acc;
  };
  std::vector<std::vector<long double>> basis;
  std::vector<bsz2d::BivariatePoly> out;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<long double> v(n, 0);
    v[k] = 1;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) {
        const long double c = ip(v, e);
        for (std::size_t a = 0; a < n; ++a) v[a] -= c * e[a];
      }
    const long double nv = std::sqrt(ip(v, v));
    for (auto& c : v) c /= nv;
    basis.push_back(v);
    bsz2d::Grid<double> g(deg + 1, deg + 1);
    for (std::size_t a = 0; a < n; ++a) g(slots[a].i, slots[a].j) = static_cast<double>(v[a]);
    out.emplace_back(bsz2d::Basis::Monomial, std::move(g));
  }
  return out;
}

// Random parameters of a product weight with n factors, |a| in [lo, hi].
inline std::vector<double> random_factors(std::mt19937_64& rng, int n, double lo = 0.1, double hi = 0.8) {
  std::uniform_real_distribution<double> mag(lo, hi);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> a(n);
  for (auto& v : a) v = sign(rng) ? mag(rng) : -mag(rng);
  return a;
}

// Stable h with q quadratic factors (1 + 2 a y z + a^2 z^2) and l linear
// factors (1 - c z), expanded by brute force. N_h = 2q + l.
inline HCoeffs random_stable_h(std::mt19937_64& rng, int q, int l) {
  HCoeffs h = product_h(random_factors(rng, q));
  for (double c : random_factors(rng, l, 0.05, 0.7)) {
    HCoeffs next(h.size() + 1);
    for (std::size_t i = 0; i < h.size(); ++i) {
      auto& d0 = next[i];
      if (d0.size() < h[i].size()) d0.resize(h[i].size(), 0.0);
      for (std::size_t k = 0; k < h[i].size(); ++k) d0[k] += h[i][k];
      auto& d1 = next[i + 1];
      if (d1.size() < h[i].size()) d1.resize(h[i].size(), 0.0);
      for (std::size_t k = 0; k < h[i].size(); ++k) d1[k] -= c * h[i][k];
    }
    h = std::move(next);
  }
  return h;
}

}  // namespace testing_oracle
