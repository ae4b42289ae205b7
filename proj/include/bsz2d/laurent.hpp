#pragma once

// Finite Laurent polynomials in (z, w) and the T-map
//   U_i(x) U_j(y)  ->  z^{-i} w^{-j},   x = (z + 1/z)/2,  y = (w + 1/w)/2,
// which exposes the highest x/y powers of a polynomial as the most negative
// z/w exponents.

#include <map>
#include <utility>
#include <vector>

#include "bsz2d/poly.hpp"

namespace bsz2d {

template <class T>
class LaurentPoly {
 public:
  using Exponent = std::pair<int, int>;  // (power of z, power of w)
  using Table = std::map<Exponent, T>;

  LaurentPoly() = default;

  static LaurentPoly monomial(int a, int b, T c = T(1)) {
    LaurentPoly p;
    p.add(a, b, c);
    return p;
  }

  const Table& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  T coeff(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? T(0) : it->second;
  }

  void add(int a, int b, const T& c) {
    if (c == T(0)) return;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) {
      it->second += c;
      if (it->second == T(0)) terms_.erase(it);
    }
  }

  // Terms whose w-exponent equals b.
  LaurentPoly w_row(int b) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_)
      if (e.second == b) r.terms_.emplace(e, c);
    return r;
  }

  int min_w_exponent() const {
    int m = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      if (first || e.second < m) m = e.second;
      first = false;
    }
    return m;
  }

  // Multiply by z^a w^b.
  LaurentPoly shifted(int a, int b) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(Exponent{e.first + a, e.second + b}, c);
    return r;
  }

  // z <-> w.
  LaurentPoly swapped() const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(Exponent{e.second, e.first}, c);
    return r;
  }

  // Entries with |c| <= tol removed (double only; exact types use tol = 0).
  template <class Tol>
  LaurentPoly pruned(const Tol& tol) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_)
      if (c > tol || c < -tol) r.terms_.emplace(e, c);
    return r;
  }

  // True when every exponent (a, b) satisfies a + b == degree.
  bool homogeneous_of_degree(int degree) const {
    for (const auto& [e, c] : terms_)
      if (e.first + e.second != degree) return false;
    return true;
  }

  friend LaurentPoly operator+(LaurentPoly p, const LaurentPoly& q) {
    for (const auto& [e, c] : q.terms_) p.add(e.first, e.second, c);
    return p;
  }
  friend LaurentPoly operator-(LaurentPoly p, const LaurentPoly& q) {
    for (const auto& [e, c] : q.terms_) p.add(e.first, e.second, -c);
    return p;
  }
  friend LaurentPoly operator*(const T& s, const LaurentPoly& p) {
    LaurentPoly r;
    if (s == T(0)) return r;
    for (const auto& [e, c] : p.terms_) r.add(e.first, e.second, s * c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& p, const LaurentPoly& q) {
    LaurentPoly r;
    for (const auto& [e, c] : p.terms_)
      for (const auto& [f, d] : q.terms_) r.add(e.first + f.first, e.second + f.second, c * d);
    return r;
  }
  friend bool operator==(const LaurentPoly&, const LaurentPoly&) = default;

 private:
  Table terms_;
};

template <class T>
LaurentPoly<T> t_map(const BasicBivariatePoly<T>& p) {
  if (p.basis() != Basis::ChebU) throw BasisMismatch();
  LaurentPoly<T> r;
  const auto& g = p.coeffs();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) r.add(-i, -j, g(i, j));
  return r;
}

// p((z + 1/z)/2) for a univariate p, as a Laurent polynomial in z (w-exponent
// 0). Use swapped() for the w-variable.
template <class T>
LaurentPoly<T> joukowski(const BasicUnivariatePoly<T>& p) {
  auto mono = to_monomial(p);
  LaurentPoly<T> result;
  // ((z + 1/z)/2)^k, accumulated by repeated multiplication.
  LaurentPoly<T> power = LaurentPoly<T>::monomial(0, 0);
  LaurentPoly<T> x_term = LaurentPoly<T>::monomial(1, 0, T(1) / T(2)) +
                          LaurentPoly<T>::monomial(-1, 0, T(1) / T(2));
  for (int k = 0; k <= mono.degree(); ++k) {
    result = result + mono.coeff(k) * power;
    power = power * x_term;
  }
  return result;
}

double max_abs_diff(const LaurentPoly<double>& p, const LaurentPoly<double>& q);

}  // namespace bsz2d
