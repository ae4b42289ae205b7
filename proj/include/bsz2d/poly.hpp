#pragma once

// Polynomial values in one and two variables.
//
// The working basis is the Chebyshev polynomials of the second kind U_n,
// extended to negative indices by U_{-1} = 0 and U_{-n-2} = -U_n. Bivariate
// polynomials are dense coefficient grids over U_i(x) U_j(y) (or x^i y^j in
// the monomial basis), rows indexed by the x-degree.
//
// Everything here is templated on the coefficient scalar so the same code
// runs in double precision and in exact rational arithmetic (see exact.hpp).
// The zero polynomial is the empty grid; its degrees are kZeroDegree.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>
#include <vector>

#include "bsz2d/errors.hpp"
#include "bsz2d/ordering.hpp"

namespace bsz2d {

inline constexpr int kZeroDegree = std::numeric_limits<int>::min();

enum class Basis { ChebU, Monomial };

template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(int rows, int cols, T fill = T(0))
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(int i, int j) { return data_[index(i, j)]; }
  const T& operator()(int i, int j) const { return data_[index(i, j)]; }

  T at_or_zero(int i, int j) const {
    if (i < 0 || j < 0 || i >= rows_ || j >= cols_) return T(0);
    return data_[index(i, j)];
  }

  // Grows (never shrinks) keeping existing entries in place.
  void grow_to(int rows, int cols) {
    if (rows <= rows_ && cols <= cols_) return;
    Grid g(std::max(rows, rows_), std::max(cols, cols_));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) g(i, j) = (*this)(i, j);
    *this = std::move(g);
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * cols_ + j;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

// ---------------------------------------------------------------------------
// Univariate

template <class T>
class BasicUnivariatePoly {
 public:
  BasicUnivariatePoly() = default;
  BasicUnivariatePoly(Basis basis, std::vector<T> coeffs)
      : basis_(basis), coeffs_(std::move(coeffs)) {
    while (!coeffs_.empty() && coeffs_.back() == T(0)) coeffs_.pop_back();
  }

  static BasicUnivariatePoly monomial(std::vector<T> c) {
    return {Basis::Monomial, std::move(c)};
  }
  static BasicUnivariatePoly cheb_u(std::vector<T> c) {
    return {Basis::ChebU, std::move(c)};
  }
  static BasicUnivariatePoly constant(T c, Basis basis = Basis::Monomial) {
    return {basis, {c}};
  }

  Basis basis() const { return basis_; }
  const std::vector<T>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const {
    return coeffs_.empty() ? kZeroDegree : static_cast<int>(coeffs_.size()) - 1;
  }
  T coeff(int k) const {
    return (k < 0 || k >= static_cast<int>(coeffs_.size())) ? T(0) : coeffs_[k];
  }

  T operator()(const T& x) const {
    T acc(0);
    if (basis_ == Basis::Monomial) {
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    // Clenshaw for U_n: b_k = c_k + 2x b_{k+1} - b_{k+2}, value = b_0.
    T b1(0), b2(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      T b0 = *it + T(2) * x * b1 - b2;
      b2 = b1;
      b1 = b0;
    }
    return b1;
  }

  friend bool operator==(const BasicUnivariatePoly&, const BasicUnivariatePoly&) = default;

 private:
  Basis basis_ = Basis::ChebU;
  std::vector<T> coeffs_;
};

// U_n for any integer n, as a ChebU-basis polynomial.
template <class T>
BasicUnivariatePoly<T> u_index(int n) {
  if (n == -1) return {};
  std::vector<T> c(static_cast<std::size_t>(n >= 0 ? n : -n - 2) + 1, T(0));
  c.back() = n >= 0 ? T(1) : T(-1);
  return BasicUnivariatePoly<T>::cheb_u(std::move(c));
}

namespace detail {

// Column n holds the monomial coefficients of U_n, n <= deg.
template <class T>
std::vector<std::vector<T>> cheb_u_to_monomial_table(int deg) {
  std::vector<std::vector<T>> u(deg + 1, std::vector<T>(deg + 1, T(0)));
  if (deg < 0) return u;
  u[0][0] = T(1);
  if (deg >= 1) u[1][1] = T(2);
  for (int n = 1; n < deg; ++n)
    for (int k = 0; k <= n + 1; ++k) {
      T v = (k >= 1 ? T(2) * u[n][k - 1] : T(0)) - u[n - 1][k];
      u[n + 1][k] = v;
    }
  return u;  // u[n][k]: coefficient of x^k in U_n
}

// e[k][n]: coefficient of U_n in x^k.
template <class T>
std::vector<std::vector<T>> monomial_to_cheb_u_table(int deg) {
  std::vector<std::vector<T>> e(deg + 1, std::vector<T>(deg + 2, T(0)));
  if (deg < 0) return e;
  e[0][0] = T(1);
  for (int k = 0; k < deg; ++k)
    for (int n = 0; n <= k; ++n) {
      if (e[k][n] == T(0)) continue;
      T half = e[k][n] / T(2);
      e[k + 1][n + 1] += half;
      if (n >= 1) e[k + 1][n - 1] += half;
    }
  return e;
}

}  // namespace detail

template <class T>
BasicUnivariatePoly<T> to_monomial(const BasicUnivariatePoly<T>& p) {
  if (p.basis() == Basis::Monomial || p.is_zero()) return {Basis::Monomial, p.coeffs()};
  const int d = p.degree();
  auto u = detail::cheb_u_to_monomial_table<T>(d);
  std::vector<T> out(d + 1, T(0));
  for (int n = 0; n <= d; ++n)
    for (int k = 0; k <= n; ++k) out[k] += p.coeff(n) * u[n][k];
  return BasicUnivariatePoly<T>::monomial(std::move(out));
}

template <class T>
BasicUnivariatePoly<T> to_cheb_u(const BasicUnivariatePoly<T>& p) {
  if (p.basis() == Basis::ChebU || p.is_zero()) return {Basis::ChebU, p.coeffs()};
  const int d = p.degree();
  auto e = detail::monomial_to_cheb_u_table<T>(d);
  std::vector<T> out(d + 1, T(0));
  for (int k = 0; k <= d; ++k)
    for (int n = 0; n <= k; ++n) out[n] += p.coeff(k) * e[k][n];
  return BasicUnivariatePoly<T>::cheb_u(std::move(out));
}

template <class T>
BasicUnivariatePoly<T> in_basis(const BasicUnivariatePoly<T>& p, Basis b) {
  return b == Basis::ChebU ? to_cheb_u(p) : to_monomial(p);
}

template <class T>
BasicUnivariatePoly<T> operator+(const BasicUnivariatePoly<T>& p,
                                 const BasicUnivariatePoly<T>& q) {
  if (p.is_zero()) return q;
  if (q.is_zero()) return p;
  if (p.basis() != q.basis()) throw BasisMismatch();
  std::vector<T> c(std::max(p.coeffs().size(), q.coeffs().size()), T(0));
  for (std::size_t k = 0; k < c.size(); ++k)
    c[k] = p.coeff(static_cast<int>(k)) + q.coeff(static_cast<int>(k));
  return {p.basis(), std::move(c)};
}

template <class T>
BasicUnivariatePoly<T> operator*(const T& s, const BasicUnivariatePoly<T>& p) {
  std::vector<T> c = p.coeffs();
  for (auto& v : c) v *= s;
  return {p.basis(), std::move(c)};
}

template <class T>
BasicUnivariatePoly<T> operator-(const BasicUnivariatePoly<T>& p,
                                 const BasicUnivariatePoly<T>& q) {
  return p + T(-1) * q;
}

template <class T>
BasicUnivariatePoly<T> mul(const BasicUnivariatePoly<T>& p, const BasicUnivariatePoly<T>& q) {
  if (p.is_zero() || q.is_zero()) return {p.basis(), {}};
  if (p.basis() != q.basis()) throw BasisMismatch();
  std::vector<T> c(p.coeffs().size() + q.coeffs().size() - 1, T(0));
  for (int a = 0; a <= p.degree(); ++a) {
    if (p.coeff(a) == T(0)) continue;
    for (int b = 0; b <= q.degree(); ++b) {
      T v = p.coeff(a) * q.coeff(b);
      if (p.basis() == Basis::Monomial) {
        c[a + b] += v;
      } else {
        // U_a U_b = U_{|a-b|} + U_{|a-b|+2} + ... + U_{a+b}
        for (int k = std::abs(a - b); k <= a + b; k += 2) c[k] += v;
      }
    }
  }
  return {p.basis(), std::move(c)};
}

// ---------------------------------------------------------------------------
// Bivariate

template <class T>
class BasicBivariatePoly {
 public:
  BasicBivariatePoly() = default;
  BasicBivariatePoly(Basis basis, Grid<T> coeffs) : basis_(basis), coeffs_(std::move(coeffs)) {
    trim();
  }

  static BasicBivariatePoly term(Basis basis, int i, int j, T c) {
    Grid<T> g(i + 1, j + 1);
    g(i, j) = c;
    return {basis, std::move(g)};
  }

  Basis basis() const { return basis_; }
  const Grid<T>& coeffs() const { return coeffs_; }
  T coeff(int i, int j) const { return coeffs_.at_or_zero(i, j); }
  bool is_zero() const { return coeffs_.empty(); }

  int xdeg() const { return is_zero() ? kZeroDegree : coeffs_.rows() - 1; }
  int ydeg() const { return is_zero() ? kZeroDegree : coeffs_.cols() - 1; }

  int total_degree() const {
    int d = kZeroDegree;
    for (int i = 0; i < coeffs_.rows(); ++i)
      for (int j = 0; j < coeffs_.cols(); ++j)
        if (coeffs_(i, j) != T(0)) d = std::max(d, i + j);
    return d;
  }

  // Maximal nonzero slot in the given ordering; {kZeroDegree, kZeroDegree} for 0.
  Slot leading_slot(Ordering ord) const {
    Slot best{kZeroDegree, kZeroDegree};
    bool found = false;
    for (int i = 0; i < coeffs_.rows(); ++i)
      for (int j = 0; j < coeffs_.cols(); ++j)
        if (coeffs_(i, j) != T(0) && (!found || precedes(ord, best, Slot{i, j}))) {
          best = {i, j};
          found = true;
        }
    return best;
  }

  T leading_coeff(Ordering ord) const {
    if (is_zero()) return T(0);
    Slot s = leading_slot(ord);
    return coeffs_(s.i, s.j);
  }

  friend bool operator==(const BasicBivariatePoly&, const BasicBivariatePoly&) = default;

 private:
  void trim() {
    int r = coeffs_.rows(), c = coeffs_.cols();
    auto row_zero = [&](int i) {
      for (int j = 0; j < c; ++j)
        if (coeffs_(i, j) != T(0)) return false;
      return true;
    };
    auto col_zero = [&](int j) {
      for (int i = 0; i < r; ++i)
        if (coeffs_(i, j) != T(0)) return false;
      return true;
    };
    while (r > 0 && row_zero(r - 1)) --r;
    while (c > 0 && col_zero(c - 1)) --c;
    if (r == coeffs_.rows() && c == coeffs_.cols()) return;
    if (r == 0 || c == 0) {
      coeffs_ = Grid<T>();
      return;
    }
    Grid<T> g(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) g(i, j) = coeffs_(i, j);
    coeffs_ = std::move(g);
  }

  Basis basis_ = Basis::ChebU;
  Grid<T> coeffs_;
};

template <class T>
BasicBivariatePoly<T> operator+(const BasicBivariatePoly<T>& p, const BasicBivariatePoly<T>& q) {
  if (p.is_zero()) return q;
  if (q.is_zero()) return p;
  if (p.basis() != q.basis()) throw BasisMismatch();
  const int r = std::max(p.coeffs().rows(), q.coeffs().rows());
  const int c = std::max(p.coeffs().cols(), q.coeffs().cols());
  Grid<T> g(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) g(i, j) = p.coeff(i, j) + q.coeff(i, j);
  return {p.basis(), std::move(g)};
}

template <class T>
BasicBivariatePoly<T> operator*(const T& s, const BasicBivariatePoly<T>& p) {
  Grid<T> g = p.coeffs();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) g(i, j) *= s;
  return {p.basis(), std::move(g)};
}

template <class T>
BasicBivariatePoly<T> operator-(const BasicBivariatePoly<T>& p) {
  return T(-1) * p;
}

template <class T>
BasicBivariatePoly<T> operator-(const BasicBivariatePoly<T>& p, const BasicBivariatePoly<T>& q) {
  return p + T(-1) * q;
}

template <class T>
BasicBivariatePoly<T> mul(const BasicBivariatePoly<T>& p, const BasicBivariatePoly<T>& q) {
  if (p.is_zero() || q.is_zero()) return {p.basis(), {}};
  if (p.basis() != q.basis()) throw BasisMismatch();
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  Grid<T> g(a.rows() + b.rows() - 1, a.cols() + b.cols() - 1);
  const bool cheb = p.basis() == Basis::ChebU;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == T(0)) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l) {
          if (b(k, l) == T(0)) continue;
          T v = a(i, j) * b(k, l);
          if (!cheb) {
            g(i + k, j + l) += v;
            continue;
          }
          for (int c = std::abs(i - k); c <= i + k; c += 2)
            for (int d = std::abs(j - l); d <= j + l; d += 2) g(c, d) += v;
        }
    }
  return {p.basis(), std::move(g)};
}

// p(x) as a bivariate polynomial constant in y (or the y-analog).
template <class T>
BasicBivariatePoly<T> lift_x(const BasicUnivariatePoly<T>& p) {
  Grid<T> g(p.degree() + 1 > 0 ? p.degree() + 1 : 0, p.is_zero() ? 0 : 1);
  for (int i = 0; i <= p.degree(); ++i) g(i, 0) = p.coeff(i);
  return {p.basis(), std::move(g)};
}

template <class T>
BasicBivariatePoly<T> lift_y(const BasicUnivariatePoly<T>& p) {
  Grid<T> g(p.is_zero() ? 0 : 1, p.degree() + 1 > 0 ? p.degree() + 1 : 0);
  for (int j = 0; j <= p.degree(); ++j) g(0, j) = p.coeff(j);
  return {p.basis(), std::move(g)};
}

template <class T>
BasicBivariatePoly<T> swap_xy(const BasicBivariatePoly<T>& p) {
  const auto& a = p.coeffs();
  Grid<T> g(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) g(j, i) = a(i, j);
  return {p.basis(), std::move(g)};
}

// Multiplication by x (resp. y).
template <class T>
BasicBivariatePoly<T> mul_x(const BasicBivariatePoly<T>& p) {
  if (p.is_zero()) return p;
  const auto& a = p.coeffs();
  Grid<T> g(a.rows() + 1, a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == T(0)) continue;
      if (p.basis() == Basis::Monomial) {
        g(i + 1, j) += a(i, j);
      } else {
        T half = a(i, j) / T(2);
        g(i + 1, j) += half;
        if (i >= 1) g(i - 1, j) += half;
      }
    }
  return {p.basis(), std::move(g)};
}

template <class T>
BasicBivariatePoly<T> mul_y(const BasicBivariatePoly<T>& p) {
  return swap_xy(mul_x(swap_xy(p)));
}

// Multiplication by U_k(x) / U_k(y); k may be negative.
template <class T>
BasicBivariatePoly<T> times_u_x(const BasicBivariatePoly<T>& p, int k) {
  if (p.basis() != Basis::ChebU) throw BasisMismatch();
  return mul(p, lift_x(u_index<T>(k)));
}

template <class T>
BasicBivariatePoly<T> times_u_y(const BasicBivariatePoly<T>& p, int k) {
  if (p.basis() != Basis::ChebU) throw BasisMismatch();
  return mul(p, lift_y(u_index<T>(k)));
}

template <class T>
BasicBivariatePoly<T> to_monomial(const BasicBivariatePoly<T>& p) {
  if (p.basis() == Basis::Monomial || p.is_zero()) return {Basis::Monomial, p.coeffs()};
  const auto& a = p.coeffs();
  auto ux = detail::cheb_u_to_monomial_table<T>(a.rows() - 1);
  auto uy = detail::cheb_u_to_monomial_table<T>(a.cols() - 1);
  Grid<T> tmp(a.rows(), a.cols());
  for (int n = 0; n < a.rows(); ++n)
    for (int k = 0; k <= n; ++k) {
      if (ux[n][k] == T(0)) continue;
      for (int j = 0; j < a.cols(); ++j) tmp(k, j) += ux[n][k] * a(n, j);
    }
  Grid<T> g(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int n = 0; n < a.cols(); ++n)
      for (int k = 0; k <= n; ++k)
        if (uy[n][k] != T(0)) g(i, k) += uy[n][k] * tmp(i, n);
  return {Basis::Monomial, std::move(g)};
}

template <class T>
BasicBivariatePoly<T> to_cheb_u(const BasicBivariatePoly<T>& p) {
  if (p.basis() == Basis::ChebU || p.is_zero()) return {Basis::ChebU, p.coeffs()};
  const auto& a = p.coeffs();
  auto ex = detail::monomial_to_cheb_u_table<T>(a.rows() - 1);
  auto ey = detail::monomial_to_cheb_u_table<T>(a.cols() - 1);
  Grid<T> tmp(a.rows(), a.cols());
  for (int k = 0; k < a.rows(); ++k)
    for (int n = 0; n <= k; ++n) {
      if (ex[k][n] == T(0)) continue;
      for (int j = 0; j < a.cols(); ++j) tmp(n, j) += ex[k][n] * a(k, j);
    }
  Grid<T> g(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k)
      for (int n = 0; n <= k; ++n)
        if (ey[k][n] != T(0)) g(i, n) += ey[k][n] * tmp(i, k);
  return {Basis::ChebU, std::move(g)};
}

template <class T>
BasicBivariatePoly<T> in_basis(const BasicBivariatePoly<T>& p, Basis b) {
  return b == Basis::ChebU ? to_cheb_u(p) : to_monomial(p);
}

template <class T>
T evaluate(const BasicBivariatePoly<T>& p, const T& x, const T& y) {
  const auto& a = p.coeffs();
  std::vector<T> bx(a.rows()), by(a.cols());
  const bool cheb = p.basis() == Basis::ChebU;
  auto fill = [&](std::vector<T>& v, const T& t) {
    for (std::size_t n = 0; n < v.size(); ++n) {
      if (n == 0) v[n] = T(1);
      else if (n == 1) v[n] = cheb ? T(2) * t : t;
      else v[n] = cheb ? T(2) * t * v[n - 1] - v[n - 2] : t * v[n - 1];
    }
  };
  fill(bx, x);
  fill(by, y);
  T acc(0);
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) acc += a(i, j) * bx[i] * by[j];
  return acc;
}

// Largest coefficient magnitude difference between two polynomials in the
// same basis (double only).
double max_abs_diff(const BasicBivariatePoly<double>& p, const BasicBivariatePoly<double>& q);
double max_abs_coeff(const BasicBivariatePoly<double>& p);

using UnivariatePoly = BasicUnivariatePoly<double>;
using BivariatePoly = BasicBivariatePoly<double>;

}  // namespace bsz2d
