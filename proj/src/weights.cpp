#include "bsz2d/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <numbers>
#include <sstream>

#include "bsz2d/parallel.hpp"
#include "bsz2d/roots.hpp"

namespace bsz2d {

namespace {

void check_factors(const std::vector<double>& a) {
  for (double ai : a)
    if (!(std::abs(ai) < 1.0) || ai == 0.0) {
      std::ostringstream os;
      os << "product factor a = " << ai << " must satisfy 0 < |a| < 1";
      throw InvalidWeight(os.str());
    }
}

struct Fnv1a {
  std::uint64_t state = 0xcbf29ce484222325ull;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      state ^= c[i];
      state *= 0x100000001b3ull;
    }
  }
  void value(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    bytes(&v, sizeof v);
  }
  void value(std::int64_t v) { bytes(&v, sizeof v); }
};

}  // namespace

WeightSpec WeightSpec::generic(std::vector<UnivariatePoly> h) {
  WeightSpec s;
  for (auto& p : h) p = to_monomial(p);
  s.h_ = std::move(h);
  s.validate_generic();
  return s;
}

WeightSpec WeightSpec::generic(const std::vector<std::vector<double>>& h) {
  std::vector<UnivariatePoly> polys;
  polys.reserve(h.size());
  for (const auto& c : h) polys.push_back(UnivariatePoly::monomial(c));
  return generic(std::move(polys));
}

WeightSpec WeightSpec::product(std::vector<double> a, bool reflected) {
  check_factors(a);
  WeightSpec s;
  s.product_ = true;
  s.reflected_ = reflected;
  s.a_ = std::move(a);
  s.h_ = product_h(s.a_);
  return s;
}

void WeightSpec::validate_generic() {
  while (!h_.empty() && h_.back().is_zero()) h_.pop_back();
  if (h_.empty()) throw InvalidWeight("h must have at least the constant term h_0 = 1");
  const auto& h0 = h_.front();
  if (h0.degree() != 0 || std::abs(h0.coeff(0) - 1.0) > 1e-12)
    throw InvalidWeight("h_0 must be the constant polynomial 1");
  const int n = n_h();
  for (int i = 0; i <= n; ++i) {
    const int d = h_[i].degree();
    if (d == kZeroDegree) continue;
    // deg h_i <= N/2 - |N/2 - i|, kept in integers.
    if (2 * d > n - std::abs(n - 2 * i)) {
      std::ostringstream os;
      os << "deg h_" << i << " = " << d << " exceeds the bound N/2 - |N/2 - i| for N = " << n;
      throw InvalidWeight(os.str());
    }
  }
}

const std::vector<double>& WeightSpec::factors() const {
  if (!product_) throw Unsupported("weight has no product factorization");
  return a_;
}

std::optional<std::vector<double>> WeightSpec::factorization() const {
  if (product_ || has_factors_) return a_;
  return std::nullopt;
}

int WeightSpec::n_f() const { return static_cast<int>(factors().size()); }

int WeightSpec::kappa() const {
  int k = 0;
  for (const auto& p : h_) k = std::max(k, p.degree());
  return k;
}

double WeightSpec::h_at(int i, double t) const {
  if (i < 0 || i > n_h()) return 0.0;
  return h_[i](t);
}

std::complex<double> WeightSpec::eval(std::complex<double> z, double t) const {
  std::complex<double> acc = 0.0;
  for (int i = n_h(); i >= 0; --i) acc = acc * z + h_[i](t);
  return acc;
}

double WeightSpec::abs_h_sq(double theta, double t) const {
  const std::complex<double> z = std::polar(1.0, theta);
  if (!product_) return std::norm(eval(z, t));
  double v = 1.0;
  for (double ai : a_) v *= std::norm(1.0 + 2.0 * ai * t * z + ai * ai * z * z);
  return v;
}

std::string WeightSpec::fingerprint() const {
  Fnv1a f;
  if (product_) {
    std::vector<double> a = a_;
    std::sort(a.begin(), a.end());
    f.bytes("P", 1);
    f.value(static_cast<std::int64_t>(a.size()));
    for (double v : a) f.value(v);
  } else {
    f.bytes("H", 1);
    f.value(static_cast<std::int64_t>(h_.size()));
    for (const auto& p : h_) {
      f.value(static_cast<std::int64_t>(p.coeffs().size()));
      for (double v : p.coeffs()) f.value(v);
    }
  }
  std::ostringstream os;
  os << std::hex << f.state;
  return os.str();
}

LaurentPoly<double> WeightSpec::omega() const {
  auto w = LaurentPoly<double>::monomial(0, 0);
  for (double ai : factors())
    w = w * (LaurentPoly<double>::monomial(0, 0) + LaurentPoly<double>::monomial(1, 1, ai));
  return w;
}

WeightSpec expand_product(const std::vector<double>& a) {
  check_factors(a);
  WeightSpec s = WeightSpec::generic(product_h(a));
  s.has_factors_ = true;
  s.a_ = a;
  return s;
}

WeightSpec tilde_expand(const WeightSpec& spec) {
  const auto a = spec.factorization();
  if (!a) throw Unsupported("tilde weight requires a product factorization");
  return WeightSpec::product(*a, !spec.reflected());
}

StabilityReport is_stable(const WeightSpec& spec, int y_samples, double tol, int threads) {
  if (y_samples < 2) throw InvalidArgument("is_stable needs at least 2 y samples");
  StabilityReport rep;
  if (spec.is_product()) {
    rep.analytic = true;
    double amax = 0.0;
    for (double ai : spec.factors()) amax = std::max(amax, std::abs(ai));
    rep.min_modulus = amax > 0.0 ? 1.0 / amax : std::numeric_limits<double>::infinity();
    rep.stable = rep.min_modulus > 1.0 + tol;
    rep.samples = 0;
    double top = 1.0;
    for (double ai : spec.factors()) top *= ai * ai;
    rep.max_abs_top = std::abs(top);
    return rep;
  }

  // Chebyshev extreme points, plus a finer fan near both endpoints where
  // boundary double roots typically live.
  std::vector<double> ys;
  const double pi = std::numbers::pi;
  for (int k = 0; k < y_samples; ++k) ys.push_back(std::cos(pi * k / (y_samples - 1)));
  constexpr int kRefine = 8;
  for (int k = 1; k < kRefine; ++k) {
    const double y = std::cos(pi * k / (kRefine * (y_samples - 1.0)));
    ys.push_back(y);
    ys.push_back(-y);
  }
  rep.samples = static_cast<int>(ys.size());

  struct Sample {
    double min_mod = std::numeric_limits<double>::infinity();
    bool dropped = false;
    double top = 0.0;
  };
  std::vector<Sample> out(ys.size());
  parallel_for(static_cast<int>(ys.size()), threads, [&](int s) {
    std::vector<double> c(spec.n_h() + 1);
    for (int i = 0; i <= spec.n_h(); ++i) c[i] = spec.h_at(i, ys[s]);
    auto r = polynomial_roots(c);
    out[s].dropped = r.effective_degree < r.nominal_degree;
    out[s].top = std::abs(c.back());
    for (const auto& z : r.roots) out[s].min_mod = std::min(out[s].min_mod, std::abs(z));
  });

  rep.min_modulus = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < ys.size(); ++s) {
    if (out[s].dropped) rep.degree_drop_at.push_back(ys[s]);
    rep.max_abs_top = std::max(rep.max_abs_top, out[s].top);
    if (out[s].min_mod < rep.min_modulus) {
      rep.min_modulus = out[s].min_mod;
      rep.witness_y = ys[s];
    }
  }
  rep.stable = rep.min_modulus > 1.0 + tol;
  return rep;
}

}  // namespace bsz2d
