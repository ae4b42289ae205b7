#include "bsz2d/moment_oracle.hpp"

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "bsz2d/parallel.hpp"

namespace bsz2d {

namespace {

constexpr double kPi = std::numbers::pi;

int bucket_for(int degree) { return std::max(8, (degree + 7) / 8 * 8); }

Eigen::MatrixXd parity_prefix(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd p = m;
  for (int c = 0; c < m.rows(); ++c)
    for (int d = 0; d < m.cols(); ++d) {
      if (c >= 2) p(c, d) += p(c - 2, d);
      if (d >= 2) p(c, d) += p(c, d - 2);
      if (c >= 2 && d >= 2) p(c, d) -= p(c - 2, d - 2);
    }
  return p;
}

// Raw (unnormalized) modified moments at R points per axis.
Eigen::MatrixXd raw_modified(const WeightSpec& spec, int degree, int r, int threads) {
  const int n = spec.n_h();
  std::vector<double> theta(r), sin_t(r);
  std::vector<std::complex<double>> z(r);
  for (int k = 0; k < r; ++k) {
    theta[k] = 2.0 * kPi * k / r;
    sin_t[k] = std::sin(theta[k]);
    z[k] = std::polar(1.0, theta[k]);
  }
  // s(c, k) = sin((c+1) theta_k) sin theta_k = U_c(cos theta_k) sin^2 theta_k.
  Eigen::MatrixXd s(degree + 1, r);
  for (int c = 0; c <= degree; ++c)
    for (int k = 0; k < r; ++k) s(c, k) = std::sin((c + 1) * theta[k]) * sin_t[k];
  // Parameter-variable values h_i(cos phi_l).
  Eigen::MatrixXd hv(n + 1, r);
  for (int i = 0; i <= n; ++i)
    for (int l = 0; l < r; ++l) hv(i, l) = spec.h()[i](std::cos(theta[l]));

  // g(k, d) = sum_l s(d, l) / |h(z_k, y_l)|^2 ; rows are independent.
  Eigen::MatrixXd g(r, degree + 1);
  parallel_for(r, threads, [&](int k) {
    Eigen::VectorXd f(r);
    for (int l = 0; l < r; ++l) {
      std::complex<double> acc = 0.0;
      for (int i = n; i >= 0; --i) acc = acc * z[k] + hv(i, l);
      f(l) = 1.0 / std::norm(acc);
    }
    g.row(k) = (s * f).transpose();
  });
  const double w = 2.0 * kPi / r;
  // (4/pi^2) * (1/2 * 2pi/R)^2 per node, from x = cos theta on the full circle.
  return (4.0 / (kPi * kPi)) * 0.25 * w * w * (s * g);
}

std::string cache_file_name(const std::string& fp, double tol, int bucket) {
  std::ostringstream os;
  os << "bsz2d_" << fp << "_" << std::hexfloat << tol << "_" << bucket;
  std::string name = os.str();
  for (auto& ch : name)
    if (ch == '+' || ch == '-' || ch == '.') ch = '_';
  return name + ".json";
}

std::shared_ptr<const MomentTable> load_spill(const std::filesystem::path& file, int degree) {
  std::ifstream in(file);
  if (!in) return nullptr;
  try {
    auto j = nlohmann::json::parse(in);
    auto t = std::make_shared<MomentTable>();
    t->degree = j.at("degree").get<int>();
    if (t->degree < degree) return nullptr;
    t->resolution = j.at("resolution").get<int>();
    t->error_estimate = j.at("error_estimate").get<double>();
    t->raw_mass = j.at("raw_mass").get<double>();
    const auto& rows = j.at("modified");
    t->modified.resize(t->degree + 1, t->degree + 1);
    for (int c = 0; c <= t->degree; ++c)
      for (int d = 0; d <= t->degree; ++d) t->modified(c, d) = rows.at(c).at(d).get<double>();
    t->parity_prefix = parity_prefix(t->modified);
    return t;
  } catch (const nlohmann::json::exception&) {
    return nullptr;
  }
}

void write_spill(const std::filesystem::path& file, const MomentTable& t) {
  nlohmann::json j;
  j["degree"] = t.degree;
  j["resolution"] = t.resolution;
  j["error_estimate"] = t.error_estimate;
  j["raw_mass"] = t.raw_mass;
  auto rows = nlohmann::json::array();
  for (int c = 0; c <= t.degree; ++c) {
    auto row = nlohmann::json::array();
    for (int d = 0; d <= t.degree; ++d) row.push_back(t.modified(c, d));
    rows.push_back(std::move(row));
  }
  j["modified"] = std::move(rows);
  std::error_code ec;
  std::filesystem::create_directories(file.parent_path(), ec);
  auto tmp = file;
  tmp += ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&t));
  {
    std::ofstream out(tmp);
    if (!out) return;
    out << j.dump();
  }
  // Keep an existing file: the first writer wins on disk as well.
  if (std::filesystem::exists(file, ec)) {
    std::filesystem::remove(tmp, ec);
    return;
  }
  std::filesystem::rename(tmp, file, ec);
}

}  // namespace

MomentCache& MomentCache::global() {
  static MomentCache cache;
  return cache;
}

std::shared_ptr<const MomentTable> MomentCache::find(const std::string& fingerprint, double tol,
                                                     int degree) const {
  std::shared_lock lock(mu_);
  for (auto it = tables_.lower_bound(Key{fingerprint, tol, degree});
       it != tables_.end() && it->first.fingerprint == fingerprint && it->first.tol == tol; ++it)
    if (it->second->degree >= degree) return it->second;
  return nullptr;
}

std::shared_ptr<const MomentTable> MomentCache::insert(const std::string& fingerprint, double tol,
                                                       std::shared_ptr<const MomentTable> table) {
  std::unique_lock lock(mu_);
  auto [it, inserted] = tables_.try_emplace(Key{fingerprint, tol, table->degree}, table);
  return it->second;
}

void MomentCache::clear() {
  std::unique_lock lock(mu_);
  tables_.clear();
}

MomentTable compute_moment_table(const WeightSpec& spec, int degree, const QuadratureOptions& opt) {
  if (degree < 0) throw InvalidArgument("moment table degree must be >= 0");
  int r = 32;
  while (r < 2 * (degree + 2)) r *= 2;
  Eigen::MatrixXd prev = raw_modified(spec, degree, r, opt.threads);
  double last_change = 0.0;
  while (true) {
    if (2 * r > opt.max_resolution) {
      std::ostringstream os;
      os << "moment quadrature did not converge: resolution " << r << " per axis, last change "
         << last_change << " (tol " << opt.tol << ")";
      throw AccuracyFailure(os.str());
    }
    r *= 2;
    Eigen::MatrixXd cur = raw_modified(spec, degree, r, opt.threads);
    const Eigen::MatrixXd pn = prev / prev(0, 0);
    const Eigen::MatrixXd cn = cur / cur(0, 0);
    bool ok = std::abs(cur(0, 0) - prev(0, 0)) <= opt.tol * std::abs(cur(0, 0));
    double change = 0.0;
    for (int c = 0; c <= degree; ++c)
      for (int d = 0; d <= degree; ++d) {
        const double diff = std::abs(cn(c, d) - pn(c, d));
        change = std::max(change, diff);
        if (diff > opt.tol * (1.0 + std::abs(cn(c, d)))) ok = false;
      }
    last_change = change;
    if (ok) {
      MomentTable t;
      t.degree = degree;
      t.modified = cn;
      t.parity_prefix = parity_prefix(cn);
      t.resolution = r;
      t.error_estimate = change;
      t.raw_mass = cur(0, 0);
      return t;
    }
    prev = std::move(cur);
  }
}

MomentOracle::MomentOracle(WeightSpec spec, QuadratureOptions opt)
    : spec_(std::move(spec)), opt_(opt) {}

std::shared_ptr<const MomentTable> MomentOracle::table(int degree) const {
  {
    std::shared_lock lock(mu_);
    if (table_ && table_->degree >= degree) return table_;
  }
  std::unique_lock lock(mu_);
  if (table_ && table_->degree >= degree) return table_;
  const std::string fp = spec_.fingerprint();
  auto& cache = MomentCache::global();
  auto t = cache.find(fp, opt_.tol, degree);
  if (!t) {
    const int bucket = bucket_for(degree);
    std::filesystem::path spill;
    if (const char* dir = std::getenv("BSZ2D_CACHE_DIR"); dir && *dir)
      spill = std::filesystem::path(dir) / cache_file_name(fp, opt_.tol, bucket);
    if (!spill.empty()) t = load_spill(spill, bucket);
    if (!t) {
      t = std::make_shared<MomentTable>(compute_moment_table(spec_, bucket, opt_));
      if (!spill.empty()) write_spill(spill, *t);
    }
    t = cache.insert(fp, opt_.tol, t);
  }
  table_ = t;
  return t;
}

double MomentOracle::modified_moment(int c, int d) const {
  if (c < 0 || d < 0) throw InvalidArgument("moment indices must be >= 0");
  return table(std::max(c, d))->modified(c, d);
}

double MomentOracle::moment(int i, int j) const {
  if (i < 0 || j < 0) throw InvalidArgument("moment indices must be >= 0");
  auto t = table(std::max(i, j));
  const int d = std::max(i, j);
  auto e = detail::monomial_to_cheb_u_table<double>(d);
  double acc = 0.0;
  for (int c = 0; c <= i; ++c) {
    if (e[i][c] == 0.0) continue;
    for (int k = 0; k <= j; ++k)
      if (e[j][k] != 0.0) acc += e[i][c] * e[j][k] * t->modified(c, k);
  }
  return acc;
}

double MomentOracle::moment_error(int i, int j) const {
  auto t = table(std::max(i, j));
  // |x^i| <= 1 expands with nonnegative U coefficients summing to at most 1
  // in each variable, so the table error bounds the monomial error.
  return t->error_estimate;
}

double MomentOracle::basis_inner(Slot s, Slot u) const {
  const int hi_c = s.i + u.i, hi_d = s.j + u.j;
  auto t = table(std::max(hi_c, hi_d));
  const int lo_c = std::abs(s.i - u.i), lo_d = std::abs(s.j - u.j);
  const auto& p = t->parity_prefix;
  auto at = [&](int c, int d) { return (c < 0 || d < 0) ? 0.0 : p(c, d); };
  return at(hi_c, hi_d) - at(lo_c - 2, hi_d) - at(hi_c, lo_d - 2) + at(lo_c - 2, lo_d - 2);
}

double MomentOracle::integrate(const BivariatePoly& p) const {
  if (p.is_zero()) return 0.0;
  const auto q = to_cheb_u(p);
  const auto& g = q.coeffs();
  auto t = table(std::max(g.rows(), g.cols()) - 1);
  double acc = 0.0;
  for (int c = 0; c < g.rows(); ++c)
    for (int d = 0; d < g.cols(); ++d) acc += g(c, d) * t->modified(c, d);
  return acc;
}

double MomentOracle::inner(const BivariatePoly& p, const BivariatePoly& q) const {
  if (p.is_zero() || q.is_zero()) return 0.0;
  const auto pu = to_cheb_u(p), qu = to_cheb_u(q);
  const auto& a = pu.coeffs();
  const auto& b = qu.coeffs();
  table(std::max(a.rows() + b.rows(), a.cols() + b.cols()) - 2);
  double acc = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0.0) continue;
      double row = 0.0;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          if (b(k, l) != 0.0) row += b(k, l) * basis_inner({i, j}, {k, l});
      acc += a(i, j) * row;
    }
  return acc;
}

double univariate_integral(const WeightSpec& spec, const std::function<double(double)>& f,
                           double y, double tol, int max_resolution) {
  if (std::abs(y) > 1.0) throw InvalidArgument("univariate integral needs |y| <= 1");
  auto eval = [&](int r) {
    double acc = 0.0;
    for (int k = 0; k < r; ++k) {
      const double th = 2.0 * kPi * k / r;
      const double s = std::sin(th);
      acc += f(std::cos(th)) * s * s / spec.abs_h_sq(th, y);
    }
    return 0.5 * (2.0 * kPi / r) * acc;
  };
  int r = 64;
  double prev = eval(r);
  while (true) {
    if (2 * r > max_resolution) {
      std::ostringstream os;
      os << "univariate quadrature did not converge at resolution " << r;
      throw AccuracyFailure(os.str());
    }
    r *= 2;
    const double cur = eval(r);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
}

double univariate_moment(const WeightSpec& spec, int i, double y, double tol) {
  if (i < 0) throw InvalidArgument("moment index must be >= 0");
  return univariate_integral(spec, [i](double x) { return std::pow(x, i); }, y, tol);
}

namespace {

// Modified Gram-Schmidt (two passes) in coordinates w.r.t. the Gram matrix g.
// Column k of the result combines inputs 0..k. Throws on pivot loss.
Eigen::MatrixXd mgs_coordinates(const Eigen::MatrixXd& g, Eigen::VectorXd& norms) {
  const Eigen::Index n = g.rows();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  norms.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, k);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index j = 0; j < k; ++j) v -= (q.col(j).dot(g * v)) * q.col(j);
    const double nn = v.dot(g * v);
    if (!(nn > 1e-10 * g(k, k))) {
      std::ostringstream os;
      os << "Gram-Schmidt pivot loss at position " << k << " (residual norm^2 " << nn << ")";
      throw UnreliableOracle(os.str());
    }
    norms(k) = std::sqrt(nn);
    q.col(k) = v / norms(k);
  }
  return q;
}

void check_condition(const Eigen::MatrixXd& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > 1e12) {
    std::ostringstream os;
    os << "moment matrix condition number " << (lo > 0.0 ? hi / lo : INFINITY) << " exceeds 1e12";
    throw UnreliableOracle(os.str());
  }
}

}  // namespace

std::vector<OrthoEntry> gram_schmidt_slots(const MomentOracle& oracle, const std::vector<Slot>& slots) {
  const int k = static_cast<int>(slots.size());
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) g(a, b) = g(b, a) = oracle.basis_inner(slots[a], slots[b]);
  check_condition(g);
  Eigen::VectorXd norms;
  const Eigen::MatrixXd q = mgs_coordinates(g, norms);

  int rows = 0, cols = 0;
  for (const auto& s : slots) {
    rows = std::max(rows, s.i + 1);
    cols = std::max(cols, s.j + 1);
  }
  std::vector<OrthoEntry> out;
  for (int c = 0; c < k; ++c) {
    Grid<double> grid(rows, cols);
    for (int a = 0; a <= c; ++a) grid(slots[a].i, slots[a].j) = q(a, c);
    out.push_back({slots[c], BivariatePoly(Basis::ChebU, std::move(grid)), norms(c), "oracle"});
  }
  return out;
}

OrthoSystem gram_schmidt(const MomentOracle& oracle, Ordering ordering, int n, int m) {
  if (n < 0 || m < 0) throw InvalidArgument("window sizes must be >= 0");
  OrthoSystem sys;
  sys.ordering = ordering;
  sys.n = n;
  sys.m = ordering == Ordering::TotalDegree ? n : m;
  switch (ordering) {
    case Ordering::TotalDegree:
      sys.entries = gram_schmidt_slots(oracle, total_degree_slots(n));
      break;
    case Ordering::Lex:
      sys.entries = gram_schmidt_slots(oracle, lex_slots(n, m));
      break;
    case Ordering::RevLex:
      sys.entries = gram_schmidt_slots(oracle, revlex_slots(n, m));
      break;
  }
  return sys;
}

std::vector<BivariatePoly> orthonormalize(const MomentOracle& oracle,
                                          const std::vector<BivariatePoly>& polys,
                                          Ordering ordering) {
  const int k = static_cast<int>(polys.size());
  Eigen::MatrixXd g(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) g(a, b) = g(b, a) = oracle.inner(polys[a], polys[b]);
  Eigen::VectorXd norms;
  const Eigen::MatrixXd q = mgs_coordinates(g, norms);
  std::vector<BivariatePoly> out;
  for (int c = 0; c < k; ++c) {
    BivariatePoly p(Basis::ChebU, {});
    for (int a = 0; a <= c; ++a) p = p + q(a, c) * to_cheb_u(polys[a]);
    const Slot lead = to_cheb_u(polys[c]).leading_slot(ordering);
    if (p.coeff(lead.i, lead.j) < 0.0) p = -p;
    out.push_back(std::move(p));
  }
  return out;
}

Eigen::MatrixXd monomial_moment_matrix(const MomentOracle& oracle, const std::vector<Slot>& slots) {
  const int k = static_cast<int>(slots.size());
  Eigen::MatrixXd h(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      h(a, b) = oracle.moment(slots[a].i + slots[b].i, slots[a].j + slots[b].j);
  return h;
}

double doubly_hankel_defect(const Eigen::MatrixXd& h, const std::vector<Slot>& slots) {
  std::map<std::pair<int, int>, double> first;
  double defect = 0.0;
  for (int a = 0; a < static_cast<int>(slots.size()); ++a)
    for (int b = 0; b < static_cast<int>(slots.size()); ++b) {
      const std::pair<int, int> key{slots[a].i + slots[b].i, slots[a].j + slots[b].j};
      auto [it, fresh] = first.try_emplace(key, h(a, b));
      if (!fresh) defect = std::max(defect, std::abs(h(a, b) - it->second));
    }
  return defect;
}

}  // namespace bsz2d
