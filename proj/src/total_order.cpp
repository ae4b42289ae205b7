#include "bsz2d/total_order.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bsz2d/parallel.hpp"
#include "bsz2d/szego.hpp"

namespace bsz2d {

OrthoEntry normalize_entry(const MomentOracle& oracle, BivariatePoly p, Ordering ordering, Slot lead,
                           std::string source) {
  p = to_cheb_u(p);
  const Slot got = p.leading_slot(ordering);
  if (!(got == lead)) {
    std::ostringstream os;
    os << source << " polynomial has leading slot (" << got.i << "," << got.j << "), expected ("
       << lead.i << "," << lead.j << ")";
    throw ConstructionInconsistency(os.str());
  }
  const double nn = oracle.inner(p, p);
  if (!(nn > 0.0)) throw ConstructionInconsistency(source + " polynomial has non-positive norm");
  const double norm = std::sqrt(nn);
  double scale = 1.0 / norm;
  if (p.coeff(lead.i, lead.j) < 0.0) scale = -scale;
  return {lead, scale * p, norm, std::move(source)};
}

int total_closed_threshold(const WeightSpec& spec) {
  return std::max(0, ceil_half(spec.n_h() - 2));
}

OrthoEntry build_total_component(const MomentOracle& oracle, int n, int k) {
  const int thr = total_closed_threshold(oracle.spec());
  if (k < thr || k > n) {
    std::ostringstream os;
    os << "closed total-degree component needs " << thr << " <= k <= n, got k = " << k;
    throw BelowThreshold(os.str());
  }
  auto p = times_u_y(build_qk(oracle.spec(), k), n - k);
  return normalize_entry(oracle, std::move(p), Ordering::TotalDegree, {k, n - k}, "closed");
}

OrthoEntry build_total_low(const MomentOracle& oracle, int n, int k) {
  if (k < 0 || k > n) throw InvalidArgument("total-degree slot needs 0 <= k <= n");
  std::vector<Slot> slots;
  for (const auto& s : total_degree_slots(n)) {
    slots.push_back(s);
    if (s == Slot{k, n - k}) break;
  }
  return gram_schmidt_slots(oracle, slots).back();
}

std::vector<OrthoEntry> build_total_vector(const MomentOracle& oracle, int n) {
  if (n < 0) throw InvalidArgument("total degree must be >= 0");
  const int thr = total_closed_threshold(oracle.spec());
  std::vector<OrthoEntry> out(n + 1);
  // Warm the moment table once so workers only read it.
  oracle.table(2 * n + 2);
  parallel_for(n + 1, oracle.options().threads, [&](int k) {
    out[k] = k < thr ? build_total_low(oracle, n, k) : build_total_component(oracle, n, k);
  });
  return out;
}

OrthoSystem build_total_system(const MomentOracle& oracle, int n) {
  OrthoSystem sys;
  sys.ordering = Ordering::TotalDegree;
  sys.n = sys.m = n;
  for (int d = 0; d <= n; ++d)
    for (auto& e : build_total_vector(oracle, d)) sys.entries.push_back(std::move(e));
  return sys;
}

std::vector<const OrthoEntry*> total_level(const OrthoSystem& sys, int n) {
  std::vector<const OrthoEntry*> out;
  for (const auto& e : sys.entries)
    if (e.index.i + e.index.j == n) out.push_back(&e);
  std::sort(out.begin(), out.end(),
            [](const OrthoEntry* a, const OrthoEntry* b) { return a->index.i < b->index.i; });
  return out;
}

}  // namespace bsz2d
