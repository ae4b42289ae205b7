#pragma once

// Total-degree orthonormal systems: P_n = (p_n^0, ..., p_n^n), where p_n^k has
// leading slot (k, n-k). Components with k >= ceil((N_h-2)/2) are
// q_k(x,y) U_{n-k}(y); the rest come from the moment oracle.

#include "bsz2d/moment_oracle.hpp"
#include "bsz2d/ortho_system.hpp"

namespace bsz2d {

// Normalizes p under the oracle measure and fixes the sign so the coefficient
// at `lead` is positive. Throws ConstructionInconsistency if `lead` is not
// the leading slot of p in `ordering`.
OrthoEntry normalize_entry(const MomentOracle& oracle, BivariatePoly p, Ordering ordering, Slot lead,
                           std::string source);

int total_closed_threshold(const WeightSpec& spec);  // ceil((N_h-2)/2), clamped at 0

OrthoEntry build_total_component(const MomentOracle& oracle, int n, int k);
OrthoEntry build_total_low(const MomentOracle& oracle, int n, int k);
std::vector<OrthoEntry> build_total_vector(const MomentOracle& oracle, int n);
// Levels 0..n, entries in total-degree order.
OrthoSystem build_total_system(const MomentOracle& oracle, int n);

// Entries of the given total degree, ordered by x-degree.
std::vector<const OrthoEntry*> total_level(const OrthoSystem& sys, int n);

}  // namespace bsz2d
