#pragma once

#include <string>
#include <vector>

#include "bsz2d/ordering.hpp"
#include "bsz2d/poly.hpp"

namespace bsz2d {

struct OrthoEntry {
  Slot index;          // leading slot in the system's ordering
  BivariatePoly poly;  // unit norm, ChebU basis
  double norm = 1.0;   // norm of the polynomial before normalization
  std::string source;  // "closed", "oracle", ...
};

struct OrthoSystem {
  Ordering ordering = Ordering::TotalDegree;
  int n = 0;  // total degree, or x-range of the window
  int m = 0;  // y-range of the window (lex/revlex)
  std::vector<OrthoEntry> entries;

  // Throws InvalidArgument when the slot is absent.
  const OrthoEntry& at(Slot s) const;
  bool contains(Slot s) const;
};

}  // namespace bsz2d
