#include "bsz2d/ortho_system.hpp"

#include <sstream>

namespace bsz2d {

bool OrthoSystem::contains(Slot s) const {
  for (const auto& e : entries)
    if (e.index == s) return true;
  return false;
}

const OrthoEntry& OrthoSystem::at(Slot s) const {
  for (const auto& e : entries)
    if (e.index == s) return e;
  std::ostringstream os;
  os << "slot (" << s.i << "," << s.j << ") not in " << to_string(ordering) << " system";
  throw InvalidArgument(os.str());
}

}  // namespace bsz2d
