#include "bsz2d/ordering.hpp"

#include "bsz2d/errors.hpp"

namespace bsz2d {

std::vector<Slot> total_degree_slots(int n) {
  std::vector<Slot> out;
  for (int s = 0; s <= n; ++s)
    for (int i = 0; i <= s; ++i) out.push_back({i, s - i});
  return out;
}

std::vector<Slot> lex_slots(int n, int m) {
  std::vector<Slot> out;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= m; ++j) out.push_back({i, j});
  return out;
}

std::vector<Slot> revlex_slots(int n, int m) {
  std::vector<Slot> out;
  for (int j = 0; j <= m; ++j)
    for (int i = 0; i <= n; ++i) out.push_back({i, j});
  return out;
}

std::string_view to_string(Ordering ord) {
  switch (ord) {
    case Ordering::TotalDegree:
      return "total";
    case Ordering::Lex:
      return "lex";
    case Ordering::RevLex:
      return "revlex";
  }
  return "?";
}

Ordering ordering_from_string(std::string_view s) {
  if (s == "total") return Ordering::TotalDegree;
  if (s == "lex") return Ordering::Lex;
  if (s == "revlex") return Ordering::RevLex;
  throw InvalidArgument("unknown ordering '" + std::string(s) + "'");
}

}  // namespace bsz2d
