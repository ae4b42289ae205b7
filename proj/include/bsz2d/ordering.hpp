#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace bsz2d {

enum class Ordering { TotalDegree, Lex, RevLex };

// Index of a tensor basis element: i is the x-degree, j the y-degree.
struct Slot {
  int i = 0;
  int j = 0;
  friend bool operator==(const Slot&, const Slot&) = default;
};

// Strict "a comes before b" in the given monomial ordering.
inline bool precedes(Ordering ord, Slot a, Slot b) {
  switch (ord) {
    case Ordering::TotalDegree:
      if (a.i + a.j != b.i + b.j) return a.i + a.j < b.i + b.j;
      return a.i < b.i;
    case Ordering::Lex:
      if (a.i != b.i) return a.i < b.i;
      return a.j < b.j;
    case Ordering::RevLex:
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
  }
  return false;
}

// Slots of total degree <= n in td order: 1, y, x, y^2, xy, x^2, ...
std::vector<Slot> total_degree_slots(int n);
// Slots of the window [0,n]x[0,m] in lex order (x-degree major).
std::vector<Slot> lex_slots(int n, int m);
// Slots of the window [0,n]x[0,m] in reverse lex order (y-degree major).
std::vector<Slot> revlex_slots(int n, int m);

std::string_view to_string(Ordering ord);
Ordering ordering_from_string(std::string_view s);

// ceil(a / 2) for any sign of a.
constexpr int ceil_half(int a) { return a >= 0 ? (a + 1) / 2 : -((-a) / 2); }

}  // namespace bsz2d
