#pragma once

#include <cstdint>

#include "pjones/diagram.hpp"
#include "pjones/laurent.hpp"

namespace pjones {

inline constexpr int kDefaultCrossingCap = 28;

struct BracketOptions {
  int crossing_cap = kDefaultCrossingCap;
  // false: plain enumeration of all 2^k states.
  bool memoize = true;
};

struct BracketResult {
  LaurentPoly bracket;
  std::int64_t states_expanded = 0;
  std::int64_t cache_hits = 0;
};

// State sum with A- and B-smoothings; open components are closed up by
// virtual head-tail arcs when counting terminal cycles.
BracketResult bracket(const Diagram& d, const BracketOptions& opt = {});

// (-A^3)^(-writhe) * <d>
LaurentPoly jones_of_diagram(const Diagram& d, const BracketOptions& opt = {});

}  // namespace pjones
