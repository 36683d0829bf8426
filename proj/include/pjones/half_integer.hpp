#pragma once

#include <compare>
#include <ostream>
#include <string>

namespace pjones {

// A value in (1/2)Z, stored as twice the value.
struct HalfInteger {
  int twice = 0;

  static constexpr HalfInteger from_twice(int t) { return HalfInteger{t}; }
  static constexpr HalfInteger from_int(int v) { return HalfInteger{2 * v}; }

  constexpr bool is_integer() const { return twice % 2 == 0; }
  // Requires is_integer().
  constexpr int as_int() const { return twice / 2; }
  constexpr double as_double() const { return twice / 2.0; }

  constexpr HalfInteger operator+(HalfInteger o) const { return {twice + o.twice}; }
  constexpr HalfInteger operator-(HalfInteger o) const { return {twice - o.twice}; }
  constexpr HalfInteger operator-() const { return {-twice}; }
  constexpr HalfInteger& operator+=(HalfInteger o) {
    twice += o.twice;
    return *this;
  }
  constexpr auto operator<=>(const HalfInteger&) const = default;

  std::string to_string() const {
    if (is_integer()) return std::to_string(twice / 2);
    return std::to_string(twice) + "/2";
  }
};

inline std::ostream& operator<<(std::ostream& os, HalfInteger h) {
  return os << h.to_string();
}

}  // namespace pjones
