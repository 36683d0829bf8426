#pragma once

// Sparse Laurent polynomials in the bracket variable A.
//
// Each instance is either exact (rational coefficients) or floating (double
// coefficients). Mixing the two in an operation promotes to floating.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace pjones {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

enum class CoeffMode { exact, floating };

inline constexpr double kFloatPruneThreshold = 1e-12;
inline constexpr double kDefaultCompareTolerance = 1e-9;

class LaurentPoly {
 public:
  // The zero polynomial in exact mode.
  LaurentPoly() = default;

  static LaurentPoly zero(CoeffMode mode);
  static LaurentPoly constant(const Rational& c);
  static LaurentPoly monomial(int exponent, const Rational& c = 1);
  static LaurentPoly monomial_float(int exponent, double c);
  static LaurentPoly from_exact(const std::map<int, Rational>& terms);
  static LaurentPoly from_float(const std::map<int, double>& terms,
                                double prune = kFloatPruneThreshold);

  CoeffMode mode() const noexcept { return mode_; }
  bool is_exact() const noexcept { return mode_ == CoeffMode::exact; }
  bool is_zero() const noexcept {
    return is_exact() ? exact_.empty() : approx_.empty();
  }
  std::size_t term_count() const noexcept {
    return is_exact() ? exact_.size() : approx_.size();
  }

  // Throw on the zero polynomial.
  int min_exponent() const;
  int max_exponent() const;
  std::vector<int> exponents() const;

  Rational exact_coeff(int exponent) const;  // throws in float mode
  double coeff(int exponent) const;

  const std::map<int, Rational>& exact_terms() const;  // throws in float mode
  std::map<int, double> float_terms() const;

  LaurentPoly to_float() const;
  // Drops float coefficients with |c| < threshold. Exact polys are unchanged.
  LaurentPoly pruned(double threshold) const;

  LaurentPoly operator-() const;
  LaurentPoly& operator+=(const LaurentPoly& rhs);
  LaurentPoly& operator-=(const LaurentPoly& rhs);
  LaurentPoly& operator*=(const LaurentPoly& rhs);
  friend LaurentPoly operator+(LaurentPoly lhs, const LaurentPoly& rhs) {
    return lhs += rhs;
  }
  friend LaurentPoly operator-(LaurentPoly lhs, const LaurentPoly& rhs) {
    return lhs -= rhs;
  }
  friend LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs);

  LaurentPoly scaled(const Rational& c) const;
  LaurentPoly scaled(double c) const;
  // Multiplies by A^k.
  LaurentPoly shifted(int k) const;
  // Substitutes A -> A^-1.
  LaurentPoly mirrored() const;
  LaurentPoly pow(unsigned k) const;

  bool all_exponents_even() const;

  // Exact structural equality (mode and coefficients).
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) {
    return !(a == b);
  }
  // Coefficientwise comparison across modes.
  bool approx_equal(const LaurentPoly& other,
                    double tol = kDefaultCompareTolerance) const;
  double linf_distance(const LaurentPoly& other) const;

  // "c*A^k + c*A^k - ...", ascending exponents; "0" for zero.
  std::string to_string() const;

 private:
  void prune_float(double threshold);

  CoeffMode mode_ = CoeffMode::exact;
  std::map<int, Rational> exact_;
  std::map<int, double> approx_;
};

// The loop value d = -A^2 - A^-2 raised to k.
LaurentPoly d_power(unsigned k);

// max exponent - min exponent; throws "undefined span" on zero.
int span(const LaurentPoly& p);

struct DivisionResult {
  LaurentPoly quotient;
  LaurentPoly remainder;
  int remainder_span = 0;  // 0 for a zero remainder

  bool remainder_is_zero() const { return remainder.is_zero(); }
};

// Greedy long division by d^k in B = A^2 from the top B-degree while
// deg_B(remainder) >= k. The quotient has only nonnegative even exponents;
// the remainder may carry negative powers. k = 0 returns (p, 0).
DivisionResult divide_by_d_power(const LaurentPoly& p, unsigned k);

nlohmann::json to_json(const LaurentPoly& p);
LaurentPoly laurent_from_json(const nlohmann::json& j);

std::string to_string(const Rational& r);

}  // namespace pjones
