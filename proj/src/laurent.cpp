#include "pjones/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "pjones/error.hpp"

namespace pjones {

namespace {

template <typename Map>
void add_into(Map& dst, const Map& src, int sign) {
  using V = typename Map::mapped_type;
  for (const auto& [e, c] : src) {
    auto it = dst.find(e);
    if (it == dst.end()) {
      dst.emplace(e, sign > 0 ? c : V(-c));
    } else {
      if (sign > 0)
        it->second += c;
      else
        it->second -= c;
    }
  }
}

void drop_exact_zeros(std::map<int, Rational>& m) {
  std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

BigInt json_to_bigint(const nlohmann::json& j) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_number_unsigned()) return BigInt(j.get<std::uint64_t>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw SchemaError("polynomial: integer coefficient expected, got " + j.dump());
}

nlohmann::json bigint_to_json(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return v.str();
}

}  // namespace

LaurentPoly LaurentPoly::zero(CoeffMode mode) {
  LaurentPoly p;
  p.mode_ = mode;
  return p;
}

LaurentPoly LaurentPoly::constant(const Rational& c) { return monomial(0, c); }

LaurentPoly LaurentPoly::monomial(int exponent, const Rational& c) {
  LaurentPoly p;
  if (c != 0) p.exact_.emplace(exponent, c);
  return p;
}

LaurentPoly LaurentPoly::monomial_float(int exponent, double c) {
  LaurentPoly p = zero(CoeffMode::floating);
  p.approx_.emplace(exponent, c);
  p.prune_float(kFloatPruneThreshold);
  return p;
}

LaurentPoly LaurentPoly::from_exact(const std::map<int, Rational>& terms) {
  LaurentPoly p;
  p.exact_ = terms;
  drop_exact_zeros(p.exact_);
  return p;
}

LaurentPoly LaurentPoly::from_float(const std::map<int, double>& terms,
                                    double prune) {
  LaurentPoly p = zero(CoeffMode::floating);
  p.approx_ = terms;
  p.prune_float(prune);
  return p;
}

int LaurentPoly::min_exponent() const {
  if (is_zero()) throw Error("min_exponent of the zero polynomial");
  return is_exact() ? exact_.begin()->first : approx_.begin()->first;
}

int LaurentPoly::max_exponent() const {
  if (is_zero()) throw Error("max_exponent of the zero polynomial");
  return is_exact() ? exact_.rbegin()->first : approx_.rbegin()->first;
}

std::vector<int> LaurentPoly::exponents() const {
  std::vector<int> out;
  out.reserve(term_count());
  if (is_exact()) {
    for (const auto& kv : exact_) out.push_back(kv.first);
  } else {
    for (const auto& kv : approx_) out.push_back(kv.first);
  }
  return out;
}

Rational LaurentPoly::exact_coeff(int exponent) const {
  if (!is_exact()) throw Error("exact_coeff on a floating polynomial");
  auto it = exact_.find(exponent);
  return it == exact_.end() ? Rational(0) : it->second;
}

double LaurentPoly::coeff(int exponent) const {
  if (is_exact()) {
    auto it = exact_.find(exponent);
    return it == exact_.end() ? 0.0 : it->second.convert_to<double>();
  }
  auto it = approx_.find(exponent);
  return it == approx_.end() ? 0.0 : it->second;
}

const std::map<int, Rational>& LaurentPoly::exact_terms() const {
  if (!is_exact()) throw Error("exact_terms on a floating polynomial");
  return exact_;
}

std::map<int, double> LaurentPoly::float_terms() const {
  if (!is_exact()) return approx_;
  std::map<int, double> out;
  for (const auto& [e, c] : exact_) out.emplace(e, c.convert_to<double>());
  return out;
}

LaurentPoly LaurentPoly::to_float() const {
  if (!is_exact()) return *this;
  return from_float(float_terms());
}

LaurentPoly LaurentPoly::pruned(double threshold) const {
  LaurentPoly p = *this;
  if (!p.is_exact()) p.prune_float(threshold);
  return p;
}

void LaurentPoly::prune_float(double threshold) {
  std::erase_if(approx_,
                [&](const auto& kv) { return std::abs(kv.second) < threshold; });
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly p = *this;
  for (auto& kv : p.exact_) kv.second = -kv.second;
  for (auto& kv : p.approx_) kv.second = -kv.second;
  return p;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& rhs) {
  if (is_exact() && rhs.is_exact()) {
    add_into(exact_, rhs.exact_, +1);
    drop_exact_zeros(exact_);
    return *this;
  }
  *this = to_float();
  add_into(approx_, rhs.to_float().approx_, +1);
  prune_float(kFloatPruneThreshold);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& rhs) {
  if (is_exact() && rhs.is_exact()) {
    add_into(exact_, rhs.exact_, -1);
    drop_exact_zeros(exact_);
    return *this;
  }
  *this = to_float();
  add_into(approx_, rhs.to_float().approx_, -1);
  prune_float(kFloatPruneThreshold);
  return *this;
}

LaurentPoly operator*(const LaurentPoly& lhs, const LaurentPoly& rhs) {
  if (lhs.is_exact() && rhs.is_exact()) {
    LaurentPoly out;
    for (const auto& [ea, ca] : lhs.exact_) {
      for (const auto& [eb, cb] : rhs.exact_) out.exact_[ea + eb] += ca * cb;
    }
    drop_exact_zeros(out.exact_);
    return out;
  }
  const auto a = lhs.float_terms();
  const auto b = rhs.float_terms();
  std::map<int, double> acc;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) acc[ea + eb] += ca * cb;
  }
  return LaurentPoly::from_float(acc);
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& rhs) {
  *this = *this * rhs;
  return *this;
}

LaurentPoly LaurentPoly::scaled(const Rational& c) const {
  if (!is_exact()) return scaled(c.convert_to<double>());
  if (c == 0) return LaurentPoly();
  LaurentPoly p = *this;
  for (auto& kv : p.exact_) kv.second *= c;
  return p;
}

LaurentPoly LaurentPoly::scaled(double c) const {
  LaurentPoly p = to_float();
  for (auto& kv : p.approx_) kv.second *= c;
  p.prune_float(kFloatPruneThreshold);
  return p;
}

LaurentPoly LaurentPoly::shifted(int k) const {
  LaurentPoly p = zero(mode_);
  for (const auto& [e, c] : exact_) p.exact_.emplace(e + k, c);
  for (const auto& [e, c] : approx_) p.approx_.emplace(e + k, c);
  return p;
}

LaurentPoly LaurentPoly::mirrored() const {
  LaurentPoly p = zero(mode_);
  for (const auto& [e, c] : exact_) p.exact_.emplace(-e, c);
  for (const auto& [e, c] : approx_) p.approx_.emplace(-e, c);
  return p;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
  LaurentPoly result =
      is_exact() ? constant(1) : monomial_float(0, 1.0);
  LaurentPoly base = *this;
  while (k) {
    if (k & 1u) result *= base;
    k >>= 1u;
    if (k) base *= base;
  }
  return result;
}

bool LaurentPoly::all_exponents_even() const {
  for (int e : exponents()) {
    if (e % 2 != 0) return false;
  }
  return true;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
  if (a.mode_ != b.mode_) return false;
  return a.is_exact() ? a.exact_ == b.exact_ : a.approx_ == b.approx_;
}

bool LaurentPoly::approx_equal(const LaurentPoly& other, double tol) const {
  return linf_distance(other) <= tol;
}

double LaurentPoly::linf_distance(const LaurentPoly& other) const {
  const auto a = float_terms();
  const auto b = other.float_terms();
  double worst = 0.0;
  for (const auto& [e, c] : a) {
    auto it = b.find(e);
    worst = std::max(worst, std::abs(c - (it == b.end() ? 0.0 : it->second)));
  }
  for (const auto& [e, c] : b) {
    if (!a.count(e)) worst = std::max(worst, std::abs(c));
  }
  return worst;
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string LaurentPoly::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](bool negative, const std::string& magnitude, int e) {
    if (first) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    first = false;
    out += magnitude + "*A^" + std::to_string(e);
  };
  if (is_exact()) {
    for (const auto& [e, c] : exact_) emit(c < 0, pjones::to_string(abs(c)), e);
  } else {
    for (const auto& [e, c] : approx_) emit(c < 0, format_double(std::abs(c)), e);
  }
  return out;
}

LaurentPoly d_power(unsigned k) {
  // d = -A^2 - A^-2  =>  d^k = (-1)^k sum_j C(k,j) A^(2k-4j)
  std::map<int, Rational> terms;
  BigInt binom = 1;
  const int sign = (k % 2 == 0) ? 1 : -1;
  for (unsigned j = 0; j <= k; ++j) {
    terms[2 * static_cast<int>(k) - 4 * static_cast<int>(j)] =
        Rational(binom) * sign;
    binom = binom * (k - j) / (j + 1);
  }
  return LaurentPoly::from_exact(terms);
}

int span(const LaurentPoly& p) {
  if (p.is_zero()) throw Error("undefined span: zero polynomial");
  return p.max_exponent() - p.min_exponent();
}

DivisionResult divide_by_d_power(const LaurentPoly& p, unsigned k) {
  if (!p.all_exponents_even()) {
    throw Error("divide_by_d_power: odd exponent present in " + p.to_string());
  }
  DivisionResult out;
  if (k == 0) {
    out.quotient = p;
    out.remainder = LaurentPoly::zero(p.mode());
    return out;
  }
  const LaurentPoly divisor = p.is_exact() ? d_power(k) : d_power(k).to_float();
  // Leading coefficient of d^k in B = A^2 is (-1)^k at B^k.
  const int lead_sign = (k % 2 == 0) ? 1 : -1;
  const int top = 2 * static_cast<int>(k);
  LaurentPoly rem = p;
  LaurentPoly quot = LaurentPoly::zero(p.mode());
  while (!rem.is_zero() && rem.max_exponent() >= top) {
    const int e = rem.max_exponent();
    LaurentPoly term =
        rem.is_exact()
            ? LaurentPoly::monomial(e - top, rem.exact_coeff(e) * lead_sign)
            : LaurentPoly::monomial_float(e - top, rem.coeff(e) * lead_sign);
    quot += term;
    LaurentPoly next = rem - term * divisor;
    if (!next.is_exact() && !next.is_zero() && next.max_exponent() == e) {
      // Cancellation residue of the leading term in float mode.
      auto terms = next.float_terms();
      terms.erase(e);
      next = LaurentPoly::from_float(terms);
    }
    rem = std::move(next);
  }
  out.quotient = std::move(quot);
  out.remainder = std::move(rem);
  out.remainder_span = out.remainder.is_zero() ? 0 : span(out.remainder);
  return out;
}

nlohmann::json to_json(const LaurentPoly& p) {
  nlohmann::json terms = nlohmann::json::array();
  if (p.is_exact()) {
    for (const auto& [e, c] : p.exact_terms()) {
      terms.push_back({e, bigint_to_json(numerator(c)),
                       bigint_to_json(denominator(c))});
    }
  } else {
    for (const auto& [e, c] : p.float_terms()) terms.push_back({e, c});
  }
  return {{"mode", p.is_exact() ? "exact" : "float"}, {"terms", terms}};
}

LaurentPoly laurent_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("mode") || !j.contains("terms")) {
    throw SchemaError("polynomial: expected {\"mode\",\"terms\"}");
  }
  const auto mode = j.at("mode").get<std::string>();
  const auto& terms = j.at("terms");
  if (!terms.is_array()) throw SchemaError("polynomial: terms must be an array");
  if (mode == "exact") {
    std::map<int, Rational> m;
    for (const auto& t : terms) {
      if (!t.is_array() || t.size() != 3) {
        throw SchemaError("polynomial: exact term must be [exponent, num, den]");
      }
      const BigInt den = json_to_bigint(t[2]);
      if (den == 0) throw SchemaError("polynomial: zero denominator");
      m[t[0].get<int>()] += Rational(json_to_bigint(t[1]), den);
    }
    return LaurentPoly::from_exact(m);
  }
  if (mode == "float") {
    std::map<int, double> m;
    for (const auto& t : terms) {
      if (!t.is_array() || t.size() != 2) {
        throw SchemaError("polynomial: float term must be [exponent, value]");
      }
      m[t[0].get<int>()] += t[1].get<double>();
    }
    return LaurentPoly::from_float(m);
  }
  throw SchemaError("polynomial: unknown mode '" + mode + "'");
}

}  // namespace pjones
