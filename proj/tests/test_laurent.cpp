#include <doctest.h>

#include <random>

#include "pjones/error.hpp"
#include "pjones/laurent.hpp"

using namespace pjones;

namespace {

LaurentPoly P(std::initializer_list<std::pair<int, int>> terms) {
  std::map<int, Rational> m;
  for (auto [e, c] : terms) m[e] += c;
  return LaurentPoly::from_exact(m);
}

LaurentPoly random_poly(std::mt19937_64& rng, int lo, int hi, bool even,
                        int max_terms = 6) {
  std::uniform_int_distribution<int> n_terms(1, max_terms);
  std::uniform_int_distribution<int> exp(lo, hi);
  std::uniform_int_distribution<int> num(-9, 9);
  std::uniform_int_distribution<int> den(1, 4);
  std::map<int, Rational> m;
  const int n = n_terms(rng);
  for (int i = 0; i < n; ++i) {
    int e = exp(rng);
    if (even) e *= 2;
    m[e] += Rational(num(rng), den(rng));
  }
  return LaurentPoly::from_exact(m);
}

const LaurentPoly d = LaurentPoly::from_exact({{2, -1}, {-2, -1}});

}  // namespace

TEST_CASE("addition") {
  CHECK((P({{2, 1}}) + P({{2, -1}})).is_zero());
  CHECK(P({{2, -1}, {10, -1}}) + LaurentPoly() == P({{2, -1}, {10, -1}}));
  CHECK(d + d == P({{2, -2}, {-2, -2}}));
}

TEST_CASE("multiplication") {
  CHECK(d * d == P({{4, 1}, {0, 2}, {-4, 1}}));
  const auto p = P({{3, 5}, {-7, -2}});
  CHECK(p * LaurentPoly::constant(1) == p);
  CHECK(d * P({{8, 1}, {4, -1}, {0, 2}}) == P({{10, -1}, {2, -1}, {-2, -2}}));
}

TEST_CASE("d powers") {
  CHECK(d_power(0) == LaurentPoly::constant(1));
  CHECK(d_power(1) == d);
  CHECK(d_power(2) == P({{4, 1}, {0, 2}, {-4, 1}}));
  CHECK(d_power(5) == d.pow(5));
}

TEST_CASE("span") {
  CHECK(span(P({{2, -1}, {10, -1}})) == 8);
  CHECK(span(LaurentPoly::constant(1)) == 0);
  CHECK_THROWS_WITH(span(LaurentPoly()), doctest::Contains("undefined span"));
}

TEST_CASE("division by powers of d") {
  SUBCASE("hopf decompositions") {
    auto r1 = divide_by_d_power(P({{2, -1}, {10, -1}}), 1);
    CHECK(r1.quotient == P({{8, 1}, {4, -1}, {0, 2}}));
    CHECK(r1.remainder == P({{-2, 2}}));
    CHECK(r1.remainder_span == 0);
    auto r2 = divide_by_d_power(P({{-2, -1}, {-10, -1}}), 1);
    CHECK(r2.quotient.is_zero());
    CHECK(r2.remainder == P({{-2, -1}, {-10, -1}}));
    CHECK(r2.remainder_span == 8);
  }
  SUBCASE("exact multiple") {
    auto r = divide_by_d_power(d_power(3), 3);
    CHECK(r.quotient == LaurentPoly::constant(1));
    CHECK(r.remainder_is_zero());
  }
  SUBCASE("k = 0") {
    const auto p = P({{-4, 3}, {6, 1}});
    auto r = divide_by_d_power(p, 0);
    CHECK(r.quotient == p);
    CHECK(r.remainder_is_zero());
  }
  SUBCASE("odd exponent rejected") {
    CHECK_THROWS_AS(divide_by_d_power(P({{1, 1}}), 1), Error);
  }
  SUBCASE("float mode") {
    auto p = P({{2, -1}, {10, -1}}).to_float();
    auto r = divide_by_d_power(p, 1);
    CHECK(r.quotient.approx_equal(P({{8, 1}, {4, -1}, {0, 2}})));
    CHECK(r.remainder.approx_equal(P({{-2, 2}})));
  }
}

TEST_CASE("randomized ring laws") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_poly(rng, -8, 8, false);
    const auto b = random_poly(rng, -8, 8, false);
    const auto c = random_poly(rng, -8, 8, false);
    CHECK(a + b == b + a);
    CHECK(a * b == b * a);
    CHECK((a + b) + c == a + (b + c));
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
  }
}

TEST_CASE("division reconstruction on 1000 random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<unsigned> kdist(1, 3);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = random_poly(rng, -10, 10, true, 8);
    const unsigned k = kdist(rng);
    const auto r = divide_by_d_power(p, k);
    if (r.quotient * d_power(k) + r.remainder != p) ++failures;
    for (int e : r.quotient.exponents()) {
      CHECK(e >= 0);
      CHECK(e % 2 == 0);
    }
    if (!r.remainder.is_zero()) CHECK(r.remainder.max_exponent() < 2 * int(k));
  }
  CHECK(failures == 0);
}

TEST_CASE("exact multiples leave no remainder") {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 200; ++i) {
    const unsigned k = 1 + i % 3;
    const auto w = random_poly(rng, 0, 6, true);
    const auto r = divide_by_d_power(w * d_power(k), k);
    CHECK(r.remainder_is_zero());
    CHECK(r.quotient == w);
  }
}

TEST_CASE("span additivity") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coeff(1, 9);
  for (int i = 0; i < 200; ++i) {
    // Positive coefficients rule out cancellation of the extreme terms.
    std::map<int, Rational> ma, mb;
    for (int j = 0; j < 4; ++j) {
      ma[int(rng() % 17) - 8] = coeff(rng);
      mb[int(rng() % 17) - 8] = coeff(rng);
    }
    const auto a = LaurentPoly::from_exact(ma);
    const auto b = LaurentPoly::from_exact(mb);
    CHECK(span(a * b) == span(a) + span(b));
  }
}

TEST_CASE("float pruning and mixed modes") {
  auto f = LaurentPoly::from_float({{0, 1e-13}, {2, 0.5}});
  CHECK(f.term_count() == 1);
  auto mixed = f + LaurentPoly::constant(1);
  CHECK_FALSE(mixed.is_exact());
  CHECK(mixed.coeff(0) == doctest::Approx(1.0));
  CHECK(LaurentPoly::from_float({{0, 0.0005}, {2, 1.0}}).pruned(1e-3).term_count() == 1);
}

TEST_CASE("mirror and shift") {
  const auto p = P({{-3, 2}, {5, -1}});
  CHECK(p.mirrored() == P({{3, 2}, {-5, -1}}));
  CHECK(p.shifted(3) == P({{0, 2}, {8, -1}}));
}

TEST_CASE("text and json") {
  const auto p = LaurentPoly::from_exact({{-2, Rational(-1)}, {0, Rational(3, 2)}});
  CHECK(p.to_string() == "-1*A^-2 + 3/2*A^0");
  CHECK(LaurentPoly().to_string() == "0");
  const auto j = to_json(p);
  CHECK(j.dump() == R"({"mode":"exact","terms":[[-2,-1,1],[0,3,2]]})");
  CHECK(laurent_from_json(j) == p);
  const auto f = LaurentPoly::from_float({{-2, 0.25}, {4, -1.5}});
  CHECK(laurent_from_json(to_json(f)) == f);
  CHECK_THROWS_AS(laurent_from_json(nlohmann::json::parse(R"({"mode":"x","terms":[]})")),
                  SchemaError);
}
