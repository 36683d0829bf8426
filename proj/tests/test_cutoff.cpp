#include <doctest.h>

#include "pjones/cutoff.hpp"
#include "pjones/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pjones;

TEST_CASE("cutoff layout") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  const int m = minimal_periodic_link(sys).mu.dims[0];
  for (int N = 1; N <= 4; ++N) {
    const CutoffLink c = build_cutoff(sys, N);
    CHECK(c.cells == (2 * N - 1) * m - (N - 1));
    CHECK(c.cells == c.expected_cells);
    CHECK(int(c.copies.size()) == N);
    CHECK(c.all_images.size() == std::size_t(3 * N));
    std::set<std::pair<int, Lattice>> seen;
    for (const auto& copy : c.copies) {
      for (const auto& comp : copy) CHECK(seen.insert(comp.key()).second);
    }
    CHECK(c.curves().size() == c.all_images.size());
  }
  CHECK(build_cutoff(sys, 2).cells == 5);
  CHECK(build_cutoff(sys, 3).cells == 8);
  CHECK_THROWS(build_cutoff(sys, 0));
}

TEST_CASE("one copy is the minimal periodic link itself") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  const Theorem1Report r = verify_theorem1(sys, 1, reference_direction());
  CHECK(r.lambda_tilde.is_zero());
  CHECK(r.lhs == r.v_p);
  CHECK(r.shared_crossings == 0);
  CHECK(r.writhe_identity_ok);
  CHECK(r.decomposition_ok);
}

TEST_CASE("factorization for two and three copies") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  for (int N : {2, 3}) {
    const Theorem1Report r = verify_theorem1(sys, N, reference_direction());
    CAPTURE(N);
    CHECK(r.slk == HalfInteger::from_int(2));
    CHECK(r.lhs == r.state_term + r.lambda_tilde);
    CHECK(r.writhe_identity_ok);
    CHECK(r.pairwise_tally_ok);
    CHECK(r.writhe_cutoff - N * r.writhe_copy == (N - 1) * 2);
    REQUIRE(r.oracle_run);
    CHECK(r.shared_crossings <= kOracleSharedCap);
    // The oriented state carries A^((N-1) SLK), not A^(2 (N-1) SLK).
    CHECK(r.state_oracle_derived_ok);
    CHECK(r.decomposition_derived_ok);
    CHECK_FALSE(r.state_oracle_ok);
    CHECK_FALSE(r.decomposition_ok);
  }
}

TEST_CASE("cutoff polynomial is a closed-link invariant") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  const CutoffLink c = build_cutoff(sys, 2);
  const CurveCollection cc = c.curves();
  const LaurentPoly ref = verify_theorem1(sys, 2, reference_direction()).lhs;
  for (const Vec3& xi : sample_directions(5, SamplingMode::random, 31)) {
    const Vec3 g = find_generic_direction(cc, xi).xi;
    const Theorem1Report r = verify_theorem1(sys, 2, g);
    CHECK(r.lhs == ref);
    CHECK(r.slk == HalfInteger::from_int(2));
    CHECK(r.decomposition_derived_ok);
  }
  CHECK(ref == oracle::jones_by_enumeration(project(cc, reference_direction())));
}

TEST_CASE("oracle is skipped above its cap") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  VerifyOptions opt;
  opt.oracle_cap = 1;
  const Theorem1Report r = verify_theorem1(sys, 2, reference_direction(), opt);
  CHECK_FALSE(r.oracle_run);
  CHECK_FALSE(to_json(r).contains("decomposition_ok"));
  CHECK(to_json(r)["cells"] == 5);
}

TEST_CASE("preconditions") {
  CHECK_THROWS(build_cutoff(fixtures::load_system("jersey.json"), 2));
  CHECK_THROWS(build_cutoff(fixtures::load_system("twill.json"), 2));
  const PBCSystem ring = fixtures::load_system("chainmail.json");
  Cell two = ring.cell();
  two.periodic = {true, true, false};
  CHECK_THROWS(build_cutoff(PBCSystem(two, ring.chains()), 2));
  auto chains = ring.chains();
  chains.push_back(chains[0]);
  chains[1].id = "other";
  CHECK_THROWS(build_cutoff(PBCSystem(ring.cell(), chains), 2));
}
