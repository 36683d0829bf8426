#include <doctest.h>

#include <cmath>

#include "pjones/error.hpp"
#include "pjones/pbc.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pjones;

namespace {

PBCSystem shifted_system(const PBCSystem& sys, const Vec3& v) {
  Cell cell = sys.cell();
  cell.origin += v;
  auto chains = sys.chains();
  for (auto& ch : chains) {
    for (auto& arc : ch.arcs) {
      for (auto& p : arc) p += v;
    }
  }
  return PBCSystem(cell, chains);
}

// Dense sampling of the polyline against the open box, in cell units.
bool sampled_meets_box(const PBCSystem& sys, const std::vector<Vec3>& pts, bool closed,
                       const Lattice& lo, const Lattice& dims) {
  const std::size_t n = closed ? pts.size() : pts.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = pts[i], b = pts[(i + 1) % pts.size()];
    for (int k = 0; k <= 400; ++k) {
      const Vec3 f = sys.fractional(a + (b - a) * (k / 400.0));
      bool inside = true;
      for (int ax = 0; ax < 3; ++ax) {
        if (!sys.cell().periodic[ax]) continue;
        if (!(f[ax] > lo[ax] + 1e-6 && f[ax] < lo[ax] + dims[ax] - 1e-6)) inside = false;
      }
      if (inside) return true;
    }
  }
  return false;
}

PBCSystem closed_trefoil_in_cell() {
  Cell cell;
  cell.basis = {Vec3(10, 0, 0), Vec3(0, 10, 0), Vec3(0, 0, 10)};
  cell.origin = Vec3(-5, -5, -5);
  std::vector<Vec3> pts = fixtures::trefoil().curves()[0].vertices;
  pts.push_back(pts.front());
  return PBCSystem(cell, {GeneratingChain{"t", ChainTopology::closed, {}, {pts}}});
}

}  // namespace

TEST_CASE("textile and chainmail minimal periodic links") {
  const auto j = minimal_periodic_link(fixtures::load_system("jersey.json"));
  CHECK(j.component_count() == 8);
  CHECK(j.mu.dims == Lattice{2, 2, 1});
  const auto t = minimal_periodic_link(fixtures::load_system("twill.json"));
  CHECK(t.component_count() == 3);
  const auto c = minimal_periodic_link(fixtures::load_system("chainmail.json"));
  CHECK(c.component_count() == 3);
  CHECK(c.mu.dims[0] == 2);
}

TEST_CASE("images and periods") {
  const PBCSystem j = fixtures::load_system("jersey.json");
  const Image ij = unfold_image(j, 0);
  CHECK_FALSE(ij.closed);
  CHECK(ij.period == Lattice{1, 0, 0});
  CHECK(ij.placements.size() == 3);
  const Image it = unfold_image(fixtures::load_system("twill.json"), 0);
  CHECK(it.period == Lattice{1, -1, 0});
  const Image ic = unfold_image(fixtures::load_system("chainmail.json"), 0);
  CHECK(ic.closed);
  CHECK(ic.period == Lattice{0, 0, 0});
}

TEST_CASE("collective unfolding is the componentwise maximum") {
  for (const char* name : {"jersey.json", "twill.json", "chainmail.json"}) {
    const PBCSystem sys = fixtures::load_system(name);
    const auto mu = minimal_collective_unfolding(sys);
    Lattice dims{1, 1, 1};
    for (int c = 0; c < int(sys.chains().size()); ++c) {
      const Unfolding u = minimal_unfolding(sys, unfold_image(sys, c));
      for (int a = 0; a < 3; ++a) dims[a] = std::max(dims[a], u.dims[a]);
    }
    CHECK(mu.dims == dims);
  }
}

TEST_CASE("link membership matches a sampled box test") {
  for (const char* name : {"jersey.json", "twill.json", "chainmail.json"}) {
    const PBCSystem sys = fixtures::load_system(name);
    const auto link = minimal_periodic_link(sys);
    std::set<std::pair<int, Lattice>> members;
    for (const auto& c : link.components) members.insert(c.key());
    const Image img = unfold_image(sys, 0);
    int expected = 0;
    for (int i = -6; i <= 6; ++i) {
      for (int k = -6; k <= 6; ++k) {
        Lattice n{i, sys.cell().periodic[1] ? k : 0, 0};
        if (!sys.cell().periodic[1] && k != 0) continue;
        std::vector<Vec3> pts = img.polyline;
        for (auto& p : pts) p += sys.lattice_vector(n);
        const bool meets = sampled_meets_box(sys, pts, img.closed, link.mu.anchor, link.mu.dims);
        CHECK(meets == bool(members.count({0, n})));
        expected += meets;
      }
    }
    CHECK(expected == link.component_count());
  }
}

TEST_CASE("rigid translation of the whole system changes nothing") {
  const PBCSystem base = fixtures::load_system("chainmail.json");
  const PBCSystem moved = shifted_system(base, Vec3(0.37, -1.2, 2.5));
  SamplingConfig cfg;
  CHECK(minimal_periodic_link(moved).component_count() == 3);
  CHECK(periodic_jones(base, cfg) == periodic_jones(moved, cfg));
  CHECK(cell_jones(base, cfg).approx_equal(cell_jones(moved, cfg), 1e-9));

  const PBCSystem twill = fixtures::load_system("twill.json");
  const PBCSystem twill_moved = shifted_system(twill, Vec3(0.11, 0.23, 0.05));
  CHECK(minimal_periodic_link(twill_moved).component_count() == 3);
  cfg.directions = 100;
  CHECK(periodic_jones(twill, cfg).approx_equal(periodic_jones(twill_moved, cfg), 1e-9));
}

TEST_CASE("a chain inside one cell has equal cell and periodic polynomials") {
  const PBCSystem sys = closed_trefoil_in_cell();
  const auto link = minimal_periodic_link(sys);
  CHECK(link.component_count() == 1);
  CHECK(cell_arcs(sys).size() == 1);
  CHECK(cell_jones(sys, {}) == periodic_jones(sys, {}));
  CHECK(periodic_jones(sys, {}) == jones(fixtures::trefoil()));
}

TEST_CASE("cell arcs of the chainmail ring split at the cell wall") {
  const CurveCollection arcs = cell_arcs(fixtures::load_system("chainmail.json"));
  CHECK(arcs.size() == 2);
  for (const auto& c : arcs.curves()) CHECK_FALSE(c.closed);
}

TEST_CASE("periodic self-linking agrees with Gauss integrals") {
  const PBCSystem sys = fixtures::load_system("chainmail.json");
  const auto link = minimal_periodic_link(sys);
  // Oracle: linking of the link with its translates by any nonzero multiple of the stride.
  const int stride = 2 * link.mu.dims[0] - 1;
  double gauss = 0;
  for (int m : {-3, -2, -1, 1, 2, 3}) {
    const Vec3 v = sys.lattice_vector({m * stride, 0, 0});
    for (const auto& a : link.components) {
      for (const auto& b : link.components) {
        std::vector<Vec3> q = b.curve.vertices;
        for (auto& p : q) p += v;
        gauss += oracle::gauss_linking(a.curve.vertices, q);
      }
    }
  }
  // Only the end rings of neighbouring translates link.
  CHECK(std::abs(gauss - 2.0) < 1e-6);
  for (const Vec3& xi : sample_directions(20, SamplingMode::random, 8)) {
    const auto all = CurveCollection(link.curves());
    const Vec3 g = find_generic_direction(all, xi).xi;
    CHECK(slk_p(sys, link, g) == HalfInteger::from_int(int(std::lround(gauss))));
  }
}

TEST_CASE("normalization divides by d^(n-1)") {
  const LaurentPoly hopf = LaurentPoly::monomial(-2, -1) + LaurentPoly::monomial(-10, -1);
  const DivisionResult r = normalized(hopf, 2);
  CHECK(r.remainder == hopf);
  CHECK(r.quotient.is_zero());
  const DivisionResult one = normalized(d_power(3), 4);
  CHECK(one.quotient == LaurentPoly::constant(1));
  CHECK(one.remainder_is_zero());
  CHECK(normalized(hopf, 1).quotient == hopf);
}

TEST_CASE("frozen components reproduce the link") {
  const PBCSystem sys = fixtures::load_system("twill.json");
  const auto link = minimal_periodic_link(sys);
  PbcOptions opt;
  std::vector<std::pair<int, Lattice>> comps;
  for (const auto& c : link.components) comps.push_back(c.key());
  opt.frozen_components = comps;
  const auto again = minimal_periodic_link(sys, opt);
  CHECK(again.component_count() == link.component_count());
  for (int i = 0; i < link.component_count(); ++i) {
    CHECK(again.components[i].curve.vertices == link.components[i].curve.vertices);
  }
}

TEST_CASE("system validation") {
  Cell cell;
  cell.basis = {Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  const GeneratingChain seg{"s", ChainTopology::open, {}, {{Vec3(0.1, 0.1, 0), Vec3(0.2, 0.2, 0)}}};
  Cell none = cell;
  none.periodic = {false, false, false};
  CHECK_THROWS_AS(PBCSystem(none, {seg}), SchemaError);
  Cell skew = cell;
  skew.basis[1] = Vec3(0.5, 1, 0);
  CHECK_THROWS_AS(PBCSystem(skew, {seg}), SchemaError);
  CHECK_THROWS_AS(PBCSystem(cell, {seg, seg}), SchemaError);
  GeneratingChain bad_bp = seg;
  bad_bp.basepoint = {0, 5};
  CHECK_THROWS_AS(PBCSystem(cell, {bad_bp}), SchemaError);

  // Closed chain whose end does not come back to its start.
  GeneratingChain open_loop{"l", ChainTopology::closed, {},
                            {{Vec3(0.1, 0.1, 0), Vec3(0.5, 0.1, 0), Vec3(0.5, 0.5, 0)}}};
  CHECK_THROWS_AS(unfold_image(PBCSystem(cell, {open_loop}), 0), ConnectivityError);
  // Infinite chain that actually closes.
  GeneratingChain fake{"f", ChainTopology::infinite, {},
                       {{Vec3(0.1, 0.1, 0), Vec3(0.5, 0.1, 0), Vec3(0.1, 0.1, 0)}}};
  CHECK_THROWS_AS(unfold_image(PBCSystem(cell, {fake}), 0), ConnectivityError);
}
