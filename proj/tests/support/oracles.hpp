#pragma once

// Slow reference implementations used to cross-check the library.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <vector>

#include "pjones/diagram.hpp"
#include "pjones/geometry.hpp"
#include "pjones/laurent.hpp"

namespace oracle {

using pjones::Diagram;
using pjones::LaurentPoly;
using pjones::Vec3;

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Sum over all 2^k states with loops counted by union-find; open components
// are closed by joining each component's head to its tail.
inline LaurentPoly bracket_by_enumeration(const Diagram& d) {
  const int k = int(d.crossing_count());
  std::map<int, int> idx;
  std::vector<int> sign;
  for (const auto& c : d.crossings()) {
    idx[c.id] = int(sign.size());
    sign.push_back(c.sign);
  }
  // Nodes: 4 per crossing (over-in, over-out, under-in, under-out), then endpoints.
  auto node = [&](int crossing, bool over, bool incoming) {
    return 4 * idx.at(crossing) + (over ? 0 : 2) + (incoming ? 0 : 1);
  };
  std::map<std::pair<int, bool>, int> ep;
  int next = 4 * k;
  auto ep_node = [&](const pjones::Endpoint& e) {
    auto key = std::make_pair(e.component, e.head);
    auto it = ep.find(key);
    if (it != ep.end()) return it->second;
    ep[key] = next;
    return next++;
  };
  std::vector<std::pair<int, int>> arcs;
  int bare_loops = 0;
  for (const auto& s : d.strands()) {
    const auto& ps = s.passages;
    auto in_node = [&](const pjones::Passage& p) { return node(p.crossing, p.over, p.forward); };
    auto out_node = [&](const pjones::Passage& p) { return node(p.crossing, p.over, !p.forward); };
    if (s.closed()) {
      if (ps.empty()) {
        ++bare_loops;
        continue;
      }
      for (std::size_t i = 0; i < ps.size(); ++i) {
        arcs.emplace_back(out_node(ps[i]), in_node(ps[(i + 1) % ps.size()]));
      }
    } else {
      int prev = ep_node(s.ends->first);
      for (const auto& p : ps) {
        arcs.emplace_back(prev, in_node(p));
        prev = out_node(p);
      }
      arcs.emplace_back(prev, ep_node(s.ends->second));
    }
  }
  std::vector<std::pair<int, int>> closures;
  for (const auto& [key, n] : ep) {
    if (key.second) closures.emplace_back(n, ep.at({key.first, false}));
  }
  std::map<int, std::map<int, long long>> counts;  // a-count -> loops -> states
  for (long long mask = 0; mask < (1LL << k); ++mask) {
    UnionFind uf(next);
    for (auto [a, b] : arcs) uf.unite(a, b);
    for (auto [a, b] : closures) uf.unite(a, b);
    int a_count = 0;
    for (int c = 0; c < k; ++c) {
      const bool a_smoothing = !((mask >> c) & 1);
      a_count += a_smoothing;
      // A-smoothing of a positive crossing joins over-in to under-out.
      const bool follow_orientation = a_smoothing == (sign[c] > 0);
      if (follow_orientation) {
        uf.unite(4 * c + 0, 4 * c + 3);
        uf.unite(4 * c + 1, 4 * c + 2);
      } else {
        uf.unite(4 * c + 0, 4 * c + 2);
        uf.unite(4 * c + 1, 4 * c + 3);
      }
    }
    int loops = bare_loops;
    for (int v = 0; v < next; ++v) loops += uf.find(v) == v;
    counts[a_count][loops]++;
  }
  const LaurentPoly dd = LaurentPoly::from_exact({{2, -1}, {-2, -1}});
  LaurentPoly total;
  for (const auto& [a, m] : counts) {
    for (const auto& [loops, n] : m) {
      LaurentPoly term = LaurentPoly::monomial(2 * a - k, pjones::Rational(n));
      term *= loops == 0 ? LaurentPoly::constant(1) : dd.pow(unsigned(loops - 1));
      total += term;
    }
  }
  return total.shifted(d.weight());
}

inline LaurentPoly jones_by_enumeration(const Diagram& d) {
  int w = 0;
  for (const auto& c : d.crossings()) w += c.sign;
  LaurentPoly b = bracket_by_enumeration(d).shifted(-3 * w);
  return w % 2 == 0 ? b : -b;
}

// Gauss linking number of two closed polygons from exact solid angles.
inline double gauss_linking(const std::vector<Vec3>& p, const std::vector<Vec3>& q) {
  double total = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Vec3 p1 = p[i], p2 = p[(i + 1) % p.size()];
    for (std::size_t j = 0; j < q.size(); ++j) {
      const Vec3 q1 = q[j], q2 = q[(j + 1) % q.size()];
      const Vec3 r13 = q1 - p1, r14 = q2 - p1, r23 = q1 - p2, r24 = q2 - p2;
      Vec3 n[4] = {r13.cross(r14), r14.cross(r24), r24.cross(r23), r23.cross(r13)};
      bool degenerate = false;
      for (auto& v : n) {
        const double len = v.norm();
        if (len < 1e-300) degenerate = true;
        else v /= len;
      }
      if (degenerate) continue;
      double omega = 0;
      for (int k = 0; k < 4; ++k) omega += std::asin(std::clamp(n[k].dot(n[(k + 1) % 4]), -1.0, 1.0));
      const double s = (q2 - q1).cross(p2 - p1).dot(r13);
      total += s > 0 ? omega : (s < 0 ? -omega : 0.0);
    }
  }
  return total / (4 * std::numbers::pi);
}

struct SimpleCrossing {
  int curve_a, curve_b;
  int sign;
};

// All-pairs segment intersection in an arbitrary frame orthogonal to xi.
inline std::vector<SimpleCrossing> brute_force_crossings(const pjones::CurveCollection& c,
                                                         const Vec3& xi) {
  Vec3 helper = std::abs(xi.x()) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  const Vec3 u = xi.cross(helper).normalized();
  const Vec3 v = xi.cross(u);
  struct S {
    int curve;
    int index;
    std::size_t n;
    bool closed;
    Vec3 a, b;
  };
  std::vector<S> segs;
  for (std::size_t ci = 0; ci < c.size(); ++ci) {
    const auto& cur = c.curves()[ci];
    for (std::size_t i = 0; i < cur.segment_count(); ++i) {
      segs.push_back({int(ci), int(i), cur.segment_count(), cur.closed, cur.segment_start(i),
                      cur.segment_end(i)});
    }
  }
  auto p2 = [&](const Vec3& x) { return std::array<double, 2>{x.dot(u), x.dot(v)}; };
  std::vector<SimpleCrossing> out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    for (std::size_t j = i + 1; j < segs.size(); ++j) {
      const auto& s = segs[i];
      const auto& t = segs[j];
      if ((s.a - t.a).norm() < 1e-12 || (s.a - t.b).norm() < 1e-12 ||
          (s.b - t.a).norm() < 1e-12 || (s.b - t.b).norm() < 1e-12) {
        continue;
      }
      const auto a0 = p2(s.a), a1 = p2(s.b), b0 = p2(t.a), b1 = p2(t.b);
      const double rx = a1[0] - a0[0], ry = a1[1] - a0[1];
      const double sx = b1[0] - b0[0], sy = b1[1] - b0[1];
      const double den = rx * sy - ry * sx;
      if (den == 0) continue;
      const double wx = b0[0] - a0[0], wy = b0[1] - a0[1];
      const double tt = (wx * sy - wy * sx) / den;
      const double uu = (wx * ry - wy * rx) / den;
      if (tt <= 0 || tt >= 1 || uu <= 0 || uu >= 1) continue;
      const double da = (s.a + tt * (s.b - s.a)).dot(xi);
      const double db = (t.a + uu * (t.b - t.a)).dot(xi);
      // Positive when the over tangent turns counterclockwise onto the under tangent.
      const Vec3 over = da > db ? (s.b - s.a) : (t.b - t.a);
      const Vec3 under = da > db ? (t.b - t.a) : (s.b - s.a);
      const int sign = over.cross(under).dot(xi) > 0 ? 1 : -1;
      out.push_back({s.curve, t.curve, sign});
    }
  }
  return out;
}

}  // namespace oracle
