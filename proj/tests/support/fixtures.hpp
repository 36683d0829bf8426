#pragma once

#include <cmath>
#include <fstream>
#include <numbers>
#include <string>

#include "pjones/geometry.hpp"
#include "pjones/io.hpp"
#include "pjones/pbc.hpp"

namespace fixtures {

using pjones::Curve;
using pjones::CurveCollection;
using pjones::Vec3;

template <typename F>
Curve sampled_closed(const std::string& id, int n, F&& f) {
  Curve c{id, true, {}};
  for (int i = 0; i < n; ++i) c.vertices.push_back(f(2.0 * std::numbers::pi * i / n));
  return c;
}

// Unit circles in the xy-plane and in the xz-plane through (1,0,0); linking +1.
inline CurveCollection hopf(bool reverse_second = false) {
  Curve a = sampled_closed("a", 16, [](double t) { return Vec3(std::cos(t), std::sin(t), 0); });
  Curve b = sampled_closed("b", 16, [&](double t) {
    const double s = reverse_second ? std::sin(t) : -std::sin(t);
    return Vec3(1 + std::cos(t), 0, s);
  });
  return CurveCollection({a, b});
}

inline Vec3 torus_knot(double t) {
  return Vec3((2 + std::cos(3 * t)) * std::cos(2 * t), (2 + std::cos(3 * t)) * std::sin(2 * t),
              -std::sin(3 * t));
}

inline CurveCollection trefoil(int n = 30) {
  return CurveCollection({sampled_closed("trefoil", n, torus_knot)});
}

// Open trefoil whose end gap (chord between the two ends) equals eps.
inline CurveCollection open_trefoil(double eps, int n = 240) {
  double lo = 0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double chord = (torus_knot(mid / 2) - torus_knot(-mid / 2)).norm();
    (chord < eps ? lo : hi) = mid;
  }
  const double delta = 0.5 * (lo + hi);
  Curve c{"open_trefoil", false, {}};
  const double t0 = delta / 2, t1 = 2 * std::numbers::pi - delta / 2;
  for (int i = 0; i <= n; ++i) c.vertices.push_back(torus_knot(t0 + (t1 - t0) * i / n));
  return CurveCollection({c});
}

inline CurveCollection disjoint_circles(int n) {
  std::vector<Curve> cs;
  for (int k = 0; k < n; ++k) {
    cs.push_back(sampled_closed("c" + std::to_string(k), 12, [&](double t) {
      return Vec3(5.0 * k + std::cos(t), 0.3 * k + std::sin(t), 0.1 * k);
    }));
  }
  return CurveCollection(cs);
}

inline CurveCollection straight_segment() {
  return CurveCollection({Curve{"s", false, {Vec3(0, 0, 0), Vec3(1, 0.2, 0.3)}}});
}

inline std::string fixture_path(const std::string& name) {
  return std::string(PJONES_FIXTURE_DIR) + "/" + name;
}

inline pjones::PBCSystem load_system(const std::string& name) {
  return pjones::read_system(fixture_path(name));
}

}  // namespace fixtures
