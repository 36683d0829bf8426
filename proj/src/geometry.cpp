#include "pjones/geometry.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <unordered_map>

#include "pjones/error.hpp"

namespace pjones {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  double t = len2 > 0 ? (p - a).dot(ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * ab - p).norm();
}

struct Seg {
  SegmentRef ref;
  Vec3 p0, p1;
  Vec2 q0, q1;
  double z0, z1;
};

std::string describe(const SegmentRef& s) {
  return "curve " + std::to_string(s.curve) + " segment " + std::to_string(s.segment);
}

std::vector<Seg> project_segments(const CurveCollection& c, const Frame& f) {
  std::vector<Seg> segs;
  segs.reserve(c.segment_count());
  for (std::size_t ci = 0; ci < c.size(); ++ci) {
    const Curve& cur = c.curves()[ci];
    for (std::size_t si = 0; si < cur.segment_count(); ++si) {
      Seg s;
      s.ref = {int(ci), int(si)};
      s.p0 = cur.segment_start(si);
      s.p1 = cur.segment_end(si);
      s.q0 = {s.p0.dot(f.e1), s.p0.dot(f.e2)};
      s.q1 = {s.p1.dot(f.e1), s.p1.dot(f.e2)};
      s.z0 = s.p0.dot(f.xi);
      s.z1 = s.p1.dot(f.xi);
      segs.push_back(s);
    }
  }
  return segs;
}

std::vector<std::pair<int, int>> all_pairs(std::size_t n) {
  std::vector<std::pair<int, int>> out;
  out.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.emplace_back(int(i), int(j));
  }
  return out;
}

std::vector<std::pair<int, int>> grid_pairs(const std::vector<Seg>& segs, double tol) {
  if (segs.size() < 2) return {};
  std::vector<double> lengths;
  lengths.reserve(segs.size());
  Vec2 lo(INFINITY, INFINITY), hi(-INFINITY, -INFINITY);
  for (const auto& s : segs) {
    lengths.push_back((s.q1 - s.q0).norm());
    lo = lo.cwiseMin(s.q0).cwiseMin(s.q1);
    hi = hi.cwiseMax(s.q0).cwiseMax(s.q1);
  }
  std::nth_element(lengths.begin(), lengths.begin() + lengths.size() / 2, lengths.end());
  double h = lengths[lengths.size() / 2];
  const Vec2 extent = hi - lo;
  // Keep the grid within a sane number of cells.
  const double max_cells = 4.0 * double(segs.size()) + 1024.0;
  h = std::max({h, tol * 16, std::sqrt(extent.x() * extent.y() / max_cells)});
  const auto nx = static_cast<std::int64_t>(extent.x() / h) + 2;

  std::unordered_map<std::int64_t, std::vector<int>> cells;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Vec2 a = segs[i].q0.cwiseMin(segs[i].q1).array() - tol;
    const Vec2 b = segs[i].q0.cwiseMax(segs[i].q1).array() + tol;
    const auto x0 = static_cast<std::int64_t>(std::floor((a.x() - lo.x()) / h));
    const auto x1 = static_cast<std::int64_t>(std::floor((b.x() - lo.x()) / h));
    const auto y0 = static_cast<std::int64_t>(std::floor((a.y() - lo.y()) / h));
    const auto y1 = static_cast<std::int64_t>(std::floor((b.y() - lo.y()) / h));
    for (auto x = x0; x <= x1; ++x) {
      for (auto y = y0; y <= y1; ++y) cells[(y + 1) * (nx + 2) + (x + 1)].push_back(int(i));
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (const auto& [key, members] : cells) {
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        pairs.emplace_back(std::min(members[a], members[b]), std::max(members[a], members[b]));
      }
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

}  // namespace

CurveCollection::CurveCollection(std::vector<Curve> curves) : curves_(std::move(curves)) {
  std::set<std::string> ids;
  for (const auto& c : curves_) {
    validate_curve(c);
    if (!ids.insert(c.id).second) throw SchemaError("duplicate curve id '" + c.id + "'");
  }
}

bool CurveCollection::all_closed() const {
  return std::all_of(curves_.begin(), curves_.end(), [](const Curve& c) { return c.closed; });
}

std::size_t CurveCollection::segment_count() const {
  std::size_t n = 0;
  for (const auto& c : curves_) n += c.segment_count();
  return n;
}

void validate_curve(const Curve& c) {
  const std::size_t need = c.closed ? 3 : 2;
  if (c.vertices.size() < need) {
    throw SchemaError("curve '" + c.id + "': needs at least " + std::to_string(need) +
                      " vertices");
  }
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    if (!c.vertices[i].allFinite()) throw SchemaError("curve '" + c.id + "': non-finite vertex");
  }
  for (std::size_t i = 0; i < c.segment_count(); ++i) {
    if (c.segment_start(i) == c.segment_end(i)) {
      throw SchemaError("curve '" + c.id + "': repeated vertex at " + std::to_string(i));
    }
  }
}

void require_unit(const Vec3& xi) {
  if (std::abs(xi.norm() - 1.0) > 1e-12) throw Error("direction must be a unit vector");
}

Frame projection_frame(const Vec3& xi) {
  require_unit(xi);
  Eigen::Index axis = 0;
  xi.cwiseAbs().minCoeff(&axis);
  Vec3 a = Vec3::Unit(axis);
  Frame f;
  f.xi = xi;
  f.e1 = (a - a.dot(xi) * xi).normalized();
  f.e2 = xi.cross(f.e1);
  return f;
}

std::vector<Vec3> sample_directions(int n, SamplingMode mode, std::uint64_t seed) {
  if (n < 1) throw Error("sample_directions: n must be positive");
  std::vector<Vec3> out;
  out.reserve(n);
  if (mode == SamplingMode::fibonacci) {
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      out.push_back(Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized());
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uz(-1.0, 1.0);
    std::uniform_real_distribution<double> uphi(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < n; ++i) {
      const double z = uz(rng);
      const double phi = uphi(rng);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      out.push_back(Vec3(r * std::cos(phi), r * std::sin(phi), z).normalized());
    }
  }
  return out;
}

Vec3 perturb_direction(const Vec3& xi, int attempt, double angle) {
  const Frame f = projection_frame(xi);
  const double theta = attempt * std::numbers::pi * (3.0 - std::sqrt(5.0));
  const Vec3 axis = std::cos(theta) * f.e1 + std::sin(theta) * f.e2;
  return Eigen::AngleAxisd(angle, axis) * xi;
}

ProjectionResult find_crossings(const CurveCollection& c, const Vec3& xi, double tol,
                                bool use_grid) {
  const Frame f = projection_frame(xi);
  const std::vector<Seg> segs = project_segments(c, f);
  ProjectionResult res;
  auto fail = [&](std::string what) {
    res.non_generic = std::move(what);
    res.crossings.clear();
    return res;
  };
  for (const auto& s : segs) {
    if ((s.q1 - s.q0).norm() <= tol) return fail("degenerate projected " + describe(s.ref));
  }
  const auto pairs = use_grid ? grid_pairs(segs, tol) : all_pairs(segs.size());
  const double tol3 = tol;
  for (const auto& [i, j] : pairs) {
    const Seg& a = segs[i];
    const Seg& b = segs[j];
    const Vec3* ea[2] = {&a.p0, &a.p1};
    const Vec3* eb[2] = {&b.p0, &b.p1};
    bool shared_a[2] = {false, false}, shared_b[2] = {false, false};
    for (int u = 0; u < 2; ++u) {
      for (int v = 0; v < 2; ++v) {
        if ((*ea[u] - *eb[v]).norm() <= tol3) shared_a[u] = shared_b[v] = true;
      }
    }
    const Vec2 qa[2] = {a.q0, a.q1};
    const Vec2 qb[2] = {b.q0, b.q1};
    const std::string where = describe(a.ref) + " / " + describe(b.ref);
    for (int u = 0; u < 2; ++u) {
      if (!shared_a[u] && point_segment_distance(qa[u], b.q0, b.q1) <= tol) {
        return fail("vertex on projected segment: " + where);
      }
      if (!shared_b[u] && point_segment_distance(qb[u], a.q0, a.q1) <= tol) {
        return fail("vertex on projected segment: " + where);
      }
    }
    if (shared_a[0] || shared_a[1]) continue;  // adjacent segments meet only at the vertex

    const Vec2 r = a.q1 - a.q0;
    const Vec2 s = b.q1 - b.q0;
    const double den = cross2(r, s);
    if (den == 0.0) continue;
    const Vec2 w = b.q0 - a.q0;
    const double t = cross2(w, s) / den;
    const double u = cross2(w, r) / den;
    if (t <= 0.0 || t >= 1.0 || u <= 0.0 || u >= 1.0) continue;
    if (std::abs(den) / (r.norm() * s.norm()) <= tol) {
      return fail("tangential intersection: " + where);
    }
    const double za = a.z0 + t * (a.z1 - a.z0);
    const double zb = b.z0 + u * (b.z1 - b.z0);
    if (std::abs(za - zb) <= tol) return fail("segments meet in space: " + where);
    RawCrossing x;
    x.point = a.q0 + t * r;
    const bool a_over = za > zb;
    x.over = a_over ? a.ref : b.ref;
    x.under = a_over ? b.ref : a.ref;
    x.t_over = a_over ? t : u;
    x.t_under = a_over ? u : t;
    const double orient = a_over ? cross2(r, s) : cross2(s, r);
    x.sign = orient > 0 ? 1 : -1;
    res.crossings.push_back(x);
  }
  std::sort(res.crossings.begin(), res.crossings.end(),
            [](const RawCrossing& x, const RawCrossing& y) {
              return std::tie(x.point.x(), x.point.y()) < std::tie(y.point.x(), y.point.y());
            });
  for (std::size_t k = 0; k < res.crossings.size(); ++k) {
    for (std::size_t m = k + 1; m < res.crossings.size(); ++m) {
      const auto& p = res.crossings[k].point;
      const auto& q = res.crossings[m].point;
      if (q.x() - p.x() > tol) break;
      if ((q - p).norm() <= tol) return fail("coincident crossings");
    }
  }
  std::sort(res.crossings.begin(), res.crossings.end(),
            [](const RawCrossing& x, const RawCrossing& y) {
              return std::tie(x.over.curve, x.over.segment, x.t_over) <
                     std::tie(y.over.curve, y.over.segment, y.t_over);
            });
  return res;
}

bool is_generic(const CurveCollection& c, const Vec3& xi, double tol) {
  return !find_crossings(c, xi, tol).non_generic.has_value();
}

Diagram diagram_from_crossings(const CurveCollection& c,
                               const std::vector<RawCrossing>& crossings) {
  struct Mark {
    int segment;
    double t;
    Passage p;
  };
  std::vector<std::vector<Mark>> per_curve(c.size());
  std::vector<Crossing> xs;
  xs.reserve(crossings.size());
  for (std::size_t k = 0; k < crossings.size(); ++k) {
    const auto& x = crossings[k];
    xs.push_back({int(k), x.sign});
    per_curve[x.over.curve].push_back(
        {x.over.segment, x.t_over, {int(k), true, true, x.over.curve}});
    per_curve[x.under.curve].push_back(
        {x.under.segment, x.t_under, {int(k), false, true, x.under.curve}});
  }
  std::vector<std::string> ids;
  std::vector<Strand> strands;
  for (std::size_t ci = 0; ci < c.size(); ++ci) {
    ids.push_back(c.curves()[ci].id);
    auto& marks = per_curve[ci];
    std::sort(marks.begin(), marks.end(), [](const Mark& a, const Mark& b) {
      return std::tie(a.segment, a.t) < std::tie(b.segment, b.t);
    });
    Strand s;
    for (const auto& m : marks) s.passages.push_back(m.p);
    if (!c.curves()[ci].closed) {
      s.ends = std::make_pair(Endpoint{int(ci), false}, Endpoint{int(ci), true});
    }
    strands.push_back(std::move(s));
  }
  return Diagram(std::move(ids), std::move(strands), std::move(xs));
}

Diagram project(const CurveCollection& c, const Vec3& xi, double tol) {
  auto res = find_crossings(c, xi, tol);
  if (res.non_generic) throw NonGenericDirection(*res.non_generic);
  return diagram_from_crossings(c, res.crossings);
}

GenericDirection find_generic_direction(const CurveCollection& c, const Vec3& xi, double tol,
                                        int max_retries) {
  auto res = find_crossings(c, xi, tol);
  if (!res.non_generic) return {xi, 0};
  std::string last = *res.non_generic;
  for (int a = 0; a < max_retries; ++a) {
    const Vec3 cand = perturb_direction(xi, a);
    auto r = find_crossings(c, cand, tol);
    if (!r.non_generic) return {cand, a + 1};
    last = *r.non_generic;
  }
  throw NonGenericDirection(last + " (after " + std::to_string(max_retries) + " retries)");
}

CurveCollection reversed(const CurveCollection& c) {
  std::vector<Curve> out = c.curves();
  for (auto& cur : out) std::reverse(cur.vertices.begin(), cur.vertices.end());
  return CurveCollection(std::move(out));
}

nlohmann::json to_json(const Curve& c) {
  nlohmann::json verts = nlohmann::json::array();
  for (const auto& v : c.vertices) verts.push_back({v.x(), v.y(), v.z()});
  return {{"id", c.id}, {"closed", c.closed}, {"vertices", verts}};
}

Curve curve_from_json(const nlohmann::json& j) {
  try {
    Curve c;
    c.id = j.at("id").get<std::string>();
    c.closed = j.at("closed").get<bool>();
    for (const auto& v : j.at("vertices")) {
      if (!v.is_array() || v.size() != 3) {
        throw SchemaError("curve '" + c.id + "': vertex must be [x,y,z]");
      }
      c.vertices.emplace_back(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
    }
    validate_curve(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("curve: ") + e.what());
  }
}

nlohmann::json to_json(const CurveCollection& c) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& cur : c.curves()) arr.push_back(to_json(cur));
  return {{"curves", arr}};
}

CurveCollection curves_from_json(const nlohmann::json& j) {
  const nlohmann::json& arr = j.is_object() ? j.at("curves") : j;
  if (!arr.is_array()) throw SchemaError("curves: expected an array");
  std::vector<Curve> curves;
  for (const auto& cj : arr) curves.push_back(curve_from_json(cj));
  return CurveCollection(std::move(curves));
}

}  // namespace pjones
