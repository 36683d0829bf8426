#include "pjones/pbc.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "pjones/error.hpp"

namespace pjones {

namespace {

std::string lattice_label(const Lattice& n) {
  return "[" + std::to_string(n[0]) + "," + std::to_string(n[1]) + "," + std::to_string(n[2]) +
         "]";
}

Lattice add(const Lattice& a, const Lattice& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

// Subsegment of a polyline lying in a single lattice cell.
struct Piece {
  Lattice cell;
  Vec3 a, b;
};

Lattice cell_of(const PBCSystem& sys, const Vec3& p) {
  const Vec3 f = sys.fractional(p);
  Lattice n{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (sys.cell().periodic[a]) n[a] = int(std::floor(f[a]));
  }
  return n;
}

// Splits segment p->q at the lattice planes of the periodic axes.
void split_segment(const PBCSystem& sys, const Vec3& p, const Vec3& q, std::vector<Piece>& out) {
  const Vec3 fp = sys.fractional(p);
  const Vec3 fq = sys.fractional(q);
  std::vector<double> ts{0.0, 1.0};
  for (int a = 0; a < 3; ++a) {
    if (!sys.cell().periodic[a]) continue;
    const double d = fq[a] - fp[a];
    if (std::abs(d) < 1e-15) continue;
    const double lo = std::min(fp[a], fq[a]);
    const double hi = std::max(fp[a], fq[a]);
    for (double k = std::ceil(lo); k <= std::floor(hi); k += 1.0) {
      const double t = (k - fp[a]) / d;
      if (t > 1e-12 && t < 1 - 1e-12) ts.push_back(t);
    }
  }
  std::sort(ts.begin(), ts.end());
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    if (ts[i + 1] - ts[i] < 1e-12) continue;
    const Vec3 a = p + ts[i] * (q - p);
    const Vec3 b = p + ts[i + 1] * (q - p);
    out.push_back({cell_of(sys, 0.5 * (a + b)), a, b});
  }
}

std::vector<Piece> pieces_of(const PBCSystem& sys, const std::vector<Vec3>& pts, bool closed) {
  std::vector<Piece> out;
  const std::size_t n = closed ? pts.size() : pts.size() - 1;
  for (std::size_t i = 0; i < n; ++i) split_segment(sys, pts[i], pts[(i + 1) % pts.size()], out);
  return out;
}

std::optional<Lattice> match_translate(const PBCSystem& sys, const Vec3& from, const Vec3& to,
                                       double tol) {
  // Lattice n with to + n ~ from.
  const Vec3 d = sys.fractional(from) - sys.fractional(to);
  Lattice n{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (sys.cell().periodic[a]) {
      const double r = std::round(d[a]);
      if (std::abs(d[a] - r) > tol) return std::nullopt;
      n[a] = int(r);
    } else if (std::abs(d[a]) > tol) {
      return std::nullopt;
    }
  }
  return n;
}

std::vector<Vec3> shifted_points(const std::vector<Vec3>& pts, const Vec3& v) {
  std::vector<Vec3> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(p + v);
  return out;
}

}  // namespace

std::string to_string(ChainTopology t) {
  switch (t) {
    case ChainTopology::closed: return "closed";
    case ChainTopology::open: return "open";
    case ChainTopology::infinite: return "infinite";
  }
  return "closed";
}

ChainTopology topology_from_string(const std::string& s) {
  if (s == "closed") return ChainTopology::closed;
  if (s == "open") return ChainTopology::open;
  if (s == "infinite") return ChainTopology::infinite;
  throw SchemaError("unknown chain topology '" + s + "'");
}

PBCSystem::PBCSystem(Cell cell, std::vector<GeneratingChain> chains)
    : cell_(std::move(cell)), chains_(std::move(chains)) {
  if (std::none_of(cell_.periodic.begin(), cell_.periodic.end(), [](bool b) { return b; })) {
    throw SchemaError("system: at least one axis must be periodic");
  }
  for (int a = 0; a < 3; ++a) {
    if (!cell_.basis[a].allFinite() || cell_.basis[a].norm() == 0.0) {
      throw SchemaError("system: basis vector " + std::to_string(a) + " must be nonzero");
    }
    for (int b = a + 1; b < 3; ++b) {
      const double c = cell_.basis[a].dot(cell_.basis[b]);
      if (std::abs(c) > 1e-9 * cell_.basis[a].norm() * cell_.basis[b].norm()) {
        throw SchemaError("system: only orthogonal cells are supported");
      }
    }
  }
  std::set<std::string> ids;
  for (const auto& ch : chains_) {
    if (!ids.insert(ch.id).second) throw SchemaError("system: duplicate chain id '" + ch.id + "'");
    if (ch.arcs.empty()) throw SchemaError("chain '" + ch.id + "': no arcs");
    for (const auto& arc : ch.arcs) {
      if (arc.size() < 2) throw SchemaError("chain '" + ch.id + "': arc with fewer than 2 points");
      for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        if (arc[i] == arc[i + 1]) throw SchemaError("chain '" + ch.id + "': repeated vertex");
      }
    }
    const auto& bp = ch.basepoint;
    if (bp.arc < 0 || bp.arc >= int(ch.arcs.size()) || bp.vertex < 0 ||
        bp.vertex >= int(ch.arcs[bp.arc].size())) {
      throw SchemaError("chain '" + ch.id + "': basepoint out of range");
    }
  }
}

int PBCSystem::chain_index(const std::string& id) const {
  for (std::size_t i = 0; i < chains_.size(); ++i) {
    if (chains_[i].id == id) return int(i);
  }
  throw Error("unknown chain '" + id + "'");
}

int PBCSystem::periodic_axis_count() const {
  return int(std::count(cell_.periodic.begin(), cell_.periodic.end(), true));
}

Vec3 PBCSystem::fractional(const Vec3& p) const {
  const Vec3 r = p - cell_.origin;
  Vec3 f;
  for (int a = 0; a < 3; ++a) f[a] = r.dot(cell_.basis[a]) / cell_.basis[a].squaredNorm();
  return f;
}

Vec3 PBCSystem::lattice_vector(const Lattice& n) const {
  return n[0] * cell_.basis[0] + n[1] * cell_.basis[1] + n[2] * cell_.basis[2];
}

PBCSystem PBCSystem::with_basepoint(int chain, Basepoint bp) const {
  auto chains = chains_;
  chains.at(chain).basepoint = bp;
  return PBCSystem(cell_, std::move(chains));
}

CurveCollection MinimalPeriodicLink::curves() const {
  std::vector<Curve> cs;
  cs.reserve(components.size());
  for (const auto& c : components) cs.push_back(c.curve);
  return CurveCollection(std::move(cs));
}

Image unfold_image(const PBCSystem& sys, int chain, std::optional<Basepoint> bp_opt,
                   double match_tol) {
  const GeneratingChain& ch = sys.chains().at(chain);
  const Basepoint bp = bp_opt.value_or(ch.basepoint);
  const int n_arcs = int(ch.arcs.size());
  if (bp.arc < 0 || bp.arc >= n_arcs || bp.vertex < 0 ||
      bp.vertex >= int(ch.arcs[bp.arc].size())) {
    throw Error("chain '" + ch.id + "': basepoint out of range");
  }
  std::vector<bool> used(n_arcs, false);
  used[bp.arc] = true;
  std::vector<std::pair<int, Lattice>> placements{{bp.arc, {0, 0, 0}}};
  Image img;
  img.chain = chain;

  auto end_of = [&](const std::pair<int, Lattice>& pl) -> Vec3 {
    return ch.arcs[pl.first].back() + sys.lattice_vector(pl.second);
  };
  auto start_of = [&](const std::pair<int, Lattice>& pl) -> Vec3 {
    return ch.arcs[pl.first].front() + sys.lattice_vector(pl.second);
  };
  auto all_used = [&] { return std::all_of(used.begin(), used.end(), [](bool b) { return b; }); };

  while (true) {
    const Vec3 cur = end_of(placements.back());
    std::vector<std::pair<int, Lattice>> cands;
    for (int k = 0; k < n_arcs; ++k) {
      if (used[k] && k != bp.arc) continue;
      if (auto m = match_translate(sys, cur, ch.arcs[k].front(), match_tol)) cands.emplace_back(k, *m);
    }
    if (cands.size() > 1) {
      throw ConnectivityError("chain '" + ch.id + "': ambiguous continuation after arc " +
                              std::to_string(placements.back().first));
    }
    if (cands.empty()) {
      if (ch.topology == ChainTopology::open) break;
      throw ConnectivityError("chain '" + ch.id + "': broken chain connectivity after arc " +
                              std::to_string(placements.back().first));
    }
    const auto [k, m] = cands.front();
    if (k == bp.arc) {
      if (ch.topology == ChainTopology::open) {
        throw ConnectivityError("chain '" + ch.id + "': open chain closes on itself");
      }
      if (!all_used()) {
        throw ConnectivityError("chain '" + ch.id +
                                "': chain returns to its basepoint arc before using every arc");
      }
      const bool zero = m == Lattice{0, 0, 0};
      if (ch.topology == ChainTopology::closed && !zero) {
        throw ConnectivityError("chain '" + ch.id + "': closed chain does not close (translate " +
                                lattice_label(m) + ")");
      }
      if (ch.topology == ChainTopology::infinite && zero) {
        throw ConnectivityError("chain '" + ch.id + "': infinite chain closes up");
      }
      img.period = m;
      break;
    }
    used[k] = true;
    placements.emplace_back(k, m);
  }
  if (ch.topology == ChainTopology::open) {
    while (true) {
      const Vec3 cur = start_of(placements.front());
      std::vector<std::pair<int, Lattice>> cands;
      for (int k = 0; k < n_arcs; ++k) {
        if (used[k]) continue;
        if (auto m = match_translate(sys, cur, ch.arcs[k].back(), match_tol)) cands.emplace_back(k, *m);
      }
      if (cands.size() > 1) {
        throw ConnectivityError("chain '" + ch.id + "': ambiguous continuation before arc " +
                                std::to_string(placements.front().first));
      }
      if (cands.empty()) break;
      used[cands.front().first] = true;
      placements.insert(placements.begin(), cands.front());
    }
    if (!all_used()) {
      throw ConnectivityError("chain '" + ch.id + "': broken chain connectivity (unreachable arcs)");
    }
  }

  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < placements.size(); ++i) {
    const auto& [k, m] = placements[i];
    const Vec3 shift = sys.lattice_vector(m);
    const auto& arc = ch.arcs[k];
    for (std::size_t v = (i == 0 ? 0 : 1); v < arc.size(); ++v) pts.push_back(arc[v] + shift);
  }
  const int v = bp.vertex;
  switch (ch.topology) {
    case ChainTopology::closed: {
      pts.pop_back();  // equals the first point
      std::rotate(pts.begin(), pts.begin() + v, pts.end());
      img.closed = true;
      break;
    }
    case ChainTopology::infinite: {
      // Start at the basepoint and end at its translate by one period.
      std::vector<Vec3> rotated(pts.begin() + v, pts.end());
      const Vec3 shift = sys.lattice_vector(img.period);
      for (int i = 1; i <= v; ++i) rotated.push_back(pts[i] + shift);
      pts = std::move(rotated);
      break;
    }
    case ChainTopology::open:
      break;
  }
  img.polyline = std::move(pts);
  img.placements = std::move(placements);
  return img;
}

Unfolding minimal_unfolding(const PBCSystem& sys, const Image& img) {
  Unfolding u;
  for (const auto& p : pieces_of(sys, img.polyline, img.closed)) u.cells.insert(p.cell);
  if (u.cells.empty()) u.cells.insert(cell_of(sys, img.polyline.front()));
  Lattice lo = *u.cells.begin(), hi = lo;
  for (const auto& c : u.cells) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], c[a]);
      hi[a] = std::max(hi[a], c[a]);
    }
  }
  for (int a = 0; a < 3; ++a) u.dims[a] = sys.cell().periodic[a] ? hi[a] - lo[a] + 1 : 1;
  u.min_cell = lo;
  return u;
}

MinimalCollectiveUnfolding minimal_collective_unfolding(const PBCSystem& sys,
                                                        const PbcOptions& opt) {
  MinimalCollectiveUnfolding mu;
  bool first = true;
  for (std::size_t i = 0; i < sys.chains().size(); ++i) {
    const Unfolding u = minimal_unfolding(sys, unfold_image(sys, int(i), std::nullopt, opt.match_tol));
    for (int a = 0; a < 3; ++a) {
      mu.dims[a] = std::max(mu.dims[a], u.dims[a]);
      mu.anchor[a] = first ? u.min_cell[a] : std::min(mu.anchor[a], u.min_cell[a]);
    }
    first = false;
  }
  if (opt.anchor) mu.anchor = *opt.anchor;
  for (int a = 0; a < 3; ++a) {
    if (!sys.cell().periodic[a]) mu.anchor[a] = 0;
  }
  return mu;
}

bool polyline_meets_open_box(const PBCSystem& sys, const std::vector<Vec3>& pts, bool closed,
                             const Vec3& lo, const Vec3& hi) {
  const std::size_t n = closed ? pts.size() : pts.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 a = sys.fractional(pts[i]);
    const Vec3 b = sys.fractional(pts[(i + 1) % pts.size()]);
    double t0 = 0.0, t1 = 1.0;
    bool inside = true;
    for (int ax = 0; ax < 3 && inside; ++ax) {
      if (!sys.cell().periodic[ax]) continue;
      const double l = lo[ax] + kBoxTolerance, h = hi[ax] - kBoxTolerance;
      const double d = b[ax] - a[ax];
      if (std::abs(d) < 1e-15) {
        if (a[ax] <= l || a[ax] >= h) inside = false;
        continue;
      }
      double u0 = (l - a[ax]) / d, u1 = (h - a[ax]) / d;
      if (u0 > u1) std::swap(u0, u1);
      t0 = std::max(t0, u0);
      t1 = std::min(t1, u1);
      if (t0 > t1) inside = false;
    }
    if (inside) return true;
  }
  return false;
}

namespace {

MinimalPeriodicLink build_link(const PBCSystem& sys, const PbcOptions& opt) {
  MinimalPeriodicLink link;
  link.mu = minimal_collective_unfolding(sys, opt);
  std::vector<Image> images;
  for (std::size_t i = 0; i < sys.chains().size(); ++i) {
    images.push_back(unfold_image(sys, int(i), std::nullopt, opt.match_tol));
  }
  auto add_component = [&](int chain, const Lattice& t) {
    const Image& img = images[chain];
    MplComponent c;
    c.chain = chain;
    c.translate = t;
    c.curve.id = sys.chains()[chain].id + lattice_label(t);
    c.curve.closed = img.closed;
    c.curve.vertices = shifted_points(img.polyline, sys.lattice_vector(t));
    link.components.push_back(std::move(c));
  };
  if (opt.frozen_components) {
    for (const auto& [chain, t] : *opt.frozen_components) {
      if (chain < 0 || chain >= int(images.size())) throw Error("frozen component: bad chain index");
      add_component(chain, t);
    }
    return link;
  }
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  for (int a = 0; a < 3; ++a) {
    lo[a] = link.mu.anchor[a];
    hi[a] = link.mu.anchor[a] + link.mu.dims[a];
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    const Unfolding u = minimal_unfolding(sys, images[i]);
    Lattice from{0, 0, 0}, to{0, 0, 0};
    for (int a = 0; a < 3; ++a) {
      if (!sys.cell().periodic[a]) continue;
      const int cmax = u.min_cell[a] + u.dims[a] - 1;
      from[a] = link.mu.anchor[a] - cmax - 1;
      to[a] = link.mu.anchor[a] + link.mu.dims[a] - u.min_cell[a];
    }
    for (int x = from[0]; x <= to[0]; ++x) {
      for (int y = from[1]; y <= to[1]; ++y) {
        for (int z = from[2]; z <= to[2]; ++z) {
          const Lattice t{x, y, z};
          const auto pts = shifted_points(images[i].polyline, sys.lattice_vector(t));
          if (polyline_meets_open_box(sys, pts, images[i].closed, lo, hi)) add_component(int(i), t);
        }
      }
    }
  }
  return link;
}

}  // namespace

MinimalPeriodicLink minimal_periodic_link(const PBCSystem& sys, const PbcOptions& opt) {
  if (!opt.search_basepoints || opt.frozen_components) return build_link(sys, opt);
  PBCSystem best_sys = sys;
  for (std::size_t i = 0; i < sys.chains().size(); ++i) {
    const auto& ch = best_sys.chains()[i];
    if (ch.topology != ChainTopology::infinite) continue;
    int best_count = -1;
    Basepoint best_bp = ch.basepoint;
    for (int a = 0; a < int(ch.arcs.size()); ++a) {
      for (int v = 0; v + 1 < int(ch.arcs[a].size()); ++v) {
        const PBCSystem cand = best_sys.with_basepoint(int(i), {a, v});
        const int count = build_link(cand, opt).component_count();
        if (count > best_count) {
          best_count = count;
          best_bp = {a, v};
        }
      }
    }
    best_sys = best_sys.with_basepoint(int(i), best_bp);
  }
  return build_link(best_sys, opt);
}

CurveCollection cell_arcs(const PBCSystem& sys, const PbcOptions& opt) {
  std::vector<Curve> out;
  for (std::size_t ci = 0; ci < sys.chains().size(); ++ci) {
    const Image img = unfold_image(sys, int(ci), std::nullopt, opt.match_tol);
    const auto& id = sys.chains()[ci].id;
    std::vector<Piece> segs = pieces_of(sys, img.polyline, img.closed);
    if (segs.empty()) continue;

    const bool single_cell = std::all_of(segs.begin(), segs.end(), [&](const Piece& p) {
      return p.cell == segs.front().cell;
    });
    if (img.closed && single_cell) {
      Curve c{id + "#0", true, {}};
      const Vec3 back = sys.lattice_vector(segs.front().cell);
      for (const auto& p : img.polyline) c.vertices.push_back(p - back);
      out.push_back(std::move(c));
      continue;
    }
    if (img.closed) {
      // Start at a cell change so no run wraps around the end.
      std::size_t k = 0;
      while (segs[k].cell == segs[(k + segs.size() - 1) % segs.size()].cell) ++k;
      std::rotate(segs.begin(), segs.begin() + k, segs.end());
    }
    struct Run {
      Lattice cell;
      std::vector<Vec3> pts;
    };
    std::vector<Run> runs;
    for (const auto& s : segs) {
      if (runs.empty() || runs.back().cell != s.cell) runs.push_back({s.cell, {s.a}});
      runs.back().pts.push_back(s.b);
    }
    if (img.period != Lattice{0, 0, 0} && runs.size() > 1 &&
        runs.back().cell == add(runs.front().cell, img.period)) {
      const Vec3 shift = sys.lattice_vector(img.period);
      for (std::size_t i = 1; i < runs.front().pts.size(); ++i) {
        runs.back().pts.push_back(runs.front().pts[i] + shift);
      }
      runs.erase(runs.begin());
    }
    int k = 0;
    for (const auto& r : runs) {
      Curve c{id + "#" + std::to_string(k++), false, {}};
      const Vec3 back = sys.lattice_vector(r.cell);
      for (const auto& p : r.pts) c.vertices.push_back(p - back);
      out.push_back(std::move(c));
    }
  }
  return CurveCollection(std::move(out));
}

LaurentPoly cell_jones(const PBCSystem& sys, const SamplingConfig& cfg, const PbcOptions& opt,
                       JonesStats* stats) {
  return jones(cell_arcs(sys, opt), cfg, stats);
}

LaurentPoly periodic_jones(const PBCSystem& sys, const SamplingConfig& cfg, const PbcOptions& opt,
                           JonesStats* stats) {
  return jones(minimal_periodic_link(sys, opt).curves(), cfg, stats);
}

DivisionResult normalized(const LaurentPoly& p, int n_components) {
  if (n_components < 1) throw Error("normalized: component count must be positive");
  return divide_by_d_power(p, unsigned(n_components - 1));
}

CurveCollection translated(const CurveCollection& c, const Vec3& shift, const std::string& suffix) {
  std::vector<Curve> out = c.curves();
  for (auto& cur : out) {
    cur.id += suffix;
    for (auto& v : cur.vertices) v += shift;
  }
  return CurveCollection(std::move(out));
}

std::vector<Lattice> self_linking_translates(const PBCSystem& sys,
                                             const MinimalPeriodicLink& link) {
  Vec3 lo = Vec3::Constant(INFINITY), hi = Vec3::Constant(-INFINITY);
  for (const auto& c : link.components) {
    for (const auto& v : c.curve.vertices) {
      const Vec3 f = sys.fractional(v);
      lo = lo.cwiseMin(f);
      hi = hi.cwiseMax(f);
    }
  }
  Lattice stride{0, 0, 0}, reach{0, 0, 0};
  for (int a = 0; a < 3; ++a) {
    if (!sys.cell().periodic[a]) continue;
    stride[a] = 2 * link.mu.dims[a] - 1;
    reach[a] = int(std::ceil((hi[a] - lo[a]) / stride[a])) + 1;
  }
  std::vector<Lattice> out;
  for (int x = -reach[0]; x <= reach[0]; ++x) {
    for (int y = -reach[1]; y <= reach[1]; ++y) {
      for (int z = -reach[2]; z <= reach[2]; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        const Lattice v{x * stride[0], y * stride[1], z * stride[2]};
        bool overlap = true;
        for (int a = 0; a < 3; ++a) {
          const double s = v[a];
          if (lo[a] + s > hi[a] + 1e-9 || hi[a] + s < lo[a] - 1e-9) overlap = false;
        }
        if (overlap) out.push_back(v);
      }
    }
  }
  return out;
}

HalfInteger slk_p(const PBCSystem& sys, const MinimalPeriodicLink& link, const Vec3& xi,
                  double tol) {
  const CurveCollection base = link.curves();
  std::set<int> group_a;
  for (int i = 0; i < int(base.size()); ++i) group_a.insert(i);
  HalfInteger total;
  for (const Lattice& v : self_linking_translates(sys, link)) {
    std::vector<Curve> all = base.curves();
    const auto moved = translated(base, sys.lattice_vector(v), "+" + lattice_label(v));
    all.insert(all.end(), moved.curves().begin(), moved.curves().end());
    const Diagram d = project(CurveCollection(std::move(all)), xi, tol);
    std::set<int> group_b;
    for (int i = 0; i < int(base.size()); ++i) group_b.insert(int(base.size()) + i);
    total += inter_linking(d, group_a, group_b);
  }
  return total;
}

}  // namespace pjones
