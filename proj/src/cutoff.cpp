#include "pjones/cutoff.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "pjones/error.hpp"

namespace pjones {

namespace {

LaurentPoly signed_monomial(int sign_exponent, int a_exponent) {
  return LaurentPoly::monomial(a_exponent, sign_exponent % 2 == 0 ? 1 : -1);
}

// (-A^3)^(-w) x
LaurentPoly normalize_writhe(const LaurentPoly& x, int w) {
  return x * signed_monomial(w, -3 * w);
}

}  // namespace

CurveCollection CutoffLink::curves() const {
  std::vector<Curve> cs;
  for (const auto& copy : copies) {
    for (const auto& c : copy) cs.push_back(c.curve);
  }
  return CurveCollection(std::move(cs));
}

std::vector<int> CutoffLink::copy_of_components() const {
  std::vector<int> out;
  for (std::size_t j = 0; j < copies.size(); ++j) out.insert(out.end(), copies[j].size(), int(j));
  return out;
}

CutoffLink build_cutoff(const PBCSystem& sys, int N, const PbcOptions& opt) {
  if (N < 1) throw Error("cutoff: N must be positive");
  if (sys.chains().size() != 1) throw Error("cutoff: requires exactly one generating chain");
  if (sys.chains()[0].topology != ChainTopology::closed) {
    throw Error("cutoff: requires a closed chain (open and infinite chains are not supported)");
  }
  if (sys.periodic_axis_count() != 1) throw Error("cutoff: requires exactly one periodic axis");

  CutoffLink cut;
  cut.N = N;
  cut.axis = int(std::find(sys.cell().periodic.begin(), sys.cell().periodic.end(), true) -
                 sys.cell().periodic.begin());
  const int a = cut.axis;
  cut.base = minimal_periodic_link(sys, opt);
  const int m = cut.base.mu.dims[a];
  const int stride = 2 * m - 1;
  cut.expected_cells = (2 * N - 1) * m - (N - 1);

  std::set<std::pair<int, Lattice>> copy_keys;
  for (int j = 0; j < N; ++j) {
    std::vector<MplComponent> copy;
    for (const auto& c : cut.base.components) {
      MplComponent t = c;
      t.translate[a] += j * stride;
      Lattice shift{0, 0, 0};
      shift[a] = j * stride;
      const Vec3 v = sys.lattice_vector(shift);
      for (auto& p : t.curve.vertices) p += v;
      t.curve.id = sys.chains()[0].id + "[" + std::to_string(t.translate[0]) + "," +
                   std::to_string(t.translate[1]) + "," + std::to_string(t.translate[2]) + "]";
      if (!copy_keys.insert(t.key()).second) {
        throw Error("cutoff: internal consistency error, copies share a component");
      }
      copy.push_back(std::move(t));
    }
    cut.copies.push_back(std::move(copy));
  }

  // Every image meeting the region must belong to one of the copies.
  const int first = cut.base.mu.anchor[a];
  const int last = first + (N - 1) * stride + m;  // exclusive
  cut.cells = last - first;
  const Image img = unfold_image(sys, 0, std::nullopt, opt.match_tol);
  const Unfolding u = minimal_unfolding(sys, img);
  Vec3 lo = Vec3::Zero(), hi = Vec3::Zero();
  lo[a] = first;
  hi[a] = last;
  for (int t = first - u.min_cell[a] - u.dims[a] - 1; t <= last - u.min_cell[a] + 1; ++t) {
    Lattice tr{0, 0, 0};
    tr[a] = t;
    std::vector<Vec3> pts = img.polyline;
    for (auto& p : pts) p += sys.lattice_vector(tr);
    if (!polyline_meets_open_box(sys, pts, img.closed, lo, hi)) continue;
    MplComponent c;
    c.chain = 0;
    c.translate = tr;
    c.curve = Curve{"", img.closed, pts};
    if (!copy_keys.count(c.key())) {
      throw Error("cutoff: internal consistency error, image " + std::to_string(t) +
                  " meets the region but belongs to no copy");
    }
    cut.all_images.push_back(std::move(c));
  }
  if (cut.all_images.size() != copy_keys.size()) {
    throw Error("cutoff: internal consistency error, a copy component misses the region");
  }
  return cut;
}

Theorem1Report verify_theorem1(const PBCSystem& sys, int N, const Vec3& xi,
                               const VerifyOptions& opt) {
  const CutoffLink cut = build_cutoff(sys, N);
  Theorem1Report r;
  r.N = N;
  r.cells = cut.cells;
  r.expected_cells = cut.expected_cells;

  const CurveCollection all = cut.curves();
  const Diagram d = project(all, xi, opt.tol);
  const CurveCollection base_curves = cut.base.curves();
  const Diagram d_base = project(base_curves, xi, opt.tol);
  const std::vector<int> copy_of = cut.copy_of_components();

  r.lhs = jones_of_diagram(d, opt.bracket);
  r.v_p = jones_of_diagram(d_base, opt.bracket);
  r.slk = slk_p(sys, cut.base, xi, opt.tol);

  const HalfInteger m2 = HalfInteger::from_twice((N - 1) * r.slk.twice);
  if (!m2.is_integer()) throw Error("cutoff: (N-1) SLK_P is not an integer");
  const int m = m2.as_int();
  const unsigned n1 = unsigned(N - 1);
  const LaurentPoly power = d_power(n1) * r.v_p.pow(unsigned(N));
  r.state_term = signed_monomial(m, -m) * power;
  r.lambda_tilde = r.lhs - r.state_term;
  r.state_term_derived = signed_monomial(m, -2 * m) * power;
  r.lambda_tilde_derived = r.lhs - r.state_term_derived;

  // Crossing bookkeeping.
  std::map<int, std::vector<int>> comps;
  for (const auto& s : d.strands()) {
    for (const auto& p : s.passages) comps[p.crossing].push_back(p.component);
  }
  std::vector<int> shared;
  for (const auto& c : d.crossings()) {
    const auto& v = comps.at(c.id);
    if (copy_of[v[0]] != copy_of[v[1]]) shared.push_back(c.id);
  }
  r.shared_crossings = int(shared.size());
  r.self_crossings = int(d.crossing_count()) - r.shared_crossings;

  r.writhe_cutoff = writhe(d);
  r.writhe_copy = writhe(d_base);
  HalfInteger pairwise;
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      std::set<int> ga, gb;
      for (int k = 0; k < int(copy_of.size()); ++k) {
        if (copy_of[k] == i) ga.insert(k);
        if (copy_of[k] == j) gb.insert(k);
      }
      pairwise += inter_linking(d, ga, gb);
    }
  }
  r.pairwise_linking = pairwise;
  r.writhe_identity_ok = r.writhe_cutoff == N * r.writhe_copy + m;
  r.pairwise_tally_ok = 2 * pairwise.twice == 2 * m;

  // The state with every shared crossing smoothed along the orientation.
  Diagram s = d;
  for (int id : shared) s = oriented_smooth(s, id);
  r.oriented_state = bracket(s, opt.bracket).bracket;
  const LaurentPoly split = d_power(n1) * bracket(d_base, opt.bracket).bracket.pow(unsigned(N));
  r.state_oracle_ok = r.oriented_state == LaurentPoly::monomial(2 * m) * split;
  r.state_oracle_derived_ok = r.oriented_state == LaurentPoly::monomial(m) * split;

  if (opt.run_oracle && r.shared_crossings <= opt.oracle_cap) {
    r.oracle_run = true;
    std::vector<int> signs;
    for (int id : shared) signs.push_back(d.crossing(id).sign);
    LaurentPoly others;
    int disconnecting = 0;
    std::function<void(const Diagram&, std::size_t, bool)> expand =
        [&](const Diagram& cur, std::size_t j, bool all_oriented) {
          if (j == shared.size()) {
            const LaurentPoly b = bracket(cur, opt.bracket).bracket;
            if (bracket(cur.with_weight(0), opt.bracket).bracket == split) ++disconnecting;
            if (!all_oriented) others += b;
            return;
          }
          for (SmoothingKind kind : {SmoothingKind::A, SmoothingKind::B}) {
            const bool oriented = (kind == SmoothingKind::A) == (signs[j] > 0);
            expand(smooth(cur, shared[j], kind), j + 1, all_oriented && oriented);
          }
        };
    expand(d, 0, true);
    r.non_disconnecting_sum = normalize_writhe(others, r.writhe_cutoff);
    r.disconnecting_states = disconnecting;
    r.decomposition_ok = r.state_term + r.non_disconnecting_sum == r.lhs;
    r.decomposition_derived_ok = r.state_term_derived + r.non_disconnecting_sum == r.lhs;
  }
  return r;
}

nlohmann::json to_json(const Theorem1Report& r) {
  nlohmann::json j = {
      {"N", r.N},
      {"cells", r.cells},
      {"expected_cells", r.expected_cells},
      {"shared_crossings", r.shared_crossings},
      {"self_crossings", r.self_crossings},
      {"lhs", to_json(r.lhs)},
      {"lhs_text", r.lhs.to_string()},
      {"periodic_jones", to_json(r.v_p)},
      {"slk", r.slk.to_string()},
      {"state_term", to_json(r.state_term)},
      {"lambda_tilde", to_json(r.lambda_tilde)},
      {"state_term_derived", to_json(r.state_term_derived)},
      {"lambda_tilde_derived", to_json(r.lambda_tilde_derived)},
      {"writhe_cutoff", r.writhe_cutoff},
      {"writhe_copy", r.writhe_copy},
      {"pairwise_linking", r.pairwise_linking.to_string()},
      {"writhe_identity_ok", r.writhe_identity_ok},
      {"pairwise_tally_ok", r.pairwise_tally_ok},
      {"oriented_state", to_json(r.oriented_state)},
      {"state_oracle_ok", r.state_oracle_ok},
      {"state_oracle_derived_ok", r.state_oracle_derived_ok},
      {"oracle_run", r.oracle_run},
  };
  if (r.oracle_run) {
    j["non_disconnecting_sum"] = to_json(r.non_disconnecting_sum);
    j["decomposition_ok"] = r.decomposition_ok;
    j["decomposition_derived_ok"] = r.decomposition_derived_ok;
    j["disconnecting_states"] = r.disconnecting_states;
  }
  return j;
}

}  // namespace pjones
