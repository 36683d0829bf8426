#include "pjones/diagram.hpp"

#include <algorithm>
#include <map>

#include "pjones/error.hpp"

namespace pjones {

namespace {

Role entry_role(const Passage& p) {
  if (p.over) return p.forward ? Role::over_in : Role::over_out;
  return p.forward ? Role::under_in : Role::under_out;
}

Role exit_role(const Passage& p) {
  if (p.over) return p.forward ? Role::over_out : Role::over_in;
  return p.forward ? Role::under_out : Role::under_in;
}

struct Attach {
  enum Kind { role, endpoint } kind = role;
  Role r = Role::over_in;
  Endpoint ep;
};

struct Piece {
  Attach start;
  std::vector<Passage> body;
  Attach end;
};

void reverse_piece(Piece& p) {
  std::reverse(p.body.begin(), p.body.end());
  for (auto& q : p.body) q.forward = !q.forward;
  std::swap(p.start, p.end);
}

nlohmann::json endpoint_json(const Endpoint& e) {
  return {e.component, e.head ? "head" : "tail"};
}

Endpoint endpoint_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw SchemaError("diagram: bad endpoint");
  const auto side = j[1].get<std::string>();
  if (side != "head" && side != "tail") throw SchemaError("diagram: bad endpoint side");
  return Endpoint{j[0].get<int>(), side == "head"};
}

}  // namespace

Diagram::Diagram(std::vector<std::string> component_ids, std::vector<Strand> strands,
                 std::vector<Crossing> crossings)
    : component_ids_(std::move(component_ids)),
      strands_(std::move(strands)),
      crossings_(std::move(crossings)) {
  validate();
}

bool Diagram::has_crossing(int id) const {
  return std::any_of(crossings_.begin(), crossings_.end(),
                     [&](const Crossing& c) { return c.id == id; });
}

const Crossing& Diagram::crossing(int id) const {
  for (const auto& c : crossings_) {
    if (c.id == id) return c;
  }
  throw Error("unknown crossing id " + std::to_string(id));
}

void Diagram::validate() const {
  std::map<int, std::pair<int, int>> seen;  // id -> (over count, under count)
  const int n_comp = static_cast<int>(component_ids_.size());
  for (const auto& s : strands_) {
    for (const auto& p : s.passages) {
      auto& cnt = seen[p.crossing];
      (p.over ? cnt.first : cnt.second)++;
      if (p.component < 0 || p.component >= n_comp) {
        throw Error("diagram: passage component out of range");
      }
    }
    if (s.ends) {
      for (const Endpoint& e : {s.ends->first, s.ends->second}) {
        if (e.component < 0 || e.component >= n_comp) {
          throw Error("diagram: endpoint component out of range");
        }
      }
    }
  }
  std::set<int> ids;
  for (const auto& c : crossings_) {
    if (c.sign != 1 && c.sign != -1) throw Error("diagram: crossing sign must be +-1");
    if (!ids.insert(c.id).second) throw Error("diagram: duplicate crossing id");
    auto it = seen.find(c.id);
    if (it == seen.end() || it->second != std::make_pair(1, 1)) {
      throw Error("diagram: crossing " + std::to_string(c.id) +
                  " must have one over and one under passage");
    }
  }
  if (seen.size() != ids.size()) throw Error("diagram: passage through unknown crossing");
}

int writhe(const Diagram& d) {
  int w = 0;
  for (const auto& c : d.crossings()) w += c.sign;
  return w;
}

HalfInteger inter_linking(const Diagram& d, const std::set<int>& group_a,
                          const std::set<int>& group_b) {
  for (int c : group_a) {
    if (group_b.count(c)) throw Error("inter_linking: groups overlap");
  }
  std::map<int, std::vector<int>> comps;
  for (const auto& s : d.strands()) {
    for (const auto& p : s.passages) comps[p.crossing].push_back(p.component);
  }
  int twice = 0;
  for (const auto& c : d.crossings()) {
    const auto& v = comps.at(c.id);
    const bool ab = group_a.count(v[0]) && group_b.count(v[1]);
    const bool ba = group_b.count(v[0]) && group_a.count(v[1]);
    if (ab || ba) twice += c.sign;
  }
  return HalfInteger::from_twice(twice);
}

RolePairing oriented_pairing() {
  return {{{Role::over_in, Role::under_out}, {Role::over_out, Role::under_in}}};
}

RolePairing smoothing_pairing(int sign, SmoothingKind kind) {
  static const RolePairing unoriented = {
      {{Role::over_in, Role::under_in}, {Role::over_out, Role::under_out}}};
  // The A-smoothing of a positive crossing follows the orientation.
  const bool use_oriented = (sign > 0) == (kind == SmoothingKind::A);
  return use_oriented ? oriented_pairing() : unoriented;
}

Diagram smooth_with_pairing(const Diagram& d, int crossing_id, const RolePairing& pairing,
                            int weight_delta) {
  if (!d.has_crossing(crossing_id)) {
    throw Error("unknown crossing id " + std::to_string(crossing_id));
  }
  Diagram out;
  out.component_ids_ = d.component_ids_;
  out.weight_ = d.weight_ + weight_delta;
  for (const auto& c : d.crossings_) {
    if (c.id != crossing_id) out.crossings_.push_back(c);
  }

  std::vector<Piece> pieces;
  for (const auto& s : d.strands_) {
    std::vector<std::size_t> hits;
    for (std::size_t i = 0; i < s.passages.size(); ++i) {
      if (s.passages[i].crossing == crossing_id) hits.push_back(i);
    }
    if (hits.empty()) {
      out.strands_.push_back(s);
      continue;
    }
    const auto& ps = s.passages;
    if (s.ends) {
      Piece first;
      first.start = {Attach::endpoint, Role::over_in, s.ends->first};
      first.body.assign(ps.begin(), ps.begin() + hits.front());
      first.end = {Attach::role, entry_role(ps[hits.front()]), {}};
      pieces.push_back(std::move(first));
      for (std::size_t h = 0; h + 1 < hits.size(); ++h) {
        Piece mid;
        mid.start = {Attach::role, exit_role(ps[hits[h]]), {}};
        mid.body.assign(ps.begin() + hits[h] + 1, ps.begin() + hits[h + 1]);
        mid.end = {Attach::role, entry_role(ps[hits[h + 1]]), {}};
        pieces.push_back(std::move(mid));
      }
      Piece last;
      last.start = {Attach::role, exit_role(ps[hits.back()]), {}};
      last.body.assign(ps.begin() + hits.back() + 1, ps.end());
      last.end = {Attach::endpoint, Role::over_in, s.ends->second};
      pieces.push_back(std::move(last));
    } else {
      const std::size_t n = ps.size();
      for (std::size_t h = 0; h < hits.size(); ++h) {
        const std::size_t from = hits[h];
        const std::size_t to = hits[(h + 1) % hits.size()];
        Piece p;
        p.start = {Attach::role, exit_role(ps[from]), {}};
        for (std::size_t i = (from + 1) % n; i != to; i = (i + 1) % n) {
          p.body.push_back(ps[i]);
        }
        p.end = {Attach::role, entry_role(ps[to]), {}};
        pieces.push_back(std::move(p));
      }
    }
  }

  Role partner[4];
  for (const auto& [a, b] : pairing) {
    partner[static_cast<int>(a)] = b;
    partner[static_cast<int>(b)] = a;
  }
  // role -> (piece index, attached at the piece start)
  std::pair<int, bool> where[4] = {{-1, false}, {-1, false}, {-1, false}, {-1, false}};
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (pieces[i].start.kind == Attach::role) where[static_cast<int>(pieces[i].start.r)] = {int(i), true};
    if (pieces[i].end.kind == Attach::role) where[static_cast<int>(pieces[i].end.r)] = {int(i), false};
  }

  std::vector<bool> used(pieces.size(), false);
  auto take = [&](int idx, bool from_start) {
    used[idx] = true;
    Piece p = pieces[idx];
    if (!from_start) reverse_piece(p);
    return p;
  };
  auto follow = [&](Piece cur, Strand& strand) {
    // Appends pieces until an endpoint is reached or the loop closes.
    const Attach origin = cur.start;
    while (true) {
      strand.passages.insert(strand.passages.end(), cur.body.begin(), cur.body.end());
      if (cur.end.kind == Attach::endpoint) return cur.end;
      const Role next = partner[static_cast<int>(cur.end.r)];
      if (origin.kind == Attach::role && origin.r == next) return cur.end;
      const auto [idx, at_start] = where[static_cast<int>(next)];
      cur = take(idx, at_start);
    }
  };

  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (used[i]) continue;
    const bool start_ep = pieces[i].start.kind == Attach::endpoint;
    const bool end_ep = pieces[i].end.kind == Attach::endpoint;
    if (!start_ep && !end_ep) continue;
    Piece cur = take(int(i), start_ep);
    Strand strand;
    const Endpoint first = cur.start.ep;
    const Attach last = follow(std::move(cur), strand);
    strand.ends = std::make_pair(first, last.ep);
    out.strands_.push_back(std::move(strand));
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (used[i]) continue;
    Strand strand;
    follow(take(int(i), true), strand);
    out.strands_.push_back(std::move(strand));
  }
  return out;
}

Diagram smooth(const Diagram& d, int crossing_id, SmoothingKind kind) {
  const int sign = d.crossing(crossing_id).sign;
  return smooth_with_pairing(d, crossing_id, smoothing_pairing(sign, kind),
                             kind == SmoothingKind::A ? 1 : -1);
}

Diagram oriented_smooth(const Diagram& d, int crossing_id) {
  const int sign = d.crossing(crossing_id).sign;
  return smooth_with_pairing(d, crossing_id, oriented_pairing(), sign);
}

SmoothingState terminal_state(const Diagram& d) {
  if (d.crossing_count() != 0) throw Error("terminal_state: diagram still has crossings");
  SmoothingState st;
  st.weight = LaurentPoly::monomial(d.weight());
  // Endpoint graph: open strands plus one virtual closure per open component.
  std::map<std::pair<int, bool>, std::vector<std::pair<int, bool>>> adj;
  auto key = [](const Endpoint& e) { return std::make_pair(e.component, e.head); };
  for (const auto& s : d.strands()) {
    if (s.closed()) {
      ++st.loops;
      continue;
    }
    st.segments.push_back(*s.ends);
    adj[key(s.ends->first)].push_back(key(s.ends->second));
    adj[key(s.ends->second)].push_back(key(s.ends->first));
  }
  std::set<int> open_components;
  for (const auto& [k, v] : adj) open_components.insert(k.first);
  for (int c : open_components) {
    adj[{c, true}].push_back({c, false});
    adj[{c, false}].push_back({c, true});
  }
  std::set<std::pair<int, bool>> seen;
  for (const auto& [k, v] : adj) {
    if (v.size() != 2) throw Error("terminal_state: malformed endpoint structure");
    if (seen.count(k)) continue;
    ++st.segment_cycles;
    std::vector<std::pair<int, bool>> stack{k};
    while (!stack.empty()) {
      auto cur = stack.back();
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      for (const auto& nb : adj.at(cur)) stack.push_back(nb);
    }
  }
  return st;
}

LaurentPoly terminal_value(const SmoothingState& s) {
  const int total = s.loops + s.segment_cycles;
  if (total == 0) return s.weight;
  return s.weight * d_power(static_cast<unsigned>(total - 1));
}

Diagram canonicalize(const Diagram& d) {
  std::map<int, int> relabel;
  for (const auto& s : d.strands()) {
    for (const auto& p : s.passages) relabel.emplace(p.crossing, int(relabel.size()));
  }
  std::vector<Strand> strands = d.strands();
  for (auto& s : strands) {
    for (auto& p : s.passages) p.crossing = relabel.at(p.crossing);
  }
  std::vector<Crossing> crossings;
  for (const auto& c : d.crossings()) crossings.push_back({relabel.at(c.id), c.sign});
  std::sort(crossings.begin(), crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.id < b.id; });
  return Diagram(d.component_ids(), std::move(strands), std::move(crossings))
      .with_weight(d.weight());
}

std::string canonical_key(const Diagram& d) {
  std::map<int, int> relabel;
  std::string key;
  key.reserve(16 * d.crossing_count() + 8 * d.strands().size());
  std::map<int, int> sign;
  for (const auto& c : d.crossings()) sign[c.id] = c.sign;
  for (const auto& s : d.strands()) {
    if (s.ends) {
      key += 'o';
      key += std::to_string(s.ends->first.component) + (s.ends->first.head ? 'h' : 't');
      key += std::to_string(s.ends->second.component) + (s.ends->second.head ? 'h' : 't');
    } else {
      key += 'c';
    }
    for (const auto& p : s.passages) {
      auto [it, fresh] = relabel.emplace(p.crossing, int(relabel.size()));
      key += std::to_string(it->second);
      key += p.over ? 'O' : 'U';
      key += p.forward ? '>' : '<';
      if (fresh) key += sign.at(p.crossing) > 0 ? '+' : '-';
      key += std::to_string(p.component);
      key += ',';
    }
    key += ';';
  }
  key += "w" + std::to_string(d.weight()) + "n" + std::to_string(d.component_ids().size());
  return key;
}

Diagram mirror(const Diagram& d) {
  std::vector<Strand> strands = d.strands();
  for (auto& s : strands) {
    for (auto& p : s.passages) p.over = !p.over;
  }
  std::vector<Crossing> crossings = d.crossings();
  for (auto& c : crossings) c.sign = -c.sign;
  return Diagram(d.component_ids(), std::move(strands), std::move(crossings))
      .with_weight(-d.weight());
}

nlohmann::json to_json(const Diagram& d) {
  nlohmann::json strands = nlohmann::json::array();
  for (const auto& s : d.strands()) {
    nlohmann::json passages = nlohmann::json::array();
    for (const auto& p : s.passages) {
      passages.push_back({p.crossing, p.over ? "over" : "under", p.forward, p.component});
    }
    nlohmann::json js = {{"closed", s.closed()}, {"passages", passages}};
    if (s.ends) js["ends"] = {endpoint_json(s.ends->first), endpoint_json(s.ends->second)};
    strands.push_back(std::move(js));
  }
  nlohmann::json crossings = nlohmann::json::array();
  for (const auto& c : d.crossings()) crossings.push_back({{"id", c.id}, {"sign", c.sign}});
  return {{"components", d.component_ids()},
          {"crossings", crossings},
          {"strands", strands},
          {"weight", d.weight()}};
}

Diagram diagram_from_json(const nlohmann::json& j) {
  try {
    std::vector<Strand> strands;
    for (const auto& js : j.at("strands")) {
      Strand s;
      for (const auto& p : js.at("passages")) {
        s.passages.push_back({p.at(0).get<int>(), p.at(1).get<std::string>() == "over",
                              p.at(2).get<bool>(), p.at(3).get<int>()});
      }
      if (!js.at("closed").get<bool>()) {
        const auto& e = js.at("ends");
        s.ends = std::make_pair(endpoint_from_json(e.at(0)), endpoint_from_json(e.at(1)));
      }
      strands.push_back(std::move(s));
    }
    std::vector<Crossing> crossings;
    for (const auto& c : j.at("crossings")) {
      crossings.push_back({c.at("id").get<int>(), c.at("sign").get<int>()});
    }
    return Diagram(j.at("components").get<std::vector<std::string>>(), std::move(strands),
                   std::move(crossings))
        .with_weight(j.value("weight", 0));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("diagram: ") + e.what());
  }
}

}  // namespace pjones
