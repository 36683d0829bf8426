#include "pjones/bracket.hpp"

#include <boost/container_hash/hash.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "pjones/error.hpp"

namespace pjones {

namespace {

// Dense integer polynomial in A with overflow-checked arithmetic.
struct DensePoly {
  int lo = 0;
  std::vector<std::int64_t> c;

  bool empty() const { return c.empty(); }

  void add(const DensePoly& o) {
    if (o.c.empty()) return;
    if (c.empty()) {
      *this = o;
      return;
    }
    const int new_lo = std::min(lo, o.lo);
    const int new_hi = std::max(lo + int(c.size()), o.lo + int(o.c.size()));
    if (new_lo != lo || new_hi != lo + int(c.size())) {
      std::vector<std::int64_t> grown(new_hi - new_lo, 0);
      std::copy(c.begin(), c.end(), grown.begin() + (lo - new_lo));
      c.swap(grown);
      lo = new_lo;
    }
    for (std::size_t i = 0; i < o.c.size(); ++i) {
      auto& dst = c[o.lo - lo + i];
      if (__builtin_add_overflow(dst, o.c[i], &dst)) throw Error("bracket: coefficient overflow");
    }
  }

  // Multiplies by d = -A^2 - A^-2.
  void times_d() {
    std::vector<std::int64_t> out(c.size() + 4, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (__builtin_sub_overflow(out[i], c[i], &out[i]) ||
          __builtin_sub_overflow(out[i + 4], c[i], &out[i + 4])) {
        throw Error("bracket: coefficient overflow");
      }
    }
    c.swap(out);
    lo -= 2;
  }

  void shift(int k) { lo += k; }

  // Exact division by d; throws if d does not divide.
  void divide_by_d() {
    // P = -A^-2 (1 + A^4) Q  =>  Q = -A^2 P / (1 + A^4)
    std::vector<std::int64_t> q(c.size(), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::int64_t v = c[i];
      if (i >= 4 && __builtin_sub_overflow(v, q[i - 4], &v)) {
        throw Error("bracket: coefficient overflow");
      }
      q[i] = v;
    }
    const std::size_t n = c.size();
    for (std::size_t i = n >= 4 ? n - 4 : 0; i < n; ++i) {
      if (q[i] != 0) throw Error("bracket: internal error, state sum not divisible by d");
    }
    q.resize(n >= 4 ? n - 4 : 0);
    for (auto& v : q) v = -v;
    c.swap(q);
    lo += 2;
  }

  LaurentPoly to_laurent(int extra_shift) const {
    std::map<int, Rational> m;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (c[i] != 0) m[lo + int(i) + extra_shift] = Rational(c[i]);
    }
    return LaurentPoly::from_exact(m);
  }
};

constexpr int kNoSlot = -1;

// Slots are crossing*4 + role. partner[s] is the slot reached from s along
// the diagram, passing through virtual closures of open components.
struct SlotGraph {
  int crossings = 0;
  std::vector<int> partner;
  int free_loops = 0;
};

SlotGraph build_slot_graph(const Diagram& d) {
  SlotGraph g;
  g.crossings = int(d.crossing_count());
  std::map<int, int> index;
  for (const auto& c : d.crossings()) index.emplace(c.id, int(index.size()));
  const int n_slots = 4 * g.crossings;

  auto entry = [&](const Passage& p) {
    const int r = p.over ? (p.forward ? 0 : 1) : (p.forward ? 2 : 3);
    return index.at(p.crossing) * 4 + r;
  };
  auto exit = [&](const Passage& p) {
    const int r = p.over ? (p.forward ? 1 : 0) : (p.forward ? 3 : 2);
    return index.at(p.crossing) * 4 + r;
  };

  // Nodes: slots then endpoints. arc[] is the neighbor along a strand.
  std::map<std::pair<int, bool>, int> ep_node;
  auto endpoint_node = [&](const Endpoint& e) {
    auto [it, fresh] = ep_node.emplace(std::make_pair(e.component, e.head), 0);
    if (fresh) it->second = n_slots + int(ep_node.size()) - 1;
    return it->second;
  };
  std::vector<int> arc(n_slots, kNoSlot);
  auto link = [&](int a, int b) {
    const int hi = std::max(a, b);
    if (int(arc.size()) <= hi) arc.resize(hi + 1, kNoSlot);
    if (arc[a] != kNoSlot || arc[b] != kNoSlot) throw Error("bracket: malformed diagram");
    arc[a] = b;
    arc[b] = a;
  };

  for (const auto& s : d.strands()) {
    const auto& ps = s.passages;
    if (s.closed()) {
      if (ps.empty()) {
        ++g.free_loops;
        continue;
      }
      for (std::size_t i = 0; i < ps.size(); ++i) link(exit(ps[i]), entry(ps[(i + 1) % ps.size()]));
      continue;
    }
    const int a = endpoint_node(s.ends->first);
    const int b = endpoint_node(s.ends->second);
    if (ps.empty()) {
      link(a, b);
      continue;
    }
    link(a, entry(ps.front()));
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) link(exit(ps[i]), entry(ps[i + 1]));
    link(exit(ps.back()), b);
  }
  const int n_nodes = n_slots + int(ep_node.size());
  arc.resize(n_nodes, kNoSlot);
  std::vector<int> closure(n_nodes, kNoSlot);
  for (const auto& [key, node] : ep_node) {
    auto other = ep_node.find({key.first, !key.second});
    if (other == ep_node.end()) throw Error("bracket: open component with a single endpoint");
    closure[node] = other->second;
  }
  for (int v = 0; v < n_nodes; ++v) {
    if (arc[v] == kNoSlot) throw Error("bracket: dangling half-edge in diagram");
  }

  g.partner.assign(n_slots, kNoSlot);
  std::vector<bool> ep_seen(n_nodes, false);
  for (int s = 0; s < n_slots; ++s) {
    int x = arc[s];
    while (x >= n_slots) {
      ep_seen[x] = true;
      const int y = closure[x];
      ep_seen[y] = true;
      x = arc[y];
    }
    g.partner[s] = x;
  }
  // Cycles made only of open strands without crossings and their closures.
  for (int v = n_slots; v < n_nodes; ++v) {
    if (ep_seen[v]) continue;
    ++g.free_loops;
    int x = v;
    do {
      ep_seen[x] = true;
      const int y = arc[x];
      ep_seen[y] = true;
      x = closure[y];
    } while (x != v);
  }
  return g;
}

// Role pairing of smoothing kind (0 = A, 1 = B) for a crossing sign.
std::array<std::array<int, 4>, 2> local_pairings(int sign) {
  // mate of each role: oriented {0,3},{1,2}; unoriented {0,2},{1,3}
  const std::array<int, 4> oriented = {3, 2, 1, 0};
  const std::array<int, 4> unoriented = {2, 3, 0, 1};
  if (sign > 0) return {oriented, unoriented};
  return {unoriented, oriented};
}

LaurentPoly finish(DensePoly p, int free_loops, int weight) {
  if (free_loops > 0) {
    for (int i = 1; i < free_loops; ++i) p.times_d();
  } else {
    p.divide_by_d();
  }
  return p.to_laurent(weight);
}

BracketResult enumerate_states(const Diagram& d, const SlotGraph& g) {
  const int k = g.crossings;
  std::vector<int> signs;
  for (const auto& c : d.crossings()) signs.push_back(c.sign);
  const int n = 4 * k;
  // counts[(a_count) * (k+2) + loops]
  std::vector<std::int64_t> counts((k + 1) * (2 * k + 2), 0);
  std::vector<int> mate(n);
  std::vector<bool> seen(n);
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << k); ++mask) {
    for (int c = 0; c < k; ++c) {
      const int kind = (mask >> c) & 1u ? 1 : 0;
      const auto pr = local_pairings(signs[c])[kind];
      for (int r = 0; r < 4; ++r) mate[4 * c + r] = 4 * c + pr[r];
    }
    std::fill(seen.begin(), seen.end(), false);
    int loops = 0;
    for (int s = 0; s < n; ++s) {
      if (seen[s]) continue;
      ++loops;
      int x = s;
      while (!seen[x]) {
        seen[x] = true;
        const int y = g.partner[x];
        seen[y] = true;
        x = mate[y];
      }
    }
    const int a_count = k - __builtin_popcountll(mask);
    counts[a_count * (2 * k + 2) + loops]++;
  }
  DensePoly total;
  for (int a = 0; a <= k; ++a) {
    for (int l = 0; l < 2 * k + 2; ++l) {
      const auto cnt = counts[a * (2 * k + 2) + l];
      if (!cnt) continue;
      DensePoly term;
      term.lo = 2 * a - k;
      term.c = {cnt};
      for (int i = 0; i < l; ++i) term.times_d();
      total.add(term);
    }
  }
  BracketResult res;
  res.bracket = finish(total, g.free_loops, d.weight());
  res.states_expanded = std::int64_t(1) << k;
  return res;
}

std::vector<int> crossing_order(const SlotGraph& g) {
  const int k = g.crossings;
  std::vector<bool> done(k, false);
  std::vector<int> order;
  order.reserve(k);
  for (int step = 0; step < k; ++step) {
    int best = -1, best_open = -1, best_new = 0;
    for (int c = 0; c < k; ++c) {
      if (done[c]) continue;
      int open = 0, fresh = 0;
      for (int r = 0; r < 4; ++r) {
        const int p = g.partner[4 * c + r] / 4;
        if (p != c && done[p]) ++open;
        if (p != c && !done[p]) ++fresh;
      }
      if (open > best_open || (open == best_open && fresh < best_new)) {
        best = c;
        best_open = open;
        best_new = fresh;
      }
    }
    done[best] = true;
    order.push_back(best);
  }
  return order;
}

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint16_t>& v) const {
    return boost::hash_range(v.begin(), v.end());
  }
};

BracketResult frontier_sum(const Diagram& d, const SlotGraph& g) {
  const int k = g.crossings;
  std::vector<int> signs;
  for (const auto& c : d.crossings()) signs.push_back(c.sign);
  const std::vector<int> order = crossing_order(g);

  std::vector<bool> processed(k, false);
  std::vector<int> frontier;  // sorted open slots
  using StateMap = std::unordered_map<std::vector<std::uint16_t>, DensePoly, KeyHash>;
  StateMap states;
  DensePoly one;
  one.c = {1};
  states.emplace(std::vector<std::uint16_t>{}, one);

  BracketResult res;
  res.states_expanded = 1;
  std::vector<int> pos(4 * k, -1);

  for (int c : order) {
    // Next frontier: old slots not attached to c, plus new slots leading outwards.
    std::vector<int> next;
    for (int s : frontier) {
      if (g.partner[s] / 4 != c) next.push_back(s);
    }
    for (int r = 0; r < 4; ++r) {
      const int p = g.partner[4 * c + r] / 4;
      if (p != c && !processed[p]) next.push_back(4 * c + r);
    }
    std::sort(next.begin(), next.end());
    std::vector<int> next_pos(4 * k, -1);
    for (std::size_t i = 0; i < next.size(); ++i) next_pos[next[i]] = int(i);
    for (std::size_t i = 0; i < frontier.size(); ++i) pos[frontier[i]] = int(i);

    const int n_old = int(frontier.size());
    const int n_local = n_old + 4;
    // local node: old frontier index, or n_old + role
    auto local_of = [&](int slot) {
      if (slot / 4 == c) return n_old + slot % 4;
      return pos[slot];
    };
    // Fixed edges independent of the state: diagram edges touching c.
    std::vector<std::pair<int, int>> fixed;
    for (int r = 0; r < 4; ++r) {
      const int s = 4 * c + r;
      const int p = g.partner[s];
      if (p / 4 == c) {
        if (p > s) fixed.emplace_back(n_old + r, n_old + p % 4);
      } else if (processed[p / 4]) {
        fixed.emplace_back(n_old + r, local_of(p));
      }
    }

    StateMap out;
    std::int64_t live = 0;
    std::vector<std::array<int, 2>> nb(n_local);
    std::vector<int> deg(n_local);
    std::vector<bool> seen(n_local);
    std::vector<std::uint16_t> key(next.size());

    for (const auto& [mates, poly] : states) {
      for (int kind = 0; kind < 2; ++kind) {
        std::fill(deg.begin(), deg.end(), 0);
        auto add_edge = [&](int a, int b) {
          nb[a][deg[a]++] = b;
          nb[b][deg[b]++] = a;
        };
        for (int i = 0; i < n_old; ++i) {
          if (mates[i] > i) add_edge(i, mates[i]);
        }
        const auto pr = local_pairings(signs[c])[kind];
        for (int r = 0; r < 4; ++r) {
          if (pr[r] > r) add_edge(n_old + r, n_old + pr[r]);
        }
        for (const auto& [a, b] : fixed) add_edge(a, b);

        std::fill(seen.begin(), seen.end(), false);
        auto slot_of = [&](int local) {
          return local >= n_old ? 4 * c + (local - n_old) : frontier[local];
        };
        for (std::size_t i = 0; i < next.size(); ++i) {
          const int start = local_of(next[i]);
          if (seen[start]) continue;
          int prev = -1, cur = start;
          seen[cur] = true;
          do {
            const int nxt = (deg[cur] == 1 || nb[cur][0] != prev) ? nb[cur][0] : nb[cur][1];
            prev = cur;
            cur = nxt;
            seen[cur] = true;
          } while (deg[cur] == 2);
          const int a = int(i);
          const int b = next_pos[slot_of(cur)];
          key[a] = std::uint16_t(b);
          key[b] = std::uint16_t(a);
        }
        int loops = 0;
        for (int v = 0; v < n_local; ++v) {
          if (seen[v] || deg[v] == 0) continue;
          ++loops;
          int prev = -1, cur = v;
          while (!seen[cur]) {
            seen[cur] = true;
            const int nxt = nb[cur][0] != prev ? nb[cur][0] : nb[cur][1];
            prev = cur;
            cur = nxt;
          }
        }
        DensePoly term = poly;
        term.shift(kind == 0 ? 1 : -1);
        for (int l = 0; l < loops; ++l) term.times_d();
        auto [it, fresh] = out.try_emplace(key);
        if (fresh) {
          it->second = std::move(term);
          ++live;
        } else {
          it->second.add(term);
          ++res.cache_hits;
        }
      }
    }
    states.swap(out);
    res.states_expanded = std::max(res.states_expanded, live);
    processed[c] = true;
    frontier.swap(next);
  }
  DensePoly total = states.empty() ? DensePoly{} : states.begin()->second;
  res.bracket = finish(total, g.free_loops, d.weight());
  return res;
}

}  // namespace

BracketResult bracket(const Diagram& d, const BracketOptions& opt) {
  const int k = int(d.crossing_count());
  if (k > opt.crossing_cap) throw StateSumTooLarge(k, opt.crossing_cap);
  const SlotGraph g = build_slot_graph(d);
  if (k == 0) {
    BracketResult res;
    res.bracket = g.free_loops == 0
                      ? LaurentPoly::monomial(d.weight())
                      : d_power(unsigned(g.free_loops - 1)).shifted(d.weight());
    res.states_expanded = 1;
    return res;
  }
  return opt.memoize ? frontier_sum(d, g) : enumerate_states(d, g);
}

LaurentPoly jones_of_diagram(const Diagram& d, const BracketOptions& opt) {
  const int w = writhe(d);
  LaurentPoly b = bracket(d, opt).bracket;
  // (-A^3)^(-w) = (-1)^w A^(-3w)
  b = b.shifted(-3 * w);
  return (w % 2 == 0) ? b : -b;
}

}  // namespace pjones
