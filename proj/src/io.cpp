#include "pjones/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pjones/error.hpp"

namespace pjones {

namespace {

using nlohmann::json;

const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

Vec3 vec3_at(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3 || !std::all_of(j.begin(), j.end(), [](const json& x) {
        return x.is_number();
      })) {
    throw SchemaError(where + ": expected [x, y, z]");
  }
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw SchemaError("trajectory line " + std::to_string(line) + ": " + msg);
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}
  bool next(std::string& s) {
    if (!std::getline(in_, s)) return false;
    ++line_;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return true;
  }
  std::string require(const std::string& what) {
    std::string s;
    if (!next(s)) parse_fail(line_, "unexpected end of file, expected " + what);
    return s;
  }
  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
};

template <class T>
T parse_number(const std::string& tok, int line, const std::string& what) {
  std::istringstream is(tok);
  T v{};
  is >> v;
  if (is.fail() || !is.eof()) parse_fail(line, "bad " + what + " '" + tok + "'");
  return v;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::vector<TrajectoryFrame> read_lammps(std::istream& in) {
  static const std::set<std::string> known{"id", "mol", "type", "x",  "y",  "z",  "xs",
                                           "ys", "zs",  "ix",   "iy", "iz", "element"};
  LineReader r(in);
  std::vector<TrajectoryFrame> frames;
  std::string s;
  while (r.next(s)) {
    if (tokens(s).empty()) continue;
    if (s.rfind("ITEM: TIMESTEP", 0) != 0) parse_fail(r.line(), "expected 'ITEM: TIMESTEP'");
    TrajectoryFrame f;
    f.timestep = parse_number<std::int64_t>(tokens(r.require("timestep")).at(0), r.line(),
                                            "timestep");
    if (r.require("ITEM: NUMBER OF ATOMS").rfind("ITEM: NUMBER OF ATOMS", 0) != 0) {
      parse_fail(r.line(), "expected 'ITEM: NUMBER OF ATOMS'");
    }
    const auto nt = tokens(r.require("atom count"));
    if (nt.empty()) parse_fail(r.line(), "missing atom count");
    const auto n = parse_number<std::int64_t>(nt[0], r.line(), "atom count");
    if (n < 0) parse_fail(r.line(), "negative atom count");
    if (r.require("ITEM: BOX BOUNDS").rfind("ITEM: BOX BOUNDS", 0) != 0) {
      parse_fail(r.line(), "expected 'ITEM: BOX BOUNDS'");
    }
    for (int a = 0; a < 3; ++a) {
      const auto bt = tokens(r.require("box bounds"));
      if (bt.size() < 2) parse_fail(r.line(), "box bounds need lo and hi");
      f.box[a] = {parse_number<double>(bt[0], r.line(), "box bound"),
                  parse_number<double>(bt[1], r.line(), "box bound")};
      if (!(f.box[a][1] > f.box[a][0])) parse_fail(r.line(), "empty box extent");
    }
    const std::string header = r.require("ITEM: ATOMS");
    if (header.rfind("ITEM: ATOMS", 0) != 0) parse_fail(r.line(), "expected 'ITEM: ATOMS'");
    auto cols = tokens(header.substr(11));
    std::map<std::string, int> at;
    for (int c = 0; c < int(cols.size()); ++c) {
      if (!known.count(cols[c])) parse_fail(r.line(), "unknown atom column '" + cols[c] + "'");
      at[cols[c]] = c;
    }
    if (!at.count("id")) parse_fail(r.line(), "missing atom id column");
    if (!at.count("mol")) parse_fail(r.line(), "missing molecule id column");
    const bool scaled = at.count("xs") && at.count("ys") && at.count("zs");
    const bool plain = at.count("x") && at.count("y") && at.count("z");
    if (!scaled && !plain) parse_fail(r.line(), "need x y z or xs ys zs columns");
    const std::array<std::string, 3> pc =
        plain ? std::array<std::string, 3>{"x", "y", "z"} : std::array<std::string, 3>{"xs", "ys", "zs"};
    std::set<std::int64_t> ids;
    for (std::int64_t i = 0; i < n; ++i) {
      const auto t = tokens(r.require("atom line"));
      if (t.size() != cols.size()) parse_fail(r.line(), "column count mismatch");
      Atom atom;
      atom.id = parse_number<std::int64_t>(t[at["id"]], r.line(), "atom id");
      atom.mol = parse_number<std::int64_t>(t[at["mol"]], r.line(), "molecule id");
      for (int a = 0; a < 3; ++a) {
        double v = parse_number<double>(t[at[pc[a]]], r.line(), "coordinate");
        if (!plain) v = f.box[a][0] + v * (f.box[a][1] - f.box[a][0]);
        atom.pos[a] = v;
      }
      if (!ids.insert(atom.id).second) parse_fail(r.line(), "duplicate atom id");
      f.atoms.push_back(atom);
    }
    frames.push_back(std::move(f));
  }
  if (frames.empty()) throw SchemaError("trajectory: no frames");
  return frames;
}

// Frame: atom count; a comment line "timestep=T box=xlo,xhi,ylo,yhi,zlo,zhi";
// then one "name x y z mol" line per atom, ids numbered from 1 in file order.
std::vector<TrajectoryFrame> read_xyz_mol(std::istream& in) {
  LineReader r(in);
  std::vector<TrajectoryFrame> frames;
  std::string s;
  while (r.next(s)) {
    const auto nt = tokens(s);
    if (nt.empty()) continue;
    const auto n = parse_number<std::int64_t>(nt[0], r.line(), "atom count");
    TrajectoryFrame f;
    bool have_box = false;
    for (const auto& kv : tokens(r.require("comment line"))) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "timestep") {
        f.timestep = parse_number<std::int64_t>(val, r.line(), "timestep");
      } else if (key == "box") {
        std::vector<double> b;
        std::istringstream is(val);
        std::string part;
        while (std::getline(is, part, ',')) b.push_back(parse_number<double>(part, r.line(), "box bound"));
        if (b.size() != 6) parse_fail(r.line(), "box needs 6 values");
        for (int a = 0; a < 3; ++a) {
          f.box[a] = {b[2 * a], b[2 * a + 1]};
          if (!(f.box[a][1] > f.box[a][0])) parse_fail(r.line(), "empty box extent");
        }
        have_box = true;
      }
    }
    if (!have_box) parse_fail(r.line(), "missing box=...");
    for (std::int64_t i = 0; i < n; ++i) {
      const auto t = tokens(r.require("atom line"));
      if (t.size() < 5) parse_fail(r.line(), "missing molecule id");
      Atom atom;
      atom.id = i + 1;
      for (int a = 0; a < 3; ++a) atom.pos[a] = parse_number<double>(t[1 + a], r.line(), "coordinate");
      atom.mol = parse_number<std::int64_t>(t[4], r.line(), "molecule id");
      f.atoms.push_back(atom);
    }
    frames.push_back(std::move(f));
  }
  if (frames.empty()) throw SchemaError("trajectory: no frames");
  return frames;
}

}  // namespace

PBCSystem system_from_json(const json& j) {
  const json& cj = field(j, "cell", "system");
  const json& bj = field(cj, "basis", "cell");
  if (!bj.is_array() || bj.size() != 3) throw SchemaError("cell.basis: expected 3 vectors");
  Cell cell;
  for (int a = 0; a < 3; ++a) cell.basis[a] = vec3_at(bj[a], "cell.basis[" + std::to_string(a) + "]");
  const json& pj = field(cj, "periodic", "cell");
  if (!pj.is_array() || pj.size() != 3 ||
      !std::all_of(pj.begin(), pj.end(), [](const json& x) { return x.is_boolean(); })) {
    throw SchemaError("cell.periodic: expected 3 booleans");
  }
  for (int a = 0; a < 3; ++a) cell.periodic[a] = pj[a].get<bool>();
  if (cj.contains("origin")) cell.origin = vec3_at(cj["origin"], "cell.origin");

  const json& chj = field(j, "chains", "system");
  if (!chj.is_array()) throw SchemaError("chains: expected an array");
  std::vector<GeneratingChain> chains;
  for (std::size_t i = 0; i < chj.size(); ++i) {
    const std::string where = "chains[" + std::to_string(i) + "]";
    const json& c = chj[i];
    GeneratingChain g;
    const json& id = field(c, "id", where);
    if (!id.is_string()) throw SchemaError(where + ".id: expected a string");
    g.id = id.get<std::string>();
    const json& top = field(c, "topology", where);
    if (!top.is_string()) throw SchemaError(where + ".topology: expected a string");
    try {
      g.topology = topology_from_string(top.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(where + ".topology: " + e.what());
    }
    if (c.contains("basepoint")) {
      const json& bp = c["basepoint"];
      if (!bp.is_array() || bp.size() != 2 || !bp[0].is_number_integer() ||
          !bp[1].is_number_integer()) {
        throw SchemaError(where + ".basepoint: expected [arc, vertex]");
      }
      g.basepoint = {bp[0].get<int>(), bp[1].get<int>()};
    }
    const json& arcs = field(c, "arcs", where);
    if (!arcs.is_array()) throw SchemaError(where + ".arcs: expected an array");
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      const std::string aw = where + ".arcs[" + std::to_string(k) + "]";
      if (!arcs[k].is_array()) throw SchemaError(aw + ": expected a point list");
      std::vector<Vec3> pts;
      for (std::size_t v = 0; v < arcs[k].size(); ++v) {
        pts.push_back(vec3_at(arcs[k][v], aw + "[" + std::to_string(v) + "]"));
      }
      g.arcs.push_back(std::move(pts));
    }
    chains.push_back(std::move(g));
  }
  return PBCSystem(cell, std::move(chains));
}

json to_json(const PBCSystem& sys) {
  const Cell& c = sys.cell();
  json basis = json::array();
  for (const auto& b : c.basis) basis.push_back(vec3_json(b));
  json cell = {{"basis", basis}, {"periodic", json::array({c.periodic[0], c.periodic[1], c.periodic[2]})}};
  if (c.origin != Vec3::Zero()) cell["origin"] = vec3_json(c.origin);
  json chains = json::array();
  for (const auto& g : sys.chains()) {
    json arcs = json::array();
    for (const auto& arc : g.arcs) {
      json pts = json::array();
      for (const auto& p : arc) pts.push_back(vec3_json(p));
      arcs.push_back(pts);
    }
    chains.push_back({{"id", g.id},
                      {"topology", to_string(g.topology)},
                      {"basepoint", json::array({g.basepoint.arc, g.basepoint.vertex})},
                      {"arcs", arcs}});
  }
  return {{"cell", cell}, {"chains", chains}};
}

PBCSystem read_system(const std::string& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  try {
    return system_from_json(j);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

std::string canonical_system_text(const PBCSystem& sys) { return to_json(sys).dump(2) + "\n"; }

void write_system(const PBCSystem& sys, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << canonical_system_text(sys);
}

TrajectoryFormat trajectory_format_from_string(const std::string& s) {
  if (s == "lammps-dump") return TrajectoryFormat::lammps_dump;
  if (s == "xyz-mol") return TrajectoryFormat::xyz_mol;
  throw Error("unknown trajectory format '" + s + "' (expected lammps-dump or xyz-mol)");
}

std::vector<TrajectoryFrame> read_trajectory(std::istream& in, TrajectoryFormat fmt) {
  auto frames = fmt == TrajectoryFormat::lammps_dump ? read_lammps(in) : read_xyz_mol(in);
  std::stable_sort(frames.begin(), frames.end(),
                   [](const auto& a, const auto& b) { return a.timestep < b.timestep; });
  return frames;
}

std::vector<TrajectoryFrame> read_trajectory(const std::string& path, TrajectoryFormat fmt) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return read_trajectory(in, fmt);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void write_lammps_dump(std::ostream& out, const std::vector<TrajectoryFrame>& frames) {
  out.precision(17);
  for (const auto& f : frames) {
    out << "ITEM: TIMESTEP\n" << f.timestep << "\n";
    out << "ITEM: NUMBER OF ATOMS\n" << f.atoms.size() << "\n";
    out << "ITEM: BOX BOUNDS pp pp pp\n";
    for (const auto& b : f.box) out << b[0] << " " << b[1] << "\n";
    out << "ITEM: ATOMS id mol x y z\n";
    for (const auto& a : f.atoms) {
      out << a.id << " " << a.mol << " " << a.pos.x() << " " << a.pos.y() << " " << a.pos.z()
          << "\n";
    }
  }
}

std::vector<std::pair<std::int64_t, std::vector<Vec3>>> unwrapped_chains(
    const TrajectoryFrame& frame) {
  std::map<std::int64_t, std::vector<const Atom*>> by_mol;
  for (const auto& a : frame.atoms) by_mol[a.mol].push_back(&a);
  std::vector<std::pair<std::int64_t, std::vector<Vec3>>> out;
  for (auto& [mol, atoms] : by_mol) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom* a, const Atom* b) { return a->id < b->id; });
    std::vector<Vec3> pts{atoms[0]->pos};
    for (std::size_t i = 1; i < atoms.size(); ++i) {
      Vec3 d = atoms[i]->pos - atoms[i - 1]->pos;
      for (int a = 0; a < 3; ++a) {
        const double L = frame.box[a][1] - frame.box[a][0];
        if (std::abs(d[a]) > 0.5 * L) d[a] -= L * std::round(d[a] / L);
      }
      pts.push_back(pts.back() + d);
    }
    out.emplace_back(mol, std::move(pts));
  }
  return out;
}

InteriorSelection select_interior(const TrajectoryFrame& frame) {
  Cell cell;
  for (int a = 0; a < 3; ++a) {
    cell.basis[a] = Vec3::Zero();
    cell.basis[a][a] = frame.box[a][1] - frame.box[a][0];
    cell.origin[a] = frame.box[a][0];
  }
  InteriorSelection sel;
  std::vector<GeneratingChain> chains;
  for (auto& [mol, pts] : unwrapped_chains(frame)) {
    bool inside = pts.size() >= 2;
    for (const auto& p : pts) {
      for (int a = 0; a < 3; ++a) {
        if (!(p[a] > frame.box[a][0] && p[a] < frame.box[a][1])) inside = false;
      }
    }
    for (std::size_t i = 0; inside && i + 1 < pts.size(); ++i) {
      if (pts[i] == pts[i + 1]) inside = false;
    }
    if (!inside) {
      sel.excluded.push_back(mol);
      continue;
    }
    sel.kept.push_back(mol);
    GeneratingChain g;
    g.id = "mol" + std::to_string(mol);
    g.topology = ChainTopology::open;
    g.arcs.push_back(std::move(pts));
    chains.push_back(std::move(g));
  }
  if (chains.empty()) sel.warning = "no chain lies strictly inside the box";
  sel.system = PBCSystem(cell, std::move(chains));
  return sel;
}

PBCSystem select_interior_chains(const TrajectoryFrame& frame) { return select_interior(frame).system; }

std::string to_string(SamplingMode m) { return m == SamplingMode::fibonacci ? "fibonacci" : "random"; }

SamplingMode sampling_mode_from_string(const std::string& s) {
  if (s == "fibonacci") return SamplingMode::fibonacci;
  if (s == "random") return SamplingMode::random;
  throw Error("unknown sampling mode '" + s + "'");
}

json polynomial_report(const LaurentPoly& p) {
  json j = {{"polynomial", to_json(p)}, {"text", p.to_string()}, {"terms", p.term_count()}};
  j["span"] = p.is_zero() ? json(nullptr) : json(span(p));
  return j;
}

json normalization_report(const DivisionResult& r, int components) {
  return {{"components", components},
          {"divisor_power", std::max(components - 1, 0)},
          {"quotient", polynomial_report(r.quotient)},
          {"remainder", polynomial_report(r.remainder)},
          {"remainder_span", r.remainder_span},
          {"remainder_zero", r.remainder_is_zero()}};
}

json sampling_metadata(const SamplingConfig& cfg, const JonesStats& st) {
  return {{"directions", cfg.directions},
          {"mode", to_string(cfg.mode)},
          {"seed", cfg.seed},
          {"tolerance", cfg.tol},
          {"crossing_cap", cfg.bracket.crossing_cap},
          {"memoize", cfg.bracket.memoize},
          {"exact", st.exact},
          {"projections", st.directions},
          {"retries", st.retries},
          {"cache_hits", st.cache_hits},
          {"max_crossings", st.max_crossings}};
}

}  // namespace pjones
