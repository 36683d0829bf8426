// Command-line front end.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pjones/cutoff.hpp"
#include "pjones/error.hpp"
#include "pjones/io.hpp"
#include "pjones/jones3d.hpp"
#include "pjones/pbc.hpp"

using nlohmann::json;
using namespace pjones;

namespace {

struct Common {
  int directions = kDefaultDirections;
  std::string mode = "fibonacci";
  std::uint64_t seed = 0;
  double tolerance = kDefaultTolerance;
  int crossing_cap = kDefaultCrossingCap;
  int workers = 1;
  std::string frozen;
  std::string output = "json";
  std::string report;

  SamplingConfig sampling() const {
    SamplingConfig c;
    c.directions = directions;
    c.mode = sampling_mode_from_string(mode);
    c.seed = seed;
    c.tol = tolerance;
    c.workers = workers;
    c.bracket.crossing_cap = crossing_cap;
    return c;
  }
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--directions", c.directions, "projection directions for open curves")
      ->check(CLI::PositiveNumber);
  app->add_option("--mode", c.mode, "direction sampling")
      ->check(CLI::IsMember({"fibonacci", "random"}));
  app->add_option("--seed", c.seed, "seed for random sampling");
  app->add_option("--tolerance", c.tolerance, "genericity tolerance");
  app->add_option("--crossing-cap", c.crossing_cap, "largest diagram evaluated");
  app->add_option("--workers", c.workers, "threads over directions")->check(CLI::PositiveNumber);
  app->add_option("--frozen-components", c.frozen,
                  "JSON file listing minimal periodic link components to reuse");
  app->add_option("--output", c.output, "report format")->check(CLI::IsMember({"json", "text"}));
  app->add_option("--report", c.report, "write the report here instead of stdout");
}

Vec3 parse_direction(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) v.push_back(std::stod(part));
  if (v.size() != 3) throw Error("direction must be dx,dy,dz");
  Vec3 xi(v[0], v[1], v[2]);
  if (xi.norm() == 0) throw Error("direction must be nonzero");
  return xi.normalized();
}

json components_json(const PBCSystem& sys, const MinimalPeriodicLink& link) {
  json arr = json::array();
  for (const auto& c : link.components) {
    arr.push_back({{"chain", sys.chains()[c.chain].id},
                   {"translate", json::array({c.translate[0], c.translate[1], c.translate[2]})}});
  }
  return arr;
}

PbcOptions pbc_options(const Common& c, const PBCSystem& sys) {
  PbcOptions opt;
  if (c.frozen.empty()) return opt;
  std::ifstream in(c.frozen);
  if (!in) throw Error("cannot open '" + c.frozen + "'");
  json j = json::parse(in);
  const json& arr = j.is_object() ? j.at("components") : j;
  std::vector<std::pair<int, Lattice>> comps;
  for (const auto& e : arr) {
    const auto& t = e.at("translate");
    comps.push_back({sys.chain_index(e.at("chain").get<std::string>()),
                     Lattice{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>()}});
  }
  opt.frozen_components = comps;
  return opt;
}

std::string text_of(const json& j, const std::string& indent = "") {
  std::ostringstream os;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it->is_object() && it.key() != "polynomial") {
      os << indent << it.key() << ":\n" << text_of(*it, indent + "  ");
    } else if (it.key() == "polynomial") {
      continue;  // the "text" sibling carries it
    } else {
      os << indent << it.key() << ": " << (it->is_string() ? it->get<std::string>() : it->dump())
         << "\n";
    }
  }
  return os.str();
}

void emit(const Common& c, const json& report) {
  const std::string body = c.output == "json" ? report.dump(2) + "\n" : text_of(report);
  if (c.report.empty()) {
    std::cout << body;
  } else {
    std::ofstream out(c.report, std::ios::binary);
    if (!out) throw Error("cannot write '" + c.report + "'");
    out << body;
  }
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jones polynomials of curves and periodic systems"};
  app.require_subcommand(1);
  // Timings go to stderr so reports stay reproducible.
  bool timing = false;
  app.add_flag("--timing", timing, "print wall time to stderr");

  Common c;
  std::string curves_path, system_path, direction, trajectory, format = "lammps-dump", out_path;
  std::string which = "periodic";
  int N = 1;
  int frame_index = 0;

  auto* jones_cmd = app.add_subcommand("jones", "Jones polynomial of a curve collection");
  jones_cmd->add_option("--curves", curves_path, "curve collection JSON")->required();
  jones_cmd->add_option("--direction", direction, "single projection direction dx,dy,dz");
  add_common(jones_cmd, c);

  auto* cell_cmd = app.add_subcommand("cell-jones", "Cell Jones polynomial of a periodic system");
  cell_cmd->add_option("--system", system_path)->required();
  add_common(cell_cmd, c);

  auto* per_cmd = app.add_subcommand("periodic-jones", "Periodic Jones polynomial");
  per_cmd->add_option("--system", system_path)->required();
  add_common(per_cmd, c);

  auto* norm_cmd = app.add_subcommand("normalize", "Divide a system polynomial by d^(n-1)");
  norm_cmd->add_option("--system", system_path)->required();
  norm_cmd->add_option("--which", which)->check(CLI::IsMember({"cell", "periodic"}));
  add_common(norm_cmd, c);

  auto* slk_cmd = app.add_subcommand("slk", "Periodic self-linking of the minimal periodic link");
  slk_cmd->add_option("--system", system_path)->required();
  slk_cmd->add_option("--direction", direction);
  add_common(slk_cmd, c);

  auto* cut_cmd = app.add_subcommand("cutoff-verify", "Check the cutoff state-sum factorization");
  cut_cmd->add_option("--system", system_path)->required();
  cut_cmd->add_option("--N", N)->check(CLI::PositiveNumber);
  cut_cmd->add_option("--direction", direction);
  add_common(cut_cmd, c);

  auto* ingest_cmd = app.add_subcommand("ingest", "Build a system from the interior chains of a frame");
  ingest_cmd->add_option("--trajectory", trajectory)->required();
  ingest_cmd->add_option("--format", format)->check(CLI::IsMember({"lammps-dump", "xyz-mol"}));
  ingest_cmd->add_option("--frame", frame_index, "frame index after timestep ordering");
  ingest_cmd->add_option("--out", out_path, "system JSON to write")->required();
  add_common(ingest_cmd, c);

  CLI11_PARSE(app, argc, argv);

  const auto t0 = Clock::now();
  try {
    const SamplingConfig cfg = c.sampling();
    json report;
    if (*jones_cmd) {
      std::ifstream in(curves_path);
      if (!in) throw Error("cannot open '" + curves_path + "'");
      const CurveCollection curves = curves_from_json(json::parse(in));
      LaurentPoly v;
      JonesStats st;
      if (!direction.empty()) {
        v = jones_single_direction(curves, parse_direction(direction), cfg.tol, cfg.bracket);
        st.exact = true;
        st.directions = 1;
        report["direction"] = direction;
      } else {
        v = jones(curves, cfg, &st);
      }
      report["jones"] = polynomial_report(v);
      report["components"] = curves.size();
      report["sampling"] = sampling_metadata(cfg, st);
    } else if (*cell_cmd || *per_cmd || *norm_cmd) {
      const PBCSystem sys = read_system(system_path);
      const PbcOptions opt = pbc_options(c, sys);
      const bool cell = *cell_cmd || (*norm_cmd && which == "cell");
      JonesStats st;
      LaurentPoly v;
      int components = 0;
      if (cell) {
        components = int(cell_arcs(sys, opt).size());
        v = cell_jones(sys, cfg, opt, &st);
      } else {
        const MinimalPeriodicLink link = minimal_periodic_link(sys, opt);
        components = link.component_count();
        report["minimal_collective_unfolding"] = {
            {"dims", link.mu.dims}, {"anchor", link.mu.anchor}, {"cells", link.mu.cell_count()}};
        report["components"] = components_json(sys, link);
        v = periodic_jones(sys, cfg, opt, &st);
      }
      report["kind"] = cell ? "cell" : "periodic";
      report["component_count"] = components;
      report["jones"] = polynomial_report(v);
      report["normalization"] = normalization_report(normalized(v, components), components);
      report["sampling"] = sampling_metadata(cfg, st);
    } else if (*slk_cmd) {
      const PBCSystem sys = read_system(system_path);
      const MinimalPeriodicLink link = minimal_periodic_link(sys, pbc_options(c, sys));
      const Vec3 xi = direction.empty() ? reference_direction() : parse_direction(direction);
      report["slk"] = slk_p(sys, link, xi, cfg.tol).to_string();
      report["component_count"] = link.component_count();
      report["direction"] = {xi.x(), xi.y(), xi.z()};
    } else if (*cut_cmd) {
      const PBCSystem sys = read_system(system_path);
      const Vec3 xi = direction.empty() ? reference_direction() : parse_direction(direction);
      VerifyOptions vo;
      vo.tol = cfg.tol;
      vo.bracket = cfg.bracket;
      report = to_json(verify_theorem1(sys, N, xi, vo));
      report["direction"] = {xi.x(), xi.y(), xi.z()};
    } else if (*ingest_cmd) {
      const auto frames = read_trajectory(trajectory, trajectory_format_from_string(format));
      if (frame_index < 0 || frame_index >= int(frames.size())) throw Error("frame index out of range");
      const auto sel = select_interior(frames[frame_index]);
      if (!sel.warning.empty()) std::cerr << "warning: " << sel.warning << "\n";
      write_system(sel.system, out_path);
      report = {{"frames", frames.size()},
                {"timestep", frames[frame_index].timestep},
                {"kept", sel.kept},
                {"excluded", sel.excluded},
                {"system", out_path}};
    }
    emit(c, report);
  } catch (const StateSumTooLarge& e) {
    std::cerr << "error: " << e.what() << "\n"
              << "hint: reduce the system or the number of directions, or raise --crossing-cap\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  if (timing) std::cerr << "wall time: " << seconds_since(t0) << " s\n";
  return 0;
}
