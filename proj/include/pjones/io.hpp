#pragma once

// System files, trajectory ingestion and report plumbing.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "pjones/jones3d.hpp"
#include "pjones/laurent.hpp"
#include "pjones/pbc.hpp"

namespace pjones {

// System JSON

PBCSystem system_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PBCSystem& sys);

PBCSystem read_system(const std::string& path);
// Canonical form: sorted keys, two-space indent, trailing newline.
std::string canonical_system_text(const PBCSystem& sys);
void write_system(const PBCSystem& sys, const std::string& path);

// Trajectories

struct Atom {
  std::int64_t id = 0;
  std::int64_t mol = 0;
  Vec3 pos = Vec3::Zero();
};

struct TrajectoryFrame {
  std::int64_t timestep = 0;
  std::array<std::array<double, 2>, 3> box{};  // per axis {lo, hi}
  std::vector<Atom> atoms;
};

enum class TrajectoryFormat { lammps_dump, xyz_mol };

TrajectoryFormat trajectory_format_from_string(const std::string& s);

std::vector<TrajectoryFrame> read_trajectory(std::istream& in, TrajectoryFormat fmt);
std::vector<TrajectoryFrame> read_trajectory(const std::string& path, TrajectoryFormat fmt);

void write_lammps_dump(std::ostream& out, const std::vector<TrajectoryFrame>& frames);

// Chains by molecule id, atoms by ascending id, unwrapped by minimum image
// starting from the first atom.
std::vector<std::pair<std::int64_t, std::vector<Vec3>>> unwrapped_chains(
    const TrajectoryFrame& frame);

struct InteriorSelection {
  PBCSystem system;
  std::vector<std::int64_t> kept;
  std::vector<std::int64_t> excluded;
  std::string warning;  // empty unless nothing was kept
};

// Keeps chains whose unwrapped path stays strictly inside the box.
InteriorSelection select_interior(const TrajectoryFrame& frame);
PBCSystem select_interior_chains(const TrajectoryFrame& frame);

// Reports

std::string to_string(SamplingMode m);
SamplingMode sampling_mode_from_string(const std::string& s);

nlohmann::json polynomial_report(const LaurentPoly& p);
nlohmann::json normalization_report(const DivisionResult& r, int components);
nlohmann::json sampling_metadata(const SamplingConfig& cfg, const JonesStats& st);

}  // namespace pjones
