#pragma once

// Periodic systems: cells, generating chains, images, minimal unfoldings and
// the Cell / Periodic Jones polynomials.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pjones/geometry.hpp"
#include "pjones/half_integer.hpp"
#include "pjones/jones3d.hpp"
#include "pjones/laurent.hpp"

namespace pjones {

using Lattice = std::array<int, 3>;

inline constexpr double kMatchTolerance = 1e-6;  // cell units
inline constexpr double kBoxTolerance = 1e-9;

enum class ChainTopology { closed, open, infinite };

std::string to_string(ChainTopology t);
ChainTopology topology_from_string(const std::string& s);

struct Basepoint {
  int arc = 0;
  int vertex = 0;

  auto operator<=>(const Basepoint&) const = default;
};

struct GeneratingChain {
  std::string id;
  ChainTopology topology = ChainTopology::closed;
  Basepoint basepoint;
  std::vector<std::vector<Vec3>> arcs;
};

struct Cell {
  std::array<Vec3, 3> basis;
  std::array<bool, 3> periodic{true, true, true};
  Vec3 origin = Vec3::Zero();
};

class PBCSystem {
 public:
  PBCSystem() = default;
  PBCSystem(Cell cell, std::vector<GeneratingChain> chains);

  const Cell& cell() const { return cell_; }
  const std::vector<GeneratingChain>& chains() const { return chains_; }
  int chain_index(const std::string& id) const;
  int periodic_axis_count() const;

  // Coordinates in cell units relative to the origin.
  Vec3 fractional(const Vec3& p) const;
  Vec3 lattice_vector(const Lattice& n) const;

  PBCSystem with_basepoint(int chain, Basepoint bp) const;

 private:
  Cell cell_;
  std::vector<GeneratingChain> chains_;
};

struct Image {
  int chain = 0;
  std::vector<Vec3> polyline;
  bool closed = false;
  // Translate between consecutive images of an infinite chain; zero otherwise.
  Lattice period{0, 0, 0};
  // (arc index, lattice translate) in image order.
  std::vector<std::pair<int, Lattice>> placements;
};

struct Unfolding {
  std::set<Lattice> cells;
  Lattice dims{1, 1, 1};
  Lattice min_cell{0, 0, 0};
};

struct MinimalCollectiveUnfolding {
  Lattice dims{1, 1, 1};
  Lattice anchor{0, 0, 0};
  int cell_count() const { return dims[0] * dims[1] * dims[2]; }
};

struct MplComponent {
  int chain = 0;
  Lattice translate{0, 0, 0};
  Curve curve;

  auto key() const { return std::make_pair(chain, translate); }
};

struct MinimalPeriodicLink {
  MinimalCollectiveUnfolding mu;
  std::vector<MplComponent> components;

  int component_count() const { return int(components.size()); }
  CurveCollection curves() const;
};

struct PbcOptions {
  double match_tol = kMatchTolerance;
  // Overrides the anchor of the collective unfolding box.
  std::optional<Lattice> anchor;
  // For infinite chains: search all basepoints for the largest link.
  bool search_basepoints = false;
  // Reuse this composition instead of the box test.
  std::optional<std::vector<std::pair<int, Lattice>>> frozen_components;
};

Image unfold_image(const PBCSystem& sys, int chain, std::optional<Basepoint> bp = std::nullopt,
                   double match_tol = kMatchTolerance);

Unfolding minimal_unfolding(const PBCSystem& sys, const Image& img);

MinimalCollectiveUnfolding minimal_collective_unfolding(const PBCSystem& sys,
                                                        const PbcOptions& opt = {});

// Whether the polyline meets the open box [lo, hi] in cell units; unbounded
// along non-periodic axes.
bool polyline_meets_open_box(const PBCSystem& sys, const std::vector<Vec3>& pts, bool closed,
                             const Vec3& lo, const Vec3& hi);

MinimalPeriodicLink minimal_periodic_link(const PBCSystem& sys, const PbcOptions& opt = {});

// Chains clipped to the base cell; every piece is an open component.
CurveCollection cell_arcs(const PBCSystem& sys, const PbcOptions& opt = {});

LaurentPoly cell_jones(const PBCSystem& sys, const SamplingConfig& cfg,
                       const PbcOptions& opt = {}, JonesStats* stats = nullptr);
LaurentPoly periodic_jones(const PBCSystem& sys, const SamplingConfig& cfg,
                           const PbcOptions& opt = {}, JonesStats* stats = nullptr);

// Divides by d^(n-1).
DivisionResult normalized(const LaurentPoly& p, int n_components);

// Translates of the link by multiples of (2*dims - 1) cells along each
// periodic axis, nonzero, whose bounding boxes come near the link.
std::vector<Lattice> self_linking_translates(const PBCSystem& sys,
                                             const MinimalPeriodicLink& link);

CurveCollection translated(const CurveCollection& c, const Vec3& shift, const std::string& suffix);

// Sum over the translates v of the shared-crossing linking between link and link+v.
HalfInteger slk_p(const PBCSystem& sys, const MinimalPeriodicLink& link, const Vec3& xi,
                  double tol = kDefaultTolerance);

}  // namespace pjones
