#pragma once

#include <cstdint>

#include "pjones/bracket.hpp"
#include "pjones/geometry.hpp"
#include "pjones/laurent.hpp"

namespace pjones {

inline constexpr int kDefaultDirections = 500;

struct SamplingConfig {
  int directions = kDefaultDirections;
  SamplingMode mode = SamplingMode::fibonacci;
  std::uint64_t seed = 0;
  double tol = kDefaultTolerance;
  int workers = 1;
  BracketOptions bracket;
};

struct JonesStats {
  bool exact = false;
  int directions = 0;    // projections evaluated
  int retries = 0;       // non-generic draws replaced by perturbations
  int cache_hits = 0;    // projections whose diagram was already evaluated
  int max_crossings = 0;
};

// Fixed direction used for the single-projection evaluation of closed collections.
Vec3 reference_direction();

// Exact for all-closed collections, otherwise the float mean over cfg.directions.
LaurentPoly jones(const CurveCollection& c, const SamplingConfig& cfg = {},
                  JonesStats* stats = nullptr);

// Requires a generic xi; exact.
LaurentPoly jones_single_direction(const CurveCollection& c, const Vec3& xi,
                                   double tol = kDefaultTolerance,
                                   const BracketOptions& opt = {});

}  // namespace pjones
