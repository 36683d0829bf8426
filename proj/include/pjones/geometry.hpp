#pragma once

// Polygonal curves in 3-space and their projections to diagrams.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pjones/diagram.hpp"

namespace pjones {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

inline constexpr double kDefaultTolerance = 1e-9;

struct Curve {
  std::string id;
  bool closed = false;
  std::vector<Vec3> vertices;

  std::size_t segment_count() const {
    return closed ? vertices.size() : vertices.size() - 1;
  }
  Vec3 segment_start(std::size_t i) const { return vertices[i]; }
  Vec3 segment_end(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
};

class CurveCollection {
 public:
  CurveCollection() = default;
  explicit CurveCollection(std::vector<Curve> curves);

  const std::vector<Curve>& curves() const { return curves_; }
  std::size_t size() const { return curves_.size(); }
  bool empty() const { return curves_.empty(); }
  bool all_closed() const;
  std::size_t segment_count() const;

 private:
  std::vector<Curve> curves_;
};

void validate_curve(const Curve& c);

// Throws if |xi| differs from 1 by more than 1e-12.
void require_unit(const Vec3& xi);

struct Frame {
  Vec3 e1, e2, xi;
};
// Pairs xi with the canonical axis of smallest |component| and orthonormalizes.
Frame projection_frame(const Vec3& xi);

enum class SamplingMode { fibonacci, random };

std::vector<Vec3> sample_directions(int n, SamplingMode mode, std::uint64_t seed);

// Rotates xi by angle about an axis orthogonal to it; the axis depends on attempt.
Vec3 perturb_direction(const Vec3& xi, int attempt, double angle = 1e-6);

struct SegmentRef {
  int curve = 0;
  int segment = 0;
};

// One transverse crossing of two projected segments.
struct RawCrossing {
  SegmentRef over, under;
  double t_over = 0, t_under = 0;  // parameters along each segment
  Vec2 point;
  int sign = 1;
};

struct ProjectionResult {
  std::vector<RawCrossing> crossings;
  std::optional<std::string> non_generic;  // offending feature
};

// Finds all crossings and checks genericity. use_grid=false compares every pair.
ProjectionResult find_crossings(const CurveCollection& c, const Vec3& xi,
                                double tol = kDefaultTolerance, bool use_grid = true);

bool is_generic(const CurveCollection& c, const Vec3& xi, double tol = kDefaultTolerance);

// Throws NonGenericDirection when xi is not generic.
Diagram project(const CurveCollection& c, const Vec3& xi, double tol = kDefaultTolerance);

// Builds the diagram from already computed crossings.
Diagram diagram_from_crossings(const CurveCollection& c,
                               const std::vector<RawCrossing>& crossings);

struct GenericDirection {
  Vec3 xi;
  int retries = 0;
};
inline constexpr int kMaxDirectionRetries = 100;
// Returns xi or the first generic perturbation of it.
GenericDirection find_generic_direction(const CurveCollection& c, const Vec3& xi,
                                        double tol = kDefaultTolerance,
                                        int max_retries = kMaxDirectionRetries);

CurveCollection reversed(const CurveCollection& c);

nlohmann::json to_json(const Curve& c);
Curve curve_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CurveCollection& c);
CurveCollection curves_from_json(const nlohmann::json& j);

}  // namespace pjones
