#pragma once

// Combinatorial diagrams of open and closed curves.
//
// A diagram is a list of strands. Each strand is a sequence of passages
// through crossings. "forward" records whether the traversal agrees with the
// orientation of the original component; after smoothings, pieces of strands
// may be traversed backwards.

#include <array>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pjones/half_integer.hpp"
#include "pjones/laurent.hpp"

namespace pjones {

struct Passage {
  int crossing = 0;
  bool over = false;
  bool forward = true;
  int component = 0;

  bool operator==(const Passage&) const = default;
};

struct Endpoint {
  int component = 0;
  bool head = false;

  bool operator==(const Endpoint&) const = default;
};

struct Strand {
  std::vector<Passage> passages;
  // Set for open strands as (start of traversal, end of traversal).
  std::optional<std::pair<Endpoint, Endpoint>> ends;

  bool closed() const { return !ends.has_value(); }
  bool operator==(const Strand&) const = default;
};

struct Crossing {
  int id = 0;
  int sign = 1;

  bool operator==(const Crossing&) const = default;
};

// The four half-edges at a crossing, named by the original orientation.
enum class Role : int { over_in = 0, over_out = 1, under_in = 2, under_out = 3 };

enum class SmoothingKind { A, B };

using RolePairing = std::array<std::pair<Role, Role>, 2>;

class Diagram;
// Reconnects the four half-edges of one crossing and multiplies by A^weight_delta.
Diagram smooth_with_pairing(const Diagram& d, int crossing_id,
                            const RolePairing& pairing, int weight_delta);

class Diagram {
 public:
  Diagram() = default;
  Diagram(std::vector<std::string> component_ids, std::vector<Strand> strands,
          std::vector<Crossing> crossings);

  const std::vector<std::string>& component_ids() const { return component_ids_; }
  const std::vector<Strand>& strands() const { return strands_; }
  const std::vector<Crossing>& crossings() const { return crossings_; }
  std::size_t crossing_count() const { return crossings_.size(); }
  bool has_crossing(int id) const;
  const Crossing& crossing(int id) const;

  // Exponent of the monomial A^weight accumulated by smoothings.
  int weight() const { return weight_; }

  Diagram with_weight(int w) const {
    Diagram out = *this;
    out.weight_ = w;
    return out;
  }

  // Throws on a violated structural invariant.
  void validate() const;

  bool operator==(const Diagram&) const = default;

 private:
  friend Diagram smooth_with_pairing(const Diagram&, int, const RolePairing&, int);

  std::vector<std::string> component_ids_;
  std::vector<Strand> strands_;
  std::vector<Crossing> crossings_;
  int weight_ = 0;
};

int writhe(const Diagram& d);

// Half the signed count of crossings with one passage in each group.
HalfInteger inter_linking(const Diagram& d, const std::set<int>& group_a,
                          const std::set<int>& group_b);

// Role pairings realized by a smoothing of a crossing with the given sign.
RolePairing smoothing_pairing(int sign, SmoothingKind kind);
RolePairing oriented_pairing();

Diagram smooth(const Diagram& d, int crossing_id, SmoothingKind kind);
Diagram oriented_smooth(const Diagram& d, int crossing_id);

// Final state of the expansion: a crossing-free diagram.
struct SmoothingState {
  int loops = 0;                                       // closed loops
  std::vector<std::pair<Endpoint, Endpoint>> segments;  // open strands
  LaurentPoly weight;                                  // A^weight
  int segment_cycles = 0;
};

// Requires a crossing-free diagram.
SmoothingState terminal_state(const Diagram& d);
// d^(loops + segment_cycles - 1), or 1 for the empty diagram, times the weight.
LaurentPoly terminal_value(const SmoothingState& s);

// Relabels crossings 0..n-1 in order of first appearance.
Diagram canonicalize(const Diagram& d);
// Key equal for diagrams that differ only by crossing relabeling.
std::string canonical_key(const Diagram& d);

// Swaps over and under at every crossing and negates every sign.
Diagram mirror(const Diagram& d);

nlohmann::json to_json(const Diagram& d);
Diagram diagram_from_json(const nlohmann::json& j);

}  // namespace pjones
