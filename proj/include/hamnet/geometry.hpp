#pragma once

#include "hamnet/rng.hpp"
#include "hamnet/types.hpp"

#include <optional>
#include <vector>

namespace hamnet::geometry {

// Regular Manhattan tiling: each period along an axis is [street | block],
// so streets of width `street_width` separate square blocks of side
// `block_side`. `origin` shifts the whole tiling.
struct ObstacleGrid {
  double block_side = 0.0;
  double street_width = 0.0;
  double origin = 0.0;

  double period() const { return block_side + street_width; }
};

struct MobilityConfig {
  double step_length = 0.0;
  double drift_fraction = 0.7;
  bool constrain_to_streets = false;
};

enum class AttenuationMode { OncePerBlockedSegment, PerObstacle };

// Link rule between two agents at distance d with radii r_i, r_j and
// attenuation factor f: mutual range links iff d <= f * min(r_i, r_j).
enum class LinkRule { MutualRange, MaxRange };

struct WorldConfig {
  int dimension = 2;
  double side_length = 1.0;
  std::optional<ObstacleGrid> obstacle_grid;
  double transmission_factor = 1.0;
  AttenuationMode attenuation_mode = AttenuationMode::OncePerBlockedSegment;
  LinkRule link_rule = LinkRule::MutualRange;
  MobilityConfig mobility;

  double distance_floor() const { return 1e-6 * side_length; }
  double radius_min() const { return 0.0; }
  double radius_max() const {
    return side_length * std::sqrt(static_cast<double>(dimension));
  }

  // Throws std::invalid_argument when a basic invariant is broken.
  void validate() const;
};

struct AgentBody {
  int id = 0;
  Vec position;
  double radius = 1.0;
  Vec drift_direction;
  bool active = true;
};

// Symmetric Euclidean distance matrix over all bodies in the list, indexed
// by list position. Distances below 1e-6 * L are clamped up to that floor
// so the 1/r_ij link term can never blow up; the diagonal stays zero.
Mat pairwise_distances(const std::vector<AgentBody>& bodies, double side_length);

// Mirrors an overshooting position back into [0, L]^D and negates the
// matching direction components. Throws if any overshoot reaches L.
void reflect(Vec& position, Vec& direction, double side_length);

// One mobility step for every active body: a fixed drift direction blended
// with fresh isotropic noise, reflective walls, and optional street-only
// movement in obstacle worlds.
void step_mobility(std::vector<AgentBody>& bodies, const WorldConfig& world,
                   Rng& rng);

bool inside_block(const Vec& p, const ObstacleGrid& grid);

// Number of distinct blocks whose interior the open segment (a, b) crosses.
int blocked_count(const Vec& a, const Vec& b, const ObstacleGrid& grid);

// Transmission attenuation between two points: 1 with clear line of sight,
// otherwise t (once mode) or t^blocked (per-obstacle mode).
double range_factor(const Vec& a, const Vec& b, const WorldConfig& world);

// Draws a uniform position, restricted to streets when the world constrains
// movement to them.
Vec random_position(const WorldConfig& world, Rng& rng);

// Per-pair memo of range factors, valid until any position changes. The
// trivial path (no grid, or t == 1) costs one branch.
class FactorCache {
 public:
  FactorCache() = default;

  void reset(const WorldConfig& world, int n_bodies);

  double get(const WorldConfig& world, const std::vector<AgentBody>& bodies,
             int i, int j);

  bool trivial() const { return trivial_; }

 private:
  Mat values_;
  BitMat known_;
  bool trivial_ = true;
};

}  // namespace hamnet::geometry
