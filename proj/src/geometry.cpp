#include "hamnet/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace hamnet::geometry {

void WorldConfig::validate() const {
  if (dimension != 2 && dimension != 3)
    throw std::invalid_argument("world dimension must be 2 or 3");
  if (!(side_length > 0.0))
    throw std::invalid_argument("side length must be positive");
  if (transmission_factor < 0.0 || transmission_factor > 1.0)
    throw std::invalid_argument("transmission factor must lie in [0, 1]");
  if (mobility.step_length < 0.0)
    throw std::invalid_argument("mobility step length must be non-negative");
  if (mobility.drift_fraction < 0.0 || mobility.drift_fraction > 1.0)
    throw std::invalid_argument("drift fraction must lie in [0, 1]");
  if (obstacle_grid) {
    if (!(obstacle_grid->block_side > 0.0) || !(obstacle_grid->street_width > 0.0))
      throw std::invalid_argument("obstacle grid sides must be positive");
    if (dimension != 2)
      throw std::invalid_argument("obstacle grids are defined for 2D worlds only");
  }
}

Mat pairwise_distances(const std::vector<AgentBody>& bodies, double side_length) {
  const int n = static_cast<int>(bodies.size());
  const double floor_d = 1e-6 * side_length;
  Mat d = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dij = (bodies[static_cast<std::size_t>(i)].position -
                    bodies[static_cast<std::size_t>(j)].position)
                       .norm();
      if (dij < floor_d) dij = floor_d;
      d(i, j) = dij;
      d(j, i) = dij;
    }
  }
  return d;
}

void reflect(Vec& position, Vec& direction, double side_length) {
  for (Eigen::Index c = 0; c < position.size(); ++c) {
    double x = position[c];
    if (x < 0.0) {
      if (-x >= side_length)
        throw std::invalid_argument("reflect: overshoot exceeds the domain size");
      position[c] = -x;
      direction[c] = -direction[c];
    } else if (x > side_length) {
      if (x - side_length >= side_length)
        throw std::invalid_argument("reflect: overshoot exceeds the domain size");
      position[c] = 2.0 * side_length - x;
      direction[c] = -direction[c];
    }
  }
}

namespace {

// Block-band test along one axis: each period is [street | block].
bool in_block_band(double x, const ObstacleGrid& grid) {
  const double p = grid.period();
  double local = std::fmod(x - grid.origin, p);
  if (local < 0.0) local += p;
  return local > grid.street_width;
}

}  // namespace

bool inside_block(const Vec& p, const ObstacleGrid& grid) {
  return in_block_band(p[0], grid) && in_block_band(p[1], grid);
}

void step_mobility(std::vector<AgentBody>& bodies, const WorldConfig& world,
                   Rng& rng) {
  const MobilityConfig& mob = world.mobility;
  if (mob.step_length <= 0.0) return;
  for (AgentBody& body : bodies) {
    if (!body.active) continue;
    const Vec noise = rng.unit_vector(world.dimension);
    Vec displacement = mob.step_length * (mob.drift_fraction * body.drift_direction +
                                          (1.0 - mob.drift_fraction) * noise);
    Vec target = body.position + displacement;
    Vec direction = body.drift_direction;
    reflect(target, direction, world.side_length);

    if (mob.constrain_to_streets && world.obstacle_grid &&
        inside_block(target, *world.obstacle_grid)) {
      // Manhattan movement: keep the displacement component along the street
      // the agent stands on; at intersections prefer the larger component.
      const ObstacleGrid& grid = *world.obstacle_grid;
      const bool x_street = !in_block_band(body.position[0], grid);
      const bool y_street = !in_block_band(body.position[1], grid);
      int axis;
      if (x_street && !y_street) {
        axis = 1;  // vertical corridor: move along y
      } else if (y_street && !x_street) {
        axis = 0;
      } else {
        axis = std::abs(displacement[0]) >= std::abs(displacement[1]) ? 0 : 1;
      }
      target = body.position;
      direction = body.drift_direction;
      Vec axis_move = Vec::Zero(world.dimension);
      axis_move[axis] = displacement[axis];
      target += axis_move;
      reflect(target, direction, world.side_length);
      if (inside_block(target, grid)) continue;  // reject the move outright
    }

    body.position = target;
    body.drift_direction = direction;
  }
}

int blocked_count(const Vec& a, const Vec& b, const ObstacleGrid& grid) {
  const double p = grid.period();
  const double lo_x = std::min(a[0], b[0]);
  const double hi_x = std::max(a[0], b[0]);
  const double lo_y = std::min(a[1], b[1]);
  const double hi_y = std::max(a[1], b[1]);

  const auto first_block = [&](double lo) {
    return static_cast<int>(std::floor((lo - grid.origin - grid.street_width) / p));
  };
  const auto last_block = [&](double hi) {
    return static_cast<int>(std::floor((hi - grid.origin) / p));
  };

  const Vec d = b - a;
  int count = 0;
  for (int kx = first_block(lo_x); kx <= last_block(hi_x); ++kx) {
    const double x0 = grid.origin + kx * p + grid.street_width;
    const double x1 = x0 + grid.block_side;
    for (int ky = first_block(lo_y); ky <= last_block(hi_y); ++ky) {
      const double y0 = grid.origin + ky * p + grid.street_width;
      const double y1 = y0 + grid.block_side;
      // Slab test against the open rectangle (x0,x1) x (y0,y1).
      double t0 = 0.0, t1 = 1.0;
      bool miss = false;
      const double blo[2] = {x0, y0};
      const double bhi[2] = {x1, y1};
      for (int c = 0; c < 2 && !miss; ++c) {
        if (d[c] == 0.0) {
          if (a[c] <= blo[c] || a[c] >= bhi[c]) miss = true;
        } else {
          double ta = (blo[c] - a[c]) / d[c];
          double tb = (bhi[c] - a[c]) / d[c];
          if (ta > tb) std::swap(ta, tb);
          t0 = std::max(t0, ta);
          t1 = std::min(t1, tb);
          if (t0 >= t1) miss = true;
        }
      }
      if (!miss && t0 < t1) ++count;
    }
  }
  return count;
}

double range_factor(const Vec& a, const Vec& b, const WorldConfig& world) {
  if (!world.obstacle_grid) return 1.0;
  const int blocked = blocked_count(a, b, *world.obstacle_grid);
  if (blocked == 0) return 1.0;
  const double t = world.transmission_factor;
  if (world.attenuation_mode == AttenuationMode::OncePerBlockedSegment) return t;
  return std::pow(t, blocked);
}

Vec random_position(const WorldConfig& world, Rng& rng) {
  Vec p(world.dimension);
  for (;;) {
    for (int c = 0; c < world.dimension; ++c)
      p[c] = rng.uniform(0.0, world.side_length);
    if (!world.mobility.constrain_to_streets || !world.obstacle_grid ||
        !inside_block(p, *world.obstacle_grid))
      return p;
  }
}

void FactorCache::reset(const WorldConfig& world, int n_bodies) {
  trivial_ = !world.obstacle_grid || world.transmission_factor >= 1.0;
  if (trivial_) return;
  values_.resize(n_bodies, n_bodies);
  known_.setZero(n_bodies, n_bodies);
}

double FactorCache::get(const WorldConfig& world,
                        const std::vector<AgentBody>& bodies, int i, int j) {
  if (trivial_) return 1.0;
  if (i == j) return 1.0;
  if (known_(i, j)) return values_(i, j);
  const double f = range_factor(bodies[static_cast<std::size_t>(i)].position,
                                bodies[static_cast<std::size_t>(j)].position, world);
  values_(i, j) = f;
  values_(j, i) = f;
  known_(i, j) = 1;
  known_(j, i) = 1;
  return f;
}

}  // namespace hamnet::geometry
