#pragma once

#include "hamnet/geometry.hpp"
#include "hamnet/hamiltonian.hpp"
#include "hamnet/topology.hpp"

#include <vector>

namespace hamnet {

// Mutable world snapshot shared by the strategies and the harness: bodies,
// floored distances, lazy range factors, adjacency, and a degree cache kept
// in sync with incremental link flips.
struct SimState {
  geometry::WorldConfig world;
  std::vector<geometry::AgentBody> bodies;
  Mat distances;
  geometry::FactorCache factors;
  topology::Adjacency adj;
  IntVec degree_by_id;

  int active_count() const { return adj.n; }

  double factor(int id_a, int id_b) {
    return factors.get(world, bodies, id_a, id_b);
  }

  int degree_of(int id) const { return degree_by_id[id]; }

  // Recomputes distances and factors (positions changed), then the adjacency.
  void refresh_geometry();

  // Rebuilds the adjacency and degree cache from current radii/positions.
  void rebuild_adjacency();

  // Applies a radius move plus its link flips without a full rebuild.
  void apply_radius_change(int id, double r_new,
                           const std::vector<hamiltonian::LinkFlip>& flips);

  // Symmetry and zero-diagonal check, used by debug assertions and tests.
  bool adjacency_consistent() const;
};

}  // namespace hamnet
