#pragma once

#include "hamnet/geometry.hpp"
#include "hamnet/types.hpp"

#include <vector>

namespace hamnet::hamiltonian {
struct Coefficients;
}

namespace hamnet::topology {

// Symmetric zero-diagonal adjacency over the active agents only. Rows are a
// compaction of the active ids; `id_to_row` is -1 for inactive agents.
struct Adjacency {
  int n = 0;
  BitMat bits;
  std::vector<int> row_to_id;
  std::vector<int> id_to_row;

  bool linked_rows(int row_a, int row_b) const { return bits(row_a, row_b) != 0; }

  bool linked_ids(int id_a, int id_b) const {
    const int ra = id_to_row[static_cast<std::size_t>(id_a)];
    const int rb = id_to_row[static_cast<std::size_t>(id_b)];
    if (ra < 0 || rb < 0) return false;
    return bits(ra, rb) != 0;
  }

  void set_ids(int id_a, int id_b, bool on) {
    const int ra = id_to_row[static_cast<std::size_t>(id_a)];
    const int rb = id_to_row[static_cast<std::size_t>(id_b)];
    bits(ra, rb) = on ? 1 : 0;
    bits(rb, ra) = on ? 1 : 0;
  }
};

struct MetricsRecord {
  int step = 0;
  double connectivity_pct = 0.0;
  double total_h = 0.0;
  double energy = 0.0;
  double mean_reduced_radius = 0.0;
  double mean_degree = 0.0;
};

// Links active pairs within mutual (attenuated) range. `factors` may be
// null; a scratch cache is then used for obstacle worlds.
Adjacency build_adjacency(const std::vector<geometry::AgentBody>& bodies,
                          const Mat& distances, const geometry::WorldConfig& world,
                          geometry::FactorCache* factors = nullptr);

// The pair predicate behind build_adjacency, exposed for incremental updates.
bool pair_linked(double distance, double factor, double radius_a, double radius_b,
                 geometry::LinkRule rule);

IntVec degrees(const Adjacency& a);

// Size of the largest connected component over the active count, via
// union-find. Throws std::invalid_argument on an empty network.
double giant_component_fraction(const Adjacency& a);

// Per-step metric bundle. Connectivity is the percentage of active agents
// with at least one link; the Hamiltonian here is evaluated directly from
// the definition, independent of hamiltonian::total_hamiltonian.
MetricsRecord compute_metrics(int step, const std::vector<geometry::AgentBody>& bodies,
                              const Adjacency& a, const hamiltonian::Coefficients& coeffs,
                              double side_length);

}  // namespace hamnet::topology
