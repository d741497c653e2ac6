#include "hamnet/sim_state.hpp"

namespace hamnet {

void SimState::refresh_geometry() {
  distances = geometry::pairwise_distances(bodies, world.side_length);
  factors.reset(world, static_cast<int>(bodies.size()));
  rebuild_adjacency();
}

void SimState::rebuild_adjacency() {
  adj = topology::build_adjacency(bodies, distances, world, &factors);
  degree_by_id.setZero(static_cast<Eigen::Index>(bodies.size()));
  const IntVec by_row = topology::degrees(adj);
  for (int r = 0; r < adj.n; ++r)
    degree_by_id[adj.row_to_id[static_cast<std::size_t>(r)]] = by_row[r];
}

void SimState::apply_radius_change(int id, double r_new,
                                   const std::vector<hamiltonian::LinkFlip>& flips) {
  bodies[static_cast<std::size_t>(id)].radius = r_new;
  for (const hamiltonian::LinkFlip& flip : flips) {
    adj.set_ids(id, flip.other_id, flip.now_linked);
    const int d = flip.now_linked ? 1 : -1;
    degree_by_id[id] += d;
    degree_by_id[flip.other_id] += d;
  }
}

bool SimState::adjacency_consistent() const {
  for (int r = 0; r < adj.n; ++r) {
    if (adj.bits(r, r) != 0) return false;
    for (int c = r + 1; c < adj.n; ++c)
      if (adj.bits(r, c) != adj.bits(c, r)) return false;
  }
  return true;
}

}  // namespace hamnet
