#include "hamnet/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace hamnet::hamiltonian {

double node_hamiltonian(int row, const IntVec& degrees_by_row, const Vec& radii_by_row,
                        const topology::Adjacency& adj, const Mat& distances,
                        const Coefficients& coeffs) {
  const double r = radii_by_row[row];
  double h = degree_term(degrees_by_row[row], coeffs) + coeffs.alpha3 * r * r;
  const int id_i = adj.row_to_id[static_cast<std::size_t>(row)];
  for (int c = 0; c < adj.n; ++c) {
    if (!adj.bits(row, c)) continue;
    const int id_j = adj.row_to_id[static_cast<std::size_t>(c)];
    h += coeffs.alpha4 / distances(id_i, id_j);
  }
  return h;
}

double total_hamiltonian(const std::vector<geometry::AgentBody>& bodies,
                         const topology::Adjacency& adj, const Mat& distances,
                         const Coefficients& coeffs) {
  const IntVec k = topology::degrees(adj);
  Vec radii(adj.n);
  for (int r = 0; r < adj.n; ++r)
    radii[r] = bodies[static_cast<std::size_t>(adj.row_to_id[static_cast<std::size_t>(r)])].radius;
  double h = 0.0;
  for (int r = 0; r < adj.n; ++r)
    h += node_hamiltonian(r, k, radii, adj, distances, coeffs);
  return h;
}

RadiusDelta delta_h_radius(int id, double r_new,
                           const std::vector<geometry::AgentBody>& bodies,
                           const topology::Adjacency& adj, const Mat& distances,
                           const geometry::WorldConfig& world,
                           geometry::FactorCache& factors, const Coefficients& coeffs) {
  if (r_new < world.radius_min() || r_new > world.radius_max())
    throw std::invalid_argument("delta_h_radius: radius outside [r_min, r_max]");

  const geometry::AgentBody& agent = bodies[static_cast<std::size_t>(id)];
  const double r_old = agent.radius;

  RadiusDelta delta;
  const double radius_change =
      coeffs.alpha3 * (r_new * r_new - r_old * r_old);
  delta.total = radius_change;
  delta.own = radius_change;
  if (r_new == r_old) return delta;

  const int row_i = adj.id_to_row[static_cast<std::size_t>(id)];
  const int k_i_old = static_cast<int>(adj.bits.row(row_i).cast<int>().sum());
  int k_i_new = k_i_old;
  const double reach_cap = std::max(r_old, r_new);

  double link_sum_own = 0.0;
  for (int row_j = 0; row_j < adj.n; ++row_j) {
    if (row_j == row_i) continue;
    const int j = adj.row_to_id[static_cast<std::size_t>(row_j)];
    const geometry::AgentBody& other = bodies[static_cast<std::size_t>(j)];
    const double d = distances(id, j);
    // No flip is possible beyond the wider of the two radii in play.
    if (world.link_rule == geometry::LinkRule::MutualRange &&
        d > std::min(reach_cap, other.radius))
      continue;
    const bool was = adj.bits(row_i, row_j) != 0;
    const double f = factors.get(world, bodies, id, j);
    const bool now = topology::pair_linked(d, f, r_new, other.radius, world.link_rule);
    if (was == now) continue;

    delta.flips.push_back({j, now});
    k_i_new += now ? 1 : -1;
    const int k_j = static_cast<int>(adj.bits.row(row_j).cast<int>().sum());
    const int k_j_new = k_j + (now ? 1 : -1);
    const double sign = now ? 1.0 : -1.0;
    // Degree change of the far endpoint plus the link term in both H_i, H_j.
    delta.total += degree_term(k_j_new, coeffs) - degree_term(k_j, coeffs);
    delta.total += sign * 2.0 * coeffs.alpha4 / d;
    link_sum_own += sign * coeffs.alpha4 / d;
  }

  const double own_degree_change =
      degree_term(k_i_new, coeffs) - degree_term(k_i_old, coeffs);
  delta.total += own_degree_change;
  delta.own += own_degree_change + link_sum_own;
  return delta;
}

double delta_h_request(int degree, double radius, double new_radius,
                       double link_distance, const Coefficients& coeffs) {
  if (!(link_distance > 0.0))
    throw std::invalid_argument("delta_h_request: non-positive link distance");
  const double k = static_cast<double>(degree);
  const double k1 = k + 1.0;
  return coeffs.alpha1 * (k1 * k1 - k * k) + coeffs.alpha2 * (k1 * k1 * k1 - k * k * k) +
         coeffs.alpha3 * (new_radius * new_radius - radius * radius) +
         coeffs.alpha4 / link_distance;
}

}  // namespace hamnet::hamiltonian
