#pragma once

#include "hamnet/geometry.hpp"
#include "hamnet/topology.hpp"
#include "hamnet/types.hpp"

#include <vector>

namespace hamnet::hamiltonian {

// Weights of the four network cost terms: degree squared, degree cubed,
// radius squared, and the inverse-distance link reward.
struct Coefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double alpha3 = 0.0;
  double alpha4 = 0.0;
};

// alpha1 k^2 + alpha2 k^3 for one node.
inline double degree_term(int k, const Coefficients& c) {
  const double kd = static_cast<double>(k);
  return c.alpha1 * kd * kd + c.alpha2 * kd * kd * kd;
}

// H_i of one active row: degree terms, radius energy, and the single-counted
// sum of alpha4 / d_ij over linked neighbours.
double node_hamiltonian(int row, const IntVec& degrees_by_row, const Vec& radii_by_row,
                        const topology::Adjacency& adj, const Mat& distances,
                        const Coefficients& coeffs);

// Sum of node_hamiltonian over all active agents.
double total_hamiltonian(const std::vector<geometry::AgentBody>& bodies,
                         const topology::Adjacency& adj, const Mat& distances,
                         const Coefficients& coeffs);

struct LinkFlip {
  int other_id = 0;
  bool now_linked = false;
};

struct RadiusDelta {
  double total = 0.0;  // exact change of the network Hamiltonian
  double own = 0.0;    // change restricted to the acting agent's H_i
  std::vector<LinkFlip> flips;
};

// Exact incremental change of the total Hamiltonian if agent `id` moves its
// radius to `r_new`, together with the links that flip. Throws when r_new is
// outside [r_min, r_max].
RadiusDelta delta_h_radius(int id, double r_new,
                           const std::vector<geometry::AgentBody>& bodies,
                           const topology::Adjacency& adj, const Mat& distances,
                           const geometry::WorldConfig& world,
                           geometry::FactorCache& factors, const Coefficients& coeffs);

// Receiver-side Hamiltonian change for accepting a connection request when
// the new radius and the link distance differ (attenuated ranges).
double delta_h_request(int degree, double radius, double new_radius,
                       double link_distance, const Coefficients& coeffs);

// Standard form: the receiver grows its radius exactly to the requester
// distance r_ij. Throws on non-positive r_ij.
inline double delta_h_request(int degree, double radius, double r_ij,
                              const Coefficients& coeffs) {
  return delta_h_request(degree, radius, r_ij, r_ij, coeffs);
}

}  // namespace hamnet::hamiltonian
