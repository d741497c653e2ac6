#include "hamnet/topology.hpp"

#include "hamnet/hamiltonian.hpp"

#include <numeric>
#include <stdexcept>

namespace hamnet::topology {

bool pair_linked(double distance, double factor, double radius_a, double radius_b,
                 geometry::LinkRule rule) {
  const double reach = rule == geometry::LinkRule::MutualRange
                           ? std::min(radius_a, radius_b)
                           : std::max(radius_a, radius_b);
  return distance <= factor * reach;
}

Adjacency build_adjacency(const std::vector<geometry::AgentBody>& bodies,
                          const Mat& distances, const geometry::WorldConfig& world,
                          geometry::FactorCache* factors) {
  geometry::FactorCache scratch;
  if (!factors) {
    scratch.reset(world, static_cast<int>(bodies.size()));
    factors = &scratch;
  }

  Adjacency adj;
  adj.id_to_row.assign(bodies.size(), -1);
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (!bodies[i].active) continue;
    adj.id_to_row[i] = static_cast<int>(adj.row_to_id.size());
    adj.row_to_id.push_back(static_cast<int>(i));
  }
  adj.n = static_cast<int>(adj.row_to_id.size());
  adj.bits.setZero(adj.n, adj.n);

  for (int ra = 0; ra < adj.n; ++ra) {
    const int ia = adj.row_to_id[static_cast<std::size_t>(ra)];
    const geometry::AgentBody& a = bodies[static_cast<std::size_t>(ia)];
    for (int rb = ra + 1; rb < adj.n; ++rb) {
      const int ib = adj.row_to_id[static_cast<std::size_t>(rb)];
      const geometry::AgentBody& b = bodies[static_cast<std::size_t>(ib)];
      const double d = distances(ia, ib);
      // The factor only matters when the pair is in geometric reach.
      const double reach = world.link_rule == geometry::LinkRule::MutualRange
                               ? std::min(a.radius, b.radius)
                               : std::max(a.radius, b.radius);
      if (d > reach) continue;
      const double f = factors->get(world, bodies, ia, ib);
      if (pair_linked(d, f, a.radius, b.radius, world.link_rule)) {
        adj.bits(ra, rb) = 1;
        adj.bits(rb, ra) = 1;
      }
    }
  }
  return adj;
}

IntVec degrees(const Adjacency& a) {
  IntVec k(a.n);
  for (int r = 0; r < a.n; ++r)
    k[r] = static_cast<int>(a.bits.row(r).cast<int>().sum());
  return k;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[static_cast<std::size_t>(x)] != x) {
      parent_[static_cast<std::size_t>(x)] =
          parent_[static_cast<std::size_t>(parent_[static_cast<std::size_t>(x)])];
      x = parent_[static_cast<std::size_t>(x)];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)])
      std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
  }

  int max_size() const {
    int best = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i)
      if (parent_[i] == static_cast<int>(i))
        best = std::max(best, size_[i]);
    return best;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace

double giant_component_fraction(const Adjacency& a) {
  if (a.n == 0) throw std::invalid_argument("giant component of an empty network");
  UnionFind uf(a.n);
  for (int r = 0; r < a.n; ++r)
    for (int c = r + 1; c < a.n; ++c)
      if (a.bits(r, c)) uf.unite(r, c);
  return static_cast<double>(uf.max_size()) / static_cast<double>(a.n);
}

MetricsRecord compute_metrics(int step, const std::vector<geometry::AgentBody>& bodies,
                              const Adjacency& a, const hamiltonian::Coefficients& coeffs,
                              double side_length) {
  if (a.n == 0) throw std::invalid_argument("metrics of an empty network");
  MetricsRecord rec;
  rec.step = step;

  const IntVec k = degrees(a);
  int isolated = 0;
  for (int r = 0; r < a.n; ++r)
    if (k[r] == 0) ++isolated;
  rec.connectivity_pct =
      100.0 * static_cast<double>(a.n - isolated) / static_cast<double>(a.n);
  const double n_active = static_cast<double>(a.n);
  double sum_r2 = 0.0, sum_r = 0.0, total_h = 0.0;
  for (int r = 0; r < a.n; ++r) {
    const geometry::AgentBody& body =
        bodies[static_cast<std::size_t>(a.row_to_id[static_cast<std::size_t>(r)])];
    sum_r2 += body.radius * body.radius;
    sum_r += body.radius;
    const double kd = static_cast<double>(k[r]);
    total_h += coeffs.alpha1 * kd * kd + coeffs.alpha2 * kd * kd * kd +
               coeffs.alpha3 * body.radius * body.radius;
  }
  // Each linked pair contributes alpha4/d to both endpoint Hamiltonians.
  double link_sum = 0.0;
  for (int r = 0; r < a.n; ++r) {
    const int ia = a.row_to_id[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < a.n; ++c) {
      if (!a.bits(r, c)) continue;
      const int ib = a.row_to_id[static_cast<std::size_t>(c)];
      const double d = (bodies[static_cast<std::size_t>(ia)].position -
                        bodies[static_cast<std::size_t>(ib)].position)
                           .norm();
      const double floor_d = 1e-6 * side_length;
      link_sum += 2.0 / std::max(d, floor_d);
    }
  }
  total_h += coeffs.alpha4 * link_sum;

  rec.total_h = total_h;
  rec.energy = coeffs.alpha3 * sum_r2;
  rec.mean_reduced_radius = sum_r / side_length / n_active;
  rec.mean_degree = static_cast<double>(k.sum()) / n_active;
  return rec;
}

}  // namespace hamnet::topology
