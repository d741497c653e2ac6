#include "hamnet/hamiltonian.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hamnet;
using namespace hamnet::hamiltonian;

namespace {

geometry::AgentBody body_at(int id, double x, double y, double radius) {
  geometry::AgentBody b;
  b.id = id;
  b.position = Vec(2);
  b.position << x, y;
  b.radius = radius;
  b.drift_direction = Vec(2);
  b.drift_direction << 1.0, 0.0;
  return b;
}

struct Fixture {
  geometry::WorldConfig world;
  std::vector<geometry::AgentBody> bodies;
  Mat distances;
  geometry::FactorCache factors;
  topology::Adjacency adj;

  void rebuild() {
    distances = geometry::pairwise_distances(bodies, world.side_length);
    factors.reset(world, static_cast<int>(bodies.size()));
    adj = topology::build_adjacency(bodies, distances, world, &factors);
  }
};

Fixture random_fixture(Rng& rng, int n, double side) {
  Fixture f;
  f.world.side_length = side;
  for (int i = 0; i < n; ++i)
    f.bodies.push_back(body_at(i, rng.uniform(0.0, side), rng.uniform(0.0, side),
                               rng.uniform(0.0, side / 2.0)));
  f.rebuild();
  return f;
}

constexpr Coefficients kStaticAlphas{-0.5, 0.2, 0.1, -0.5};

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("node value: isolated agent keeps only the radius term") {
  Fixture f;
  f.world.side_length = 10.0;
  f.bodies = {body_at(0, 5.0, 5.0, 1.0)};
  f.rebuild();
  const IntVec k = topology::degrees(f.adj);
  Vec radii(1);
  radii << 1.0;
  CHECK(node_hamiltonian(0, k, radii, f.adj, f.distances, kStaticAlphas) ==
        doctest::Approx(0.1));
  CHECK(node_hamiltonian(0, k, radii, f.adj, f.distances, Coefficients{}) == 0.0);
}

TEST_CASE("node value: one neighbour at distance two") {
  Fixture f;
  f.world.side_length = 100.0;
  f.bodies = {body_at(0, 0.0, 0.0, 2.0), body_at(1, 2.0, 0.0, 2.0)};
  f.rebuild();
  REQUIRE(f.adj.linked_ids(0, 1));
  const IntVec k = topology::degrees(f.adj);
  Vec radii(2);
  radii << 2.0, 2.0;
  // -0.5 + 0.2 + 0.1*4 - 0.5/2
  CHECK(node_hamiltonian(0, k, radii, f.adj, f.distances, kStaticAlphas) ==
        doctest::Approx(-0.15));
}

TEST_CASE("total: two linked nodes double the per-node value") {
  Fixture f;
  f.world.side_length = 100.0;
  f.bodies = {body_at(0, 0.0, 0.0, 2.0), body_at(1, 2.0, 0.0, 2.0)};
  f.rebuild();
  CHECK(total_hamiltonian(f.bodies, f.adj, f.distances, kStaticAlphas) ==
        doctest::Approx(-0.30));
}

TEST_CASE("total: empty world is zero") {
  Fixture f;
  f.world.side_length = 10.0;
  f.rebuild();
  CHECK(total_hamiltonian(f.bodies, f.adj, f.distances, kStaticAlphas) == 0.0);
}

TEST_CASE("total: matches the independent oracle on random instances") {
  Rng rng(123);
  for (int trial = 0; trial < 30; ++trial) {
    Fixture f = random_fixture(rng, 15, 10.0);
    const double expected = oracle::total_hamiltonian_by_definition(
        f.bodies, f.adj, kStaticAlphas.alpha1, kStaticAlphas.alpha2, kStaticAlphas.alpha3,
        kStaticAlphas.alpha4, f.world.side_length);
    const double actual = total_hamiltonian(f.bodies, f.adj, f.distances, kStaticAlphas);
    CHECK(std::abs(actual - expected) <= 1e-12 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("total: invariant under relabeling") {
  Rng rng(321);
  Fixture f = random_fixture(rng, 12, 10.0);
  const double before = total_hamiltonian(f.bodies, f.adj, f.distances, kStaticAlphas);

  // Shuffle the body order, reassign ids by the new positions.
  Fixture g = f;
  rng.shuffle(g.bodies);
  for (int i = 0; i < 12; ++i) g.bodies[static_cast<std::size_t>(i)].id = i;
  g.rebuild();
  const double after = total_hamiltonian(g.bodies, g.adj, g.distances, kStaticAlphas);
  CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("total: with alpha4 = 0 and no links only radii survive") {
  Rng rng(55);
  Coefficients coeffs{-0.5, 0.2, 0.3, 0.0};
  Fixture f;
  f.world.side_length = 100.0;
  double sum_r2 = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double r = rng.uniform(0.0, 0.4);
    f.bodies.push_back(body_at(i, 1.0 + 2.0 * i, 1.0, r));  // spacing 2 > any radius
    sum_r2 += r * r;
  }
  f.rebuild();
  REQUIRE(topology::degrees(f.adj).sum() == 0);
  CHECK(total_hamiltonian(f.bodies, f.adj, f.distances, coeffs) ==
        doctest::Approx(coeffs.alpha3 * sum_r2).epsilon(1e-12));
}

TEST_CASE("delta_h_radius: identity move changes nothing") {
  Rng rng(77);
  Fixture f = random_fixture(rng, 8, 10.0);
  const RadiusDelta delta =
      delta_h_radius(3, f.bodies[3].radius, f.bodies, f.adj, f.distances, f.world,
                     f.factors, kStaticAlphas);
  CHECK(delta.total == 0.0);
  CHECK(delta.flips.empty());
}

TEST_CASE("delta_h_radius: hand-derived pair flip") {
  Fixture f;
  f.world.side_length = 100.0;
  f.bodies = {body_at(0, 0.0, 0.0, 1.0), body_at(1, 2.0, 0.0, 2.0)};
  f.rebuild();
  REQUIRE(!f.adj.linked_ids(0, 1));
  const RadiusDelta delta = delta_h_radius(0, 2.0, f.bodies, f.adj, f.distances,
                                           f.world, f.factors, kStaticAlphas);
  // 0.1*(4-1) + 2*(-0.5 + 0.2) + (-0.5)*(2/2)
  CHECK(delta.total == doctest::Approx(-0.8));
  REQUIRE(delta.flips.size() == 1);
  CHECK(delta.flips[0].other_id == 1);
  CHECK(delta.flips[0].now_linked);
}

TEST_CASE("delta_h_radius: rejects out-of-range targets") {
  Fixture f;
  f.world.side_length = 10.0;
  f.bodies = {body_at(0, 5.0, 5.0, 1.0)};
  f.rebuild();
  CHECK_THROWS_AS(delta_h_radius(0, -0.1, f.bodies, f.adj, f.distances, f.world,
                                 f.factors, kStaticAlphas),
                  std::invalid_argument);
  CHECK_THROWS_AS(delta_h_radius(0, 100.0, f.bodies, f.adj, f.distances, f.world,
                                 f.factors, kStaticAlphas),
                  std::invalid_argument);
}

TEST_CASE("delta_h_radius equals a full recompute on random moves") {
  Rng rng(2024);
  int checked = 0;
  while (checked < 10000) {
    Fixture f = random_fixture(rng, 12, 10.0);
    const Coefficients coeffs{rng.uniform(-1.0, 0.0), rng.uniform(0.0, 0.5),
                              rng.uniform(0.0, 1.0), rng.uniform(-2.0, 0.0)};
    const double h_before = total_hamiltonian(f.bodies, f.adj, f.distances, coeffs);
    for (int move = 0; move < 25; ++move, ++checked) {
      const int id = rng.uniform_int(12);
      const double r_new = rng.uniform(0.0, f.world.radius_max());
      const RadiusDelta delta = delta_h_radius(id, r_new, f.bodies, f.adj,
                                               f.distances, f.world, f.factors, coeffs);
      Fixture g = f;
      g.bodies[static_cast<std::size_t>(id)].radius = r_new;
      g.rebuild();
      const double h_after = total_hamiltonian(g.bodies, g.adj, g.distances, coeffs);
      REQUIRE(std::abs(delta.total - (h_after - h_before)) <=
              1e-9 * (1.0 + std::abs(h_before)));
    }
  }
}

TEST_CASE("delta_h_radius with obstacles still matches the recompute") {
  Rng rng(4040);
  geometry::WorldConfig world;
  world.side_length = 10.0;
  world.obstacle_grid = geometry::ObstacleGrid{1.5, 0.5, 0.0};
  world.transmission_factor = 0.5;
  for (int trial = 0; trial < 60; ++trial) {
    Fixture f;
    f.world = world;
    for (int i = 0; i < 10; ++i)
      f.bodies.push_back(body_at(i, rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0),
                                 rng.uniform(0.0, 5.0)));
    f.rebuild();
    const Coefficients coeffs = kStaticAlphas;
    const double h_before = total_hamiltonian(f.bodies, f.adj, f.distances, coeffs);
    const int id = rng.uniform_int(10);
    const double r_new = rng.uniform(0.0, world.radius_max());
    const RadiusDelta delta = delta_h_radius(id, r_new, f.bodies, f.adj, f.distances,
                                             f.world, f.factors, coeffs);
    Fixture g = f;
    g.bodies[static_cast<std::size_t>(id)].radius = r_new;
    g.rebuild();
    const double h_after = total_hamiltonian(g.bodies, g.adj, g.distances, coeffs);
    REQUIRE(std::abs(delta.total - (h_after - h_before)) <=
            1e-9 * (1.0 + std::abs(h_before)));
  }
}

TEST_CASE("delta_h_request: hand-derived accept and reject values") {
  CHECK(delta_h_request(2, 1.0, 3.0, kStaticAlphas) ==
        doctest::Approx(1.9333333333).epsilon(1e-6));
  CHECK(delta_h_request(0, 1.0, 1.0, kStaticAlphas) == doctest::Approx(-0.8));
  CHECK(delta_h_request(4, 2.0, 1.5, Coefficients{}) == 0.0);
  CHECK_THROWS_AS(delta_h_request(1, 1.0, 0.0, kStaticAlphas), std::invalid_argument);
}

TEST_CASE("delta_h_request matches the receiver slice of a full recompute") {
  // Construct states where accepting flips exactly the requester link: the
  // receiver sits far from everyone else, the requester's radius already
  // covers the gap.
  Rng rng(909);
  for (int trial = 0; trial < 200; ++trial) {
    Fixture f;
    f.world.side_length = 100.0;
    const double d = rng.uniform(1.0, 5.0);
    f.bodies = {body_at(0, 50.0, 50.0, rng.uniform(0.1, d - 1e-6)),
                body_at(1, 50.0 + d, 50.0, rng.uniform(d + 0.5, 10.0))};
    // Bystander far from everyone; sometimes a close satellite that keeps the
    // receiver at degree one before and after.
    f.bodies.push_back(body_at(2, 50.0 + d + 1.0, 50.0 + 20.0, 25.0));
    if (rng.bernoulli(0.5)) f.bodies.push_back(body_at(3, 50.0, 50.05, 0.06));
    f.rebuild();
    REQUIRE(!f.adj.linked_ids(0, 1));

    const Coefficients coeffs{rng.uniform(-1.0, 0.0), rng.uniform(0.0, 0.5),
                              rng.uniform(0.0, 1.0), rng.uniform(-2.0, 0.0)};
    const int k_receiver = topology::degrees(f.adj)[f.adj.id_to_row[0]];
    const double gap = f.distances(0, 1);  // the representable pair distance
    const double predicted =
        delta_h_request(k_receiver, f.bodies[0].radius, gap, coeffs);

    // Receiver-side slice of the full recompute: only H_0 changes matter.
    const int n = static_cast<int>(f.bodies.size());
    const IntVec k_before = topology::degrees(f.adj);
    Vec radii_before(n);
    for (int i = 0; i < n; ++i) radii_before[i] = f.bodies[static_cast<std::size_t>(i)].radius;
    const double h0_before = node_hamiltonian(f.adj.id_to_row[0], k_before,
                                              radii_before, f.adj, f.distances, coeffs);
    Fixture g = f;
    g.bodies[0].radius = gap;
    g.rebuild();
    REQUIRE(g.adj.linked_ids(0, 1));
    const IntVec k_after = topology::degrees(g.adj);
    Vec radii_after(n);
    for (int i = 0; i < n; ++i) radii_after[i] = g.bodies[static_cast<std::size_t>(i)].radius;
    const double h0_after = node_hamiltonian(g.adj.id_to_row[0], k_after, radii_after,
                                             g.adj, g.distances, coeffs);
    REQUIRE(predicted == doctest::Approx(h0_after - h0_before).epsilon(1e-9));
  }
}

}  // TEST_SUITE
