#include "hamnet/strategies.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace hamnet::strategies {

namespace {

std::vector<int> active_ids(const SimState& state) {
  std::vector<int> ids;
  ids.reserve(state.bodies.size());
  for (const geometry::AgentBody& body : state.bodies)
    if (body.active) ids.push_back(body.id);
  return ids;
}

double clamp_radius(double r, const geometry::WorldConfig& world) {
  return std::clamp(r, world.radius_min(), world.radius_max());
}

// Smallest radius that closes a link over distance d at attenuation f,
// nudged up so the link rule holds under floating-point rounding.
double required_radius(double d, double f) {
  double r = d / f;
  while (f * r < d)
    r = std::nextafter(r, std::numeric_limits<double>::infinity());
  return r;
}

}  // namespace

void base_step(SimState& state, const StrategyConfig& config, Rng& rng) {
  const double scale =
      dqn::radius_step_scale(state.world.side_length, state.active_count());
  // Decisions read the step-start degrees; links are rebuilt once at the end.
  const IntVec degree_snapshot = state.degree_by_id;
  bool changed = false;
  for (geometry::AgentBody& body : state.bodies) {
    if (!body.active) continue;
    if (degree_snapshot[body.id] >= config.base_degree_target) continue;
    if (!rng.bernoulli(config.base_increase_prob)) continue;
    body.radius = clamp_radius(body.radius + scale * rng.uniform(), state.world);
    changed = true;
  }
  if (changed) state.rebuild_adjacency();
}

void smart_step(SimState& state, std::vector<dqn::AgentLearner*>& learners_by_id,
                int t, const StrategyConfig& strategy, const dqn::LearnerConfig& learner,
                const hamiltonian::Coefficients& coeffs, Phase phase, Rng& rng) {
  (void)strategy;
  std::vector<int> order = active_ids(state);
  rng.shuffle(order);

  const double eps =
      phase == Phase::Pretrain ? dqn::epsilon(t, learner.t_max) : learner.epsilon_floor;
  const double scale =
      dqn::radius_step_scale(state.world.side_length, state.active_count());

  for (const int id : order) {
    dqn::AgentLearner& agent = *learners_by_id[static_cast<std::size_t>(id)];
    const dqn::Observation obs = dqn::observe(id, state);
    const neuralnet::VecOut q = neuralnet::forward(agent.net, obs.features());
    const dqn::Action action = dqn::select_action(q, eps, rng);

    const double magnitude = scale * rng.uniform();
    const double signed_step =
        action == dqn::Action::Increase ? magnitude : -magnitude;
    const geometry::AgentBody& body = state.bodies[static_cast<std::size_t>(id)];
    const double r_new = clamp_radius(body.radius + signed_step, state.world);

    const hamiltonian::RadiusDelta delta = hamiltonian::delta_h_radius(
        id, r_new, state.bodies, state.adj, state.distances, state.world,
        state.factors, coeffs);

#ifndef NDEBUG
    // Cross-check the incremental reward against a full recompute now and then.
    if (t % 200 == 0 && id == order.front()) {
      const double before = hamiltonian::total_hamiltonian(state.bodies, state.adj,
                                                           state.distances, coeffs);
      SimState probe = state;
      probe.apply_radius_change(id, r_new, delta.flips);
      const double after = hamiltonian::total_hamiltonian(probe.bodies, probe.adj,
                                                          probe.distances, coeffs);
      assert(std::abs(delta.total - (after - before)) <=
             1e-9 * (1.0 + std::abs(before)));
    }
#endif

    state.apply_radius_change(id, r_new, delta.flips);

    const double reward = learner.reward_scope == dqn::RewardScope::GlobalExact
                              ? -delta.total
                              : -delta.own;
    dqn::Transition transition;
    transition.s = obs;
    transition.a = action;
    transition.reward = reward;
    transition.s_next = dqn::observe(id, state);
    agent.last = transition;
    agent.has_transition = true;

    if (phase == Phase::Pretrain) {
      const neuralnet::VecOut q_next =
          neuralnet::forward(agent.net, transition.s_next.features());
      const double target = dqn::td_target(reward, learner.gamma, q_next);
      neuralnet::train_step(agent.net, agent.adam, obs.features(),
                            static_cast<int>(action), target, learner.lr_pretrain);
    } else {
      dqn::finetune_tick(agent.net, agent.adam, transition, t, learner);
    }
  }
  assert(state.adjacency_consistent());
}

std::vector<Request> gather_requests(SimState& state, const StrategyConfig& config) {
  std::vector<Request> requests;
  for (const geometry::AgentBody& body : state.bodies) {
    if (!body.active) continue;
    int within = 0;
    if (body.radius > state.world.distance_floor()) {
      for (const geometry::AgentBody& other : state.bodies) {
        if (!other.active || other.id == body.id) continue;
        if (state.distances(body.id, other.id) <= body.radius) ++within;
      }
    }
    const int wanted = std::max(
        config.request_min_degree,
        static_cast<int>(std::lround(config.request_degree_coefficient * within)));
    if (state.degree_by_id[body.id] < wanted)
      requests.push_back({body.id, body.position, body.radius});
  }
  return requests;
}

void process_requests(SimState& state, const std::vector<Request>& requests,
                      const hamiltonian::Coefficients& coeffs, Rng& rng) {
  if (requests.empty()) return;
  std::vector<int> receivers = active_ids(state);
  rng.shuffle(receivers);

  for (const int id : receivers) {
    const geometry::AgentBody& receiver = state.bodies[static_cast<std::size_t>(id)];
    double best_dh = 0.0;
    double best_radius = 0.0;
    int best_requester = -1;

    for (const Request& req : requests) {
      if (req.requester_id == id) continue;
      if (!state.bodies[static_cast<std::size_t>(req.requester_id)].active) continue;
      if (state.adj.linked_ids(id, req.requester_id)) continue;
      const double d = state.distances(id, req.requester_id);
      const double f = state.factor(id, req.requester_id);
      if (f <= 0.0) continue;                 // fully absorbing walls
      if (d > f * req.radius) continue;       // outside the requester's reach
      if (f * receiver.radius > d) continue;  // receiver reach is not the gap
      const double r_needed = required_radius(d, f);
      if (r_needed > state.world.radius_max()) continue;
      const double dh = hamiltonian::delta_h_request(
          state.degree_by_id[id], receiver.radius, r_needed, d, coeffs);
      if (dh < 0.0 && dh < best_dh) {
        best_dh = dh;
        best_radius = r_needed;
        best_requester = req.requester_id;
      }
    }

    if (best_requester < 0) continue;
    assert(best_dh < 0.0);
    const hamiltonian::RadiusDelta delta = hamiltonian::delta_h_radius(
        id, best_radius, state.bodies, state.adj, state.distances, state.world,
        state.factors, coeffs);
    state.apply_radius_change(id, best_radius, delta.flips);
    if (!state.adj.linked_ids(id, best_requester)) {
      // Acceptance completes the link by contract even when the radius was
      // already at the required value.
      state.adj.set_ids(id, best_requester, true);
      state.degree_by_id[id] += 1;
      state.degree_by_id[best_requester] += 1;
    }
  }
}

}  // namespace hamnet::strategies
