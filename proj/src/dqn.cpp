#include "hamnet/dqn.hpp"

#include "hamnet/harness.hpp"
#include "hamnet/strategies.hpp"

namespace hamnet::dqn {

Observation observe(int id, const SimState& state) {
  const geometry::AgentBody& agent = state.bodies[static_cast<std::size_t>(id)];
  if (!agent.active) throw std::invalid_argument("observe: inactive agent");

  const int n_active = state.active_count();
  const double side = state.world.side_length;
  const int dim = state.world.dimension;

  Observation obs;
  obs.reduced_radius = agent.radius / side;
  obs.degree_fraction =
      static_cast<double>(state.degree_by_id[id]) / static_cast<double>(n_active);

  const double r = agent.radius;
  if (r > state.world.distance_floor()) {
    int within = 0;
    for (const geometry::AgentBody& other : state.bodies) {
      if (!other.active || other.id == id) continue;
      if (state.distances(id, other.id) <= r) ++within;
    }
    const double rho_global =
        static_cast<double>(n_active) / std::pow(side, static_cast<double>(dim));
    const double ball = dim == 2 ? Rng::pi() * r * r
                                 : 4.0 / 3.0 * Rng::pi() * r * r * r;
    obs.local_density_ratio = static_cast<double>(within) / (ball * rho_global);
  }
  return obs;
}

Action select_action(const neuralnet::VecOut& q, double eps, Rng& rng) {
  if (eps > 0.0 && rng.uniform() < eps)
    return rng.uniform_int(2) == 0 ? Action::Increase : Action::Decrease;
  return q[0] >= q[1] ? Action::Increase : Action::Decrease;
}

void finetune_tick(neuralnet::NetParams& net, neuralnet::AdamState& adam,
                   const Transition& transition, int t, const LearnerConfig& config) {
  if (t % config.finetune_every != 0) return;
  if (config.lr_finetune <= 0.0) return;
  const neuralnet::VecOut q_next = neuralnet::forward(net, transition.s_next.features());
  const double target = td_target(transition.reward, config.gamma, q_next);
  neuralnet::train_step(net, adam, transition.s.features(),
                        static_cast<int>(transition.a), target, config.lr_finetune);
}

neuralnet::NetParams pretrain(const harness::ScenarioConfig& scenario, Rng& rng) {
  harness::ScenarioConfig config = harness::pretraining_variant(scenario);
  config.learner.validate();

  SimState state = harness::make_initial_state(config, rng);

  neuralnet::NetParams shared =
      neuralnet::init_params(rng, config.learner.output_activation);
  neuralnet::AdamState adam;
  dqn::AgentLearner learner;
  learner.net = shared;
  learner.adam = adam;

  std::vector<AgentLearner*> by_id(state.bodies.size(), &learner);
  const bool moving = config.world().mobility.step_length > 0.0;

  for (int t = 0; t < config.learner.t_max; ++t) {
    if (moving) {
      geometry::step_mobility(state.bodies, state.world, rng);
      state.refresh_geometry();
    }
    strategies::smart_step(state, by_id, t, config.strategy, config.learner,
                           config.coefficients, strategies::Phase::Pretrain, rng);
  }
  return learner.net;
}

}  // namespace hamnet::dqn
