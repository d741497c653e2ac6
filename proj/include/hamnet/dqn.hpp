#pragma once

#include "hamnet/neuralnet.hpp"
#include "hamnet/rng.hpp"
#include "hamnet/sim_state.hpp"

#include <stdexcept>

namespace hamnet::harness {
struct ScenarioConfig;
}

namespace hamnet::dqn {

enum class Action : int { Increase = 0, Decrease = 1 };

// Normalized local view of one agent: neighbour count over the count a
// uniform layout would put inside its radius, radius over the world side,
// and degree over the active population.
struct Observation {
  double local_density_ratio = 0.0;
  double reduced_radius = 0.0;
  double degree_fraction = 0.0;

  Vec3 features() const {
    return Vec3(local_density_ratio, reduced_radius, degree_fraction);
  }
};

struct Transition {
  Observation s;
  Action a = Action::Increase;
  double reward = 0.0;
  Observation s_next;
};

enum class RewardScope { GlobalExact, OwnNode };

struct LearnerConfig {
  double gamma = 0.98;
  double lr_pretrain = 1e-3;
  double lr_finetune = 1e-4;
  int finetune_every = 10;
  int t_max = 1000;
  double epsilon_floor = 0.01;
  RewardScope reward_scope = RewardScope::GlobalExact;
  neuralnet::OutputActivation output_activation = neuralnet::OutputActivation::ScaledElu;

  void validate() const {
    if (gamma < 0.0 || gamma > 1.0)
      throw std::invalid_argument("learner: gamma must lie in [0, 1]");
    if (lr_pretrain < 0.0 || lr_pretrain > 1.0 || lr_finetune < 0.0 || lr_finetune > 1.0)
      throw std::invalid_argument("learner: learning rates must lie in [0, 1]");
    if (finetune_every < 1)
      throw std::invalid_argument("learner: finetune_every must be >= 1");
    if (t_max < 0) throw std::invalid_argument("learner: t_max must be >= 0");
  }
};

// Linearly decaying exploration rate, zero from T_max/2 onward.
inline double epsilon(int t, int t_max) {
  return std::max(1.0 - static_cast<double>(t) / (static_cast<double>(t_max) / 2.0),
                  0.0);
}

// Magnitude scale of one radius move; the applied step is +/- scale * U(0,1).
inline double radius_step_scale(double side_length, int n_agents) {
  return 0.25 * std::sqrt(side_length * side_length / static_cast<double>(n_agents));
}

// Throws std::invalid_argument for an inactive agent.
Observation observe(int id, const SimState& state);

// Epsilon-greedy over the two action values; ties break toward Increase.
Action select_action(const neuralnet::VecOut& q, double eps, Rng& rng);

inline double td_target(double reward, double gamma, const neuralnet::VecOut& q_next) {
  return reward + gamma * q_next.maxCoeff();
}

// One decision-phase agent: a private network copy, its optimizer state, and
// the latest transition for fine-tuning.
struct AgentLearner {
  neuralnet::NetParams net;
  neuralnet::AdamState adam;
  Transition last;
  bool has_transition = false;
};

// Every `finetune_every` steps, one low-rate update on the latest transition.
void finetune_tick(neuralnet::NetParams& net, neuralnet::AdamState& adam,
                   const Transition& transition, int t, const LearnerConfig& config);

// The training phase: the boxed per-step, per-agent loop on one shared
// network. Returns the final parameters.
neuralnet::NetParams pretrain(const harness::ScenarioConfig& scenario, Rng& rng);

}  // namespace hamnet::dqn
