#pragma once

#include "hamnet/dqn.hpp"
#include "hamnet/hamiltonian.hpp"
#include "hamnet/rng.hpp"
#include "hamnet/sim_state.hpp"

#include <vector>

namespace hamnet::strategies {

enum class StrategyKind { Base, Smart, Cooperative };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::Base;
  int base_degree_target = 5;
  double base_increase_prob = 0.5;
  double request_degree_coefficient = 0.5;
  int request_min_degree = 2;
};

// Location broadcast of an under-connected agent.
struct Request {
  int requester_id = 0;
  Vec position;
  double radius = 0.0;
};

// Random growth toward the degree target; radii never shrink.
void base_step(SimState& state, const StrategyConfig& config, Rng& rng);

enum class Phase { Pretrain, Decision };

// One DQN step for every active agent in shuffled order: observe, act,
// apply the radius move with its exact link flips, reward with -dH, then
// train (every step in pretraining, on the finetune cadence otherwise).
void smart_step(SimState& state, std::vector<dqn::AgentLearner*>& learners_by_id,
                int t, const StrategyConfig& strategy, const dqn::LearnerConfig& learner,
                const hamiltonian::Coefficients& coeffs, Phase phase, Rng& rng);

// Agents whose degree trails the local density issue location broadcasts.
std::vector<Request> gather_requests(SimState& state, const StrategyConfig& config);

// Receivers accept the best Hamiltonian-reducing request by growing their
// radius to cover the requester; applied sequentially in shuffled order.
void process_requests(SimState& state, const std::vector<Request>& requests,
                      const hamiltonian::Coefficients& coeffs, Rng& rng);

}  // namespace hamnet::strategies
