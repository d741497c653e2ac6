#pragma once

#include "hamnet/dqn.hpp"
#include "hamnet/strategies.hpp"

#include <json.hpp>

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hamnet::harness {

inline constexpr const char* kVersion = "hamnet 1.0.0";

enum class Scenario { Static, Moving, DensitySweep, Churn, Obstacles };
enum class ChurnMode { Remove, Add, Mixed };

struct ChurnConfig {
  int period = 200;
  int count = 10;
  ChurnMode mode = ChurnMode::Remove;
};

struct ObstaclesConfig {
  std::optional<geometry::ObstacleGrid> grid;  // defaults derived from L
  double transmission_factor = 0.5;
  geometry::AttenuationMode attenuation_mode =
      geometry::AttenuationMode::OncePerBlockedSegment;
  bool constrain_to_streets = true;
};

struct ScenarioConfig {
  Scenario scenario = Scenario::Static;
  int n_agents = 100;
  std::optional<double> rho;
  std::optional<double> side_length;
  int dimension = 2;
  hamiltonian::Coefficients coefficients;
  strategies::StrategyConfig strategy;
  dqn::LearnerConfig learner;
  int t_max = 1000;
  std::optional<ChurnConfig> churn;
  std::optional<ObstaclesConfig> obstacles;
  std::optional<geometry::MobilityConfig> mobility;
  std::map<double, hamiltonian::Coefficients> sweep_coefficients;
  std::uint64_t seed = 1;
  std::string weights_path;
  int snapshot_every = 100;

  double side() const;
  bool moving() const { return scenario != Scenario::Static; }
  geometry::WorldConfig world() const;
  void validate() const;
};

ScenarioConfig parse_config(const nlohmann::json& j);
nlohmann::json config_to_json(const ScenarioConfig& config);
ScenarioConfig load_config(const std::string& path);

// The training phase runs in the same world but without churn, obstacles, or
// cooperative requests.
ScenarioConfig pretraining_variant(const ScenarioConfig& config);

// N agents placed uniformly (streets only when movement is constrained),
// unit radius, fresh drift directions.
SimState make_initial_state(const ScenarioConfig& config, Rng& rng);

struct RunResult {
  std::vector<topology::MetricsRecord> series;
  std::vector<int> churn_steps;
  std::vector<ChurnMode> churn_kinds;
};

// One seeded simulation. Writes metrics.csv, snapshots, and summary.json
// under out_dir when given; `pretrained` overrides the weights file.
RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir = "",
                       const neuralnet::NetParams* pretrained = nullptr);

// Scheduled removal or arrival of agents; arrivals start from the stored
// pretrained weights. `learners` may be null for the base strategy. Returns
// the mode actually applied (Mixed resolves to a coin flip).
ChurnMode churn_event(SimState& state, ChurnMode mode, int count, Rng& rng,
                      const neuralnet::NetParams& stored,
                      std::deque<dqn::AgentLearner>* learners);

struct MetricStat {
  double mean = 0.0;
  double std_dev = 0.0;
};

struct RunSummary {
  MetricStat connectivity_pct;
  MetricStat total_h;
  MetricStat energy;
  MetricStat mean_reduced_radius;
  MetricStat mean_radius;
  MetricStat mean_degree;
  double connectivity_step_std = 0.0;  // within-run fluctuation, ensemble mean
  int ensemble_size = 0;
  int window = 0;
};

inline constexpr int kSummaryWindow = 100;

RunSummary summarize(const std::vector<RunResult>& results, double side_length,
                     int window = kSummaryWindow);

// Independent seeds master+i, optionally in parallel; per-run outputs land in
// out_dir/run_XX.
std::vector<RunResult> ensemble_runs(const ScenarioConfig& config, int n_runs,
                                     const std::string& out_dir = "",
                                     const neuralnet::NetParams* pretrained = nullptr,
                                     int threads = 0);

RunSummary ensemble(const ScenarioConfig& config, int n_runs,
                    const std::string& out_dir = "",
                    const neuralnet::NetParams* pretrained = nullptr,
                    int threads = 0);

// Per-density ensembles with L = sqrt(N / rho); pretrains per density when no
// weights file is configured.
std::vector<std::pair<double, RunSummary>> density_sweep(
    const ScenarioConfig& config, const std::vector<double>& rhos,
    const std::string& out_dir, int n_runs, int threads = 0);

nlohmann::json summary_to_json(const ScenarioConfig& config, const RunSummary& summary);

}  // namespace hamnet::harness
