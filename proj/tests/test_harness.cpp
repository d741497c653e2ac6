#include "hamnet/harness.hpp"

#include "hamnet/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace hamnet;
using namespace hamnet::harness;

namespace {

ScenarioConfig base_scenario(std::uint64_t seed, int n = 30, int t_max = 20) {
  ScenarioConfig config;
  config.scenario = Scenario::Static;
  config.n_agents = n;
  config.rho = 0.51;
  config.coefficients = {-0.5, 0.2, 0.1, -0.5};
  config.strategy.kind = strategies::StrategyKind::Base;
  config.t_max = t_max;
  config.learner.t_max = t_max;
  config.seed = seed;
  return config;
}

std::string fresh_dir(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("config: side length from density") {
  ScenarioConfig config = base_scenario(1);
  config.n_agents = 100;
  config.rho = 0.51;
  CHECK(config.side() == doctest::Approx(std::sqrt(100.0 / 0.51)));
  config.side_length = 45.0;
  CHECK(config.side() == 45.0);
}

TEST_CASE("config: json round trip preserves every field") {
  ScenarioConfig config;
  config.scenario = Scenario::Obstacles;
  config.n_agents = 77;
  config.rho = 0.05;
  config.coefficients = {-0.5, 0.3, 1.0, -1000.0};
  config.strategy.kind = strategies::StrategyKind::Cooperative;
  config.strategy.request_min_degree = 3;
  config.learner.gamma = 0.95;
  config.learner.lr_pretrain = 5e-4;
  config.learner.output_activation = neuralnet::OutputActivation::Linear;
  config.t_max = 123;
  config.churn = ChurnConfig{150, 7, ChurnMode::Mixed};
  ObstaclesConfig obstacles;
  obstacles.grid = geometry::ObstacleGrid{6.0, 2.0, 0.5};
  obstacles.transmission_factor = 0.25;
  obstacles.attenuation_mode = geometry::AttenuationMode::PerObstacle;
  config.obstacles = obstacles;
  config.mobility = geometry::MobilityConfig{0.3, 0.6, false};
  config.seed = 99;
  config.weights_path = "w.txt";
  config.snapshot_every = 50;

  const ScenarioConfig parsed = parse_config(config_to_json(config));
  CHECK(config_to_json(parsed) == config_to_json(config));
  CHECK(parsed.scenario == Scenario::Obstacles);
  CHECK(parsed.churn->mode == ChurnMode::Mixed);
  CHECK(parsed.obstacles->attenuation_mode == geometry::AttenuationMode::PerObstacle);
  CHECK(parsed.learner.output_activation == neuralnet::OutputActivation::Linear);
  CHECK(parsed.strategy.kind == strategies::StrategyKind::Cooperative);
}

TEST_CASE("config: validation failures") {
  ScenarioConfig config = base_scenario(1);
  config.n_agents = 0;
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = base_scenario(1);
  config.rho.reset();
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
  config = base_scenario(1);
  config.churn = ChurnConfig{200, 500, ChurnMode::Remove};
  CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("missing weights file is an error for learning strategies") {
  ScenarioConfig config = base_scenario(3);
  config.strategy.kind = strategies::StrategyKind::Smart;
  config.weights_path = "";
  CHECK_THROWS_AS(run_scenario(config), std::invalid_argument);
  config.weights_path = "/nonexistent/weights.txt";
  CHECK_THROWS_AS(run_scenario(config), std::runtime_error);
}

TEST_CASE("run: one step produces exactly one metrics record") {
  ScenarioConfig config = base_scenario(4, 10, 1);
  const RunResult result = run_scenario(config);
  CHECK(result.series.size() == 1);
  CHECK(result.series[0].step == 1);
}

TEST_CASE("run: metrics row count equals t_max and placement stays in bounds") {
  ScenarioConfig config = base_scenario(5, 25, 40);
  config.scenario = Scenario::Moving;
  const std::string dir = fresh_dir("hamnet_run_rows");
  const RunResult result = run_scenario(config, dir);
  CHECK(result.series.size() == 40);

  const std::string csv = io::read_text_file(dir + "/metrics.csv");
  int lines = 0;
  for (const char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == 41);  // header + t_max rows
  CHECK(csv.rfind("step,connectivity_pct,total_H,energy,mean_reduced_radius,mean_degree",
                  0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("run: identical config and seed give byte-identical outputs") {
  ScenarioConfig config = base_scenario(6, 20, 30);
  config.scenario = Scenario::Moving;
  config.snapshot_every = 10;
  const std::string dir_a = fresh_dir("hamnet_det_a");
  const std::string dir_b = fresh_dir("hamnet_det_b");
  run_scenario(config, dir_a);
  run_scenario(config, dir_b);
  for (const char* name : {"metrics.csv", "summary.json", "agents_000010.csv",
                           "agents_000030.csv", "edges_000020.csv"}) {
    CAPTURE(name);
    CHECK(io::read_text_file(dir_a + "/" + name) ==
          io::read_text_file(dir_b + "/" + name));
  }
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("churn: count zero changes nothing") {
  ScenarioConfig config = base_scenario(7, 15, 5);
  Rng rng(7);
  SimState state = make_initial_state(config, rng);
  const int active_before = state.active_count();
  neuralnet::NetParams stored;
  churn_event(state, ChurnMode::Remove, 0, rng, stored, nullptr);
  CHECK(state.active_count() == active_before);
}

TEST_CASE("churn: removal deactivates and unlinks exactly count agents") {
  ScenarioConfig config = base_scenario(8, 30, 5);
  Rng rng(8);
  SimState state = make_initial_state(config, rng);
  for (auto& body : state.bodies) body.radius = 3.0;
  state.rebuild_adjacency();
  neuralnet::NetParams stored;
  churn_event(state, ChurnMode::Remove, 10, rng, stored, nullptr);
  CHECK(state.active_count() == 20);
  CHECK(state.adj.n == 20);
  for (const auto& body : state.bodies) {
    if (!body.active) CHECK(state.adj.id_to_row[body.id] == -1);
  }
}

TEST_CASE("churn: removal never empties the world") {
  ScenarioConfig config = base_scenario(9, 5, 5);
  Rng rng(9);
  SimState state = make_initial_state(config, rng);
  neuralnet::NetParams stored;
  churn_event(state, ChurnMode::Remove, 50, rng, stored, nullptr);
  CHECK(state.active_count() == 1);
}

TEST_CASE("churn: additions arrive with unit radius and the stored weights") {
  ScenarioConfig config = base_scenario(10, 12, 5);
  Rng rng(10);
  SimState state = make_initial_state(config, rng);
  Rng wrng(123);
  const neuralnet::NetParams stored = neuralnet::init_params(wrng);
  std::deque<dqn::AgentLearner> learners(12);
  churn_event(state, ChurnMode::Add, 4, rng, stored, &learners);
  CHECK(state.bodies.size() == 16);
  CHECK(state.active_count() == 16);
  CHECK(learners.size() == 16);
  for (std::size_t i = 12; i < 16; ++i) {
    CHECK(state.bodies[i].radius == 1.0);
    CHECK(state.bodies[i].active);
    CHECK(learners[i].net.w1 == stored.w1);
    CHECK(learners[i].adam.t == 0);
  }
}

TEST_CASE("ensemble: size one equals the single run window means") {
  ScenarioConfig config = base_scenario(11, 15, 30);
  const RunSummary summary = ensemble(config, 1);
  const RunResult run = run_scenario(config);
  double conn = 0.0;
  const int window = std::min(kSummaryWindow, static_cast<int>(run.series.size()));
  for (std::size_t i = run.series.size() - static_cast<std::size_t>(window);
       i < run.series.size(); ++i)
    conn += run.series[i].connectivity_pct;
  conn /= window;
  CHECK(summary.connectivity_pct.mean == doctest::Approx(conn));
  CHECK(summary.connectivity_pct.std_dev == 0.0);
  CHECK(summary.ensemble_size == 1);
}

TEST_CASE("ensemble: doubling the run count reproduces the first half") {
  ScenarioConfig config = base_scenario(12, 12, 15);
  const std::vector<RunResult> four = ensemble_runs(config, 4, "", nullptr, 2);
  const std::vector<RunResult> eight = ensemble_runs(config, 8, "", nullptr, 2);
  for (int i = 0; i < 4; ++i) {
    REQUIRE(four[static_cast<std::size_t>(i)].series.size() ==
            eight[static_cast<std::size_t>(i)].series.size());
    for (std::size_t s = 0; s < four[static_cast<std::size_t>(i)].series.size(); ++s) {
      REQUIRE(four[static_cast<std::size_t>(i)].series[s].total_h ==
              eight[static_cast<std::size_t>(i)].series[s].total_h);
      REQUIRE(four[static_cast<std::size_t>(i)].series[s].connectivity_pct ==
              eight[static_cast<std::size_t>(i)].series[s].connectivity_pct);
    }
  }
}

TEST_CASE("summary json carries the strategy, stats, and config echo") {
  ScenarioConfig config = base_scenario(13, 10, 10);
  const RunSummary summary = ensemble(config, 2);
  const nlohmann::json j = summary_to_json(config, summary);
  CHECK(j.at("version").get<std::string>() == std::string(kVersion));
  CHECK(j.at("ensemble_size").get<int>() == 2);
  CHECK(j.at("strategies").contains("base"));
  CHECK(j.at("strategies").at("base").at("connectivity_pct").contains("mean"));
  CHECK(j.at("config").at("n").get<int>() == 10);
}

TEST_CASE("snapshot files expose agents and edges for re-rendering") {
  ScenarioConfig config = base_scenario(14, 8, 10);
  config.snapshot_every = 5;
  const std::string dir = fresh_dir("hamnet_snapshots");
  run_scenario(config, dir);
  CHECK(std::filesystem::exists(dir + "/agents_000005.csv"));
  CHECK(std::filesystem::exists(dir + "/agents_000010.csv"));
  CHECK(std::filesystem::exists(dir + "/edges_000010.csv"));
  const std::string agents = io::read_text_file(dir + "/agents_000010.csv");
  CHECK(agents.rfind("id,x,y,radius,degree,active", 0) == 0);
  const std::string edges = io::read_text_file(dir + "/edges_000010.csv");
  CHECK(edges.rfind("id_a,id_b,distance", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("density sweep: per-density ensembles with derived side lengths") {
  ScenarioConfig config = base_scenario(16, 20, 10);
  config.scenario = Scenario::DensitySweep;
  const std::string dir = fresh_dir("hamnet_sweep");
  const auto table = density_sweep(config, {0.5, 0.1}, dir, 2, 2);
  REQUIRE(table.size() == 2);
  CHECK(table[0].first == 0.5);
  // Same agents, same radii: the sparser world has fewer links.
  CHECK(table[0].second.mean_degree.mean >= table[1].second.mean_degree.mean);
  CHECK(std::filesystem::exists(dir + "/sweep_summary.json"));
  CHECK(std::filesystem::exists(dir + "/rho_0.5/summary.json"));
  std::filesystem::remove_all(dir);

  CHECK_THROWS_AS(density_sweep(config, {0.005}, "", 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(density_sweep(config, {1.5}, "", 1, 1), std::invalid_argument);
}

TEST_CASE("three-dimensional worlds run end to end") {
  ScenarioConfig config = base_scenario(17, 30, 25);
  config.scenario = Scenario::Moving;
  config.dimension = 3;
  config.rho = 0.2;  // agents per unit volume
  config.snapshot_every = 25;
  const std::string dir = fresh_dir("hamnet_3d");
  const RunResult result = run_scenario(config, dir);
  CHECK(result.series.size() == 25);
  const std::string agents = io::read_text_file(dir + "/agents_000025.csv");
  CHECK(agents.rfind("id,x,y,z,radius,degree,active", 0) == 0);
  CHECK(config.side() == doctest::Approx(std::cbrt(30.0 / 0.2)));
  std::filesystem::remove_all(dir);
}

TEST_CASE("pretraining variant strips churn, obstacles, and requests") {
  ScenarioConfig config = base_scenario(15);
  config.scenario = Scenario::Obstacles;
  config.strategy.kind = strategies::StrategyKind::Cooperative;
  config.churn = ChurnConfig{};
  config.obstacles = ObstaclesConfig{};
  config.learner.t_max = 77;
  const ScenarioConfig pre = pretraining_variant(config);
  CHECK(!pre.churn);
  CHECK(!pre.obstacles);
  CHECK(pre.strategy.kind == strategies::StrategyKind::Smart);
  CHECK(pre.scenario == Scenario::Moving);
  CHECK(pre.t_max == 77);
}

}  // TEST_SUITE
