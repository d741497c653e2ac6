#include "hamnet/harness.hpp"

#include "hamnet/io.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hamnet::harness {

using nlohmann::json;

double ScenarioConfig::side() const {
  if (side_length) return *side_length;
  if (!rho) throw std::invalid_argument("config: either rho or side_length is required");
  const double n = static_cast<double>(n_agents);
  return dimension == 2 ? std::sqrt(n / *rho) : std::cbrt(n / *rho);
}

geometry::WorldConfig ScenarioConfig::world() const {
  const double length = side();
  geometry::WorldConfig w;
  w.dimension = dimension;
  w.side_length = length;
  if (obstacles) {
    if (obstacles->grid) {
      w.obstacle_grid = *obstacles->grid;
    } else {
      w.obstacle_grid =
          geometry::ObstacleGrid{0.15 * length, 0.05 * length, 0.0};
    }
    w.transmission_factor = obstacles->transmission_factor;
    w.attenuation_mode = obstacles->attenuation_mode;
    w.mobility.constrain_to_streets = obstacles->constrain_to_streets;
  }
  if (moving()) {
    w.mobility.step_length = mobility ? mobility->step_length : 0.01 * length;
    w.mobility.drift_fraction = mobility ? mobility->drift_fraction : 0.7;
  } else {
    w.mobility.step_length = 0.0;
  }
  return w;
}

void ScenarioConfig::validate() const {
  if (n_agents < 1) throw std::invalid_argument("config: n must be >= 1");
  if (t_max < 1) throw std::invalid_argument("config: t_max must be >= 1");
  if (rho && !(*rho > 0.0)) throw std::invalid_argument("config: rho must be positive");
  if (snapshot_every < 1)
    throw std::invalid_argument("config: snapshot_every must be >= 1");
  if (churn) {
    if (churn->period < 1) throw std::invalid_argument("config: churn period must be >= 1");
    if (churn->count < 0 || churn->count > n_agents)
      throw std::invalid_argument("config: churn count must lie in [0, n]");
  }
  if (strategy.base_increase_prob < 0.0 || strategy.base_increase_prob > 1.0)
    throw std::invalid_argument("config: base_increase_prob must lie in [0, 1]");
  if (strategy.base_degree_target < 1)
    throw std::invalid_argument("config: base_degree_target must be >= 1");
  learner.validate();
  world().validate();
}

namespace {

template <class Enum, std::size_t N>
using NameTable = std::array<std::pair<const char*, Enum>, N>;

template <class Enum, std::size_t N>
Enum parse_enum(const std::string& text, const NameTable<Enum, N>& table,
                const char* what) {
  for (const auto& [name, value] : table)
    if (text == name) return value;
  throw std::invalid_argument(std::string("config: unknown ") + what + " '" + text + "'");
}

template <class Enum, std::size_t N>
std::string enum_name(Enum v, const NameTable<Enum, N>& table) {
  for (const auto& [name, value] : table)
    if (v == value) return name;
  return "?";
}

constexpr NameTable<Scenario, 5> kScenarioNames{{{"static", Scenario::Static},
                                                 {"moving", Scenario::Moving},
                                                 {"density-sweep", Scenario::DensitySweep},
                                                 {"churn", Scenario::Churn},
                                                 {"obstacles", Scenario::Obstacles}}};

constexpr NameTable<strategies::StrategyKind, 3> kStrategyNames{
    {{"base", strategies::StrategyKind::Base},
     {"smart", strategies::StrategyKind::Smart},
     {"cooperative", strategies::StrategyKind::Cooperative}}};

constexpr NameTable<ChurnMode, 3> kChurnNames{
    {{"remove", ChurnMode::Remove}, {"add", ChurnMode::Add}, {"mixed", ChurnMode::Mixed}}};

constexpr NameTable<geometry::AttenuationMode, 2> kAttenuationNames{
    {{"once-per-blocked-segment", geometry::AttenuationMode::OncePerBlockedSegment},
     {"per-obstacle-multiplicative", geometry::AttenuationMode::PerObstacle}}};

constexpr NameTable<dqn::RewardScope, 2> kRewardScopeNames{
    {{"global-exact", dqn::RewardScope::GlobalExact},
     {"own-node", dqn::RewardScope::OwnNode}}};

constexpr NameTable<neuralnet::OutputActivation, 3> kActivationNames{
    {{"scaled-elu", neuralnet::OutputActivation::ScaledElu},
     {"elu", neuralnet::OutputActivation::Elu},
     {"linear", neuralnet::OutputActivation::Linear}}};

hamiltonian::Coefficients parse_coefficients(const json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("config: coefficients must be an array of four numbers");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

json coefficients_to_json(const hamiltonian::Coefficients& c) {
  return json::array({c.alpha1, c.alpha2, c.alpha3, c.alpha4});
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  ScenarioConfig c;
  c.scenario = parse_enum(j.value("scenario", "static"), kScenarioNames, "scenario");
  c.n_agents = j.value("n", 100);
  if (j.contains("rho")) c.rho = j.at("rho").get<double>();
  if (j.contains("side_length")) c.side_length = j.at("side_length").get<double>();
  c.dimension = j.value("dimension", 2);
  if (j.contains("coefficients")) c.coefficients = parse_coefficients(j.at("coefficients"));
  if (j.contains("strategy")) {
    const json& s = j.at("strategy");
    c.strategy.kind = parse_enum(s.value("kind", "base"), kStrategyNames, "strategy");
    c.strategy.base_degree_target = s.value("base_degree_target", 5);
    c.strategy.base_increase_prob = s.value("base_increase_prob", 0.5);
    c.strategy.request_degree_coefficient = s.value("request_degree_coefficient", 0.5);
    c.strategy.request_min_degree = s.value("request_min_degree", 2);
  }
  c.t_max = j.value("t_max", 1000);
  if (j.contains("learner")) {
    const json& l = j.at("learner");
    c.learner.gamma = l.value("gamma", 0.98);
    c.learner.lr_pretrain = l.value("lr_pretrain", 1e-3);
    c.learner.lr_finetune = l.value("lr_finetune", 1e-4);
    c.learner.finetune_every = l.value("finetune_every", 10);
    c.learner.t_max = l.value("t_max", c.t_max);
    c.learner.epsilon_floor = l.value("epsilon_floor", 0.01);
    c.learner.reward_scope = parse_enum(l.value("reward_scope", "global-exact"),
                                        kRewardScopeNames, "reward scope");
    c.learner.output_activation = parse_enum(l.value("output_activation", "scaled-elu"),
                                             kActivationNames, "output activation");
  } else {
    c.learner.t_max = c.t_max;
  }
  if (j.contains("churn")) {
    const json& ch = j.at("churn");
    ChurnConfig churn;
    churn.period = ch.value("period", 200);
    churn.count = ch.value("count", 10);
    churn.mode = parse_enum(ch.value("mode", "remove"), kChurnNames, "churn mode");
    c.churn = churn;
  }
  if (j.contains("obstacles")) {
    const json& ob = j.at("obstacles");
    ObstaclesConfig obstacles;
    if (ob.contains("block_side") || ob.contains("street_width")) {
      geometry::ObstacleGrid grid;
      grid.block_side = ob.at("block_side").get<double>();
      grid.street_width = ob.at("street_width").get<double>();
      grid.origin = ob.value("origin", 0.0);
      obstacles.grid = grid;
    }
    obstacles.transmission_factor = ob.value("transmission_factor", 0.5);
    obstacles.attenuation_mode =
        parse_enum(ob.value("attenuation_mode", "once-per-blocked-segment"),
                   kAttenuationNames, "attenuation mode");
    obstacles.constrain_to_streets = ob.value("constrain_to_streets", true);
    c.obstacles = obstacles;
  }
  if (j.contains("mobility")) {
    const json& m = j.at("mobility");
    geometry::MobilityConfig mob;
    mob.step_length = m.value("step_length", 0.01 * c.side());
    mob.drift_fraction = m.value("drift_fraction", 0.7);
    c.mobility = mob;
  }
  if (j.contains("sweep_coefficients")) {
    for (const json& entry : j.at("sweep_coefficients"))
      c.sweep_coefficients[entry.at("rho").get<double>()] =
          parse_coefficients(entry.at("coefficients"));
  }
  c.seed = j.value("seed", std::uint64_t{1});
  c.weights_path = j.value("weights_path", "");
  c.snapshot_every = j.value("snapshot_every", 100);
  return c;
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = enum_name(c.scenario, kScenarioNames);
  j["n"] = c.n_agents;
  if (c.rho) j["rho"] = *c.rho;
  if (c.side_length) j["side_length"] = *c.side_length;
  j["dimension"] = c.dimension;
  j["coefficients"] = coefficients_to_json(c.coefficients);
  j["strategy"] = {{"kind", enum_name(c.strategy.kind, kStrategyNames)},
                   {"base_degree_target", c.strategy.base_degree_target},
                   {"base_increase_prob", c.strategy.base_increase_prob},
                   {"request_degree_coefficient", c.strategy.request_degree_coefficient},
                   {"request_min_degree", c.strategy.request_min_degree}};
  j["learner"] = {{"gamma", c.learner.gamma},
                  {"lr_pretrain", c.learner.lr_pretrain},
                  {"lr_finetune", c.learner.lr_finetune},
                  {"finetune_every", c.learner.finetune_every},
                  {"t_max", c.learner.t_max},
                  {"epsilon_floor", c.learner.epsilon_floor},
                  {"reward_scope", enum_name(c.learner.reward_scope, kRewardScopeNames)},
                  {"output_activation",
                   enum_name(c.learner.output_activation, kActivationNames)}};
  j["t_max"] = c.t_max;
  if (c.churn)
    j["churn"] = {{"period", c.churn->period},
                  {"count", c.churn->count},
                  {"mode", enum_name(c.churn->mode, kChurnNames)}};
  if (c.obstacles) {
    json ob;
    if (c.obstacles->grid) {
      ob["block_side"] = c.obstacles->grid->block_side;
      ob["street_width"] = c.obstacles->grid->street_width;
      ob["origin"] = c.obstacles->grid->origin;
    }
    ob["transmission_factor"] = c.obstacles->transmission_factor;
    ob["attenuation_mode"] = enum_name(c.obstacles->attenuation_mode, kAttenuationNames);
    ob["constrain_to_streets"] = c.obstacles->constrain_to_streets;
    j["obstacles"] = ob;
  }
  if (c.mobility)
    j["mobility"] = {{"step_length", c.mobility->step_length},
                     {"drift_fraction", c.mobility->drift_fraction}};
  if (!c.sweep_coefficients.empty()) {
    json arr = json::array();
    for (const auto& [rho, coeffs] : c.sweep_coefficients)
      arr.push_back({{"rho", rho}, {"coefficients", coefficients_to_json(coeffs)}});
    j["sweep_coefficients"] = arr;
  }
  j["seed"] = c.seed;
  j["weights_path"] = c.weights_path;
  j["snapshot_every"] = c.snapshot_every;
  return j;
}

ScenarioConfig load_config(const std::string& path) {
  return parse_config(json::parse(io::read_text_file(path)));
}

ScenarioConfig pretraining_variant(const ScenarioConfig& config) {
  ScenarioConfig pre = config;
  pre.churn.reset();
  pre.obstacles.reset();
  pre.strategy.kind = strategies::StrategyKind::Smart;
  pre.scenario = config.moving() ? Scenario::Moving : Scenario::Static;
  pre.t_max = pre.learner.t_max;
  return pre;
}

SimState make_initial_state(const ScenarioConfig& config, Rng& rng) {
  SimState state;
  state.world = config.world();
  state.world.validate();
  state.bodies.reserve(static_cast<std::size_t>(config.n_agents));
  for (int i = 0; i < config.n_agents; ++i) {
    geometry::AgentBody body;
    body.id = i;
    body.position = geometry::random_position(state.world, rng);
    body.radius = 1.0;
    body.drift_direction = rng.unit_vector(state.world.dimension);
    body.active = true;
    state.bodies.push_back(std::move(body));
  }
  state.refresh_geometry();
  return state;
}

ChurnMode churn_event(SimState& state, ChurnMode mode, int count, Rng& rng,
                      const neuralnet::NetParams& stored,
                      std::deque<dqn::AgentLearner>* learners) {
  if (mode == ChurnMode::Mixed)
    mode = rng.bernoulli(0.5) ? ChurnMode::Remove : ChurnMode::Add;
  if (count <= 0) return mode;

  if (mode == ChurnMode::Remove) {
    std::vector<int> ids;
    for (const geometry::AgentBody& body : state.bodies)
      if (body.active) ids.push_back(body.id);
    // Never empty the world entirely.
    const int n_remove = std::min(count, static_cast<int>(ids.size()) - 1);
    rng.shuffle(ids);
    for (int i = 0; i < n_remove; ++i)
      state.bodies[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].active =
          false;
  } else {
    for (int i = 0; i < count; ++i) {
      geometry::AgentBody body;
      body.id = static_cast<int>(state.bodies.size());
      body.position = geometry::random_position(state.world, rng);
      body.radius = 1.0;
      body.drift_direction = rng.unit_vector(state.world.dimension);
      body.active = true;
      state.bodies.push_back(std::move(body));
      if (learners) {
        dqn::AgentLearner fresh;
        fresh.net = stored;
        learners->push_back(std::move(fresh));
      }
    }
  }
  state.refresh_geometry();
  return mode;
}

namespace {

void write_metrics_csv(const std::string& path,
                       const std::vector<topology::MetricsRecord>& series) {
  std::ostringstream out;
  out << "step,connectivity_pct,total_H,energy,mean_reduced_radius,mean_degree\n";
  for (const topology::MetricsRecord& rec : series) {
    out << rec.step << ',' << io::format_double(rec.connectivity_pct) << ','
        << io::format_double(rec.total_h) << ',' << io::format_double(rec.energy) << ','
        << io::format_double(rec.mean_reduced_radius) << ','
        << io::format_double(rec.mean_degree) << '\n';
  }
  io::write_text_file(path, out.str());
}

void write_snapshot(const std::string& dir, int step, const SimState& state) {
  char agents_name[32], edges_name[32];
  std::snprintf(agents_name, sizeof(agents_name), "agents_%06d.csv", step);
  std::snprintf(edges_name, sizeof(edges_name), "edges_%06d.csv", step);

  std::ostringstream agents;
  const bool three_d = state.world.dimension == 3;
  agents << (three_d ? "id,x,y,z,radius,degree,active\n" : "id,x,y,radius,degree,active\n");
  for (const geometry::AgentBody& body : state.bodies) {
    agents << body.id;
    for (int c = 0; c < state.world.dimension; ++c)
      agents << ',' << io::format_double(body.position[c]);
    agents << ',' << io::format_double(body.radius) << ','
           << (body.active ? state.degree_by_id[body.id] : 0) << ','
           << (body.active ? 1 : 0) << '\n';
  }
  io::write_text_file(dir + "/" + agents_name, agents.str());

  std::ostringstream edges;
  edges << "id_a,id_b,distance\n";
  for (int ra = 0; ra < state.adj.n; ++ra) {
    for (int rb = ra + 1; rb < state.adj.n; ++rb) {
      if (!state.adj.bits(ra, rb)) continue;
      const int ia = state.adj.row_to_id[static_cast<std::size_t>(ra)];
      const int ib = state.adj.row_to_id[static_cast<std::size_t>(rb)];
      edges << ia << ',' << ib << ',' << io::format_double(state.distances(ia, ib))
            << '\n';
    }
  }
  io::write_text_file(dir + "/" + edges_name, edges.str());
}

double window_mean(const std::vector<double>& values, int window) {
  const int n = static_cast<int>(values.size());
  const int w = std::min(window, n);
  double sum = 0.0;
  for (int i = n - w; i < n; ++i) sum += values[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(w);
}

double window_std(const std::vector<double>& values, int window) {
  const int n = static_cast<int>(values.size());
  const int w = std::min(window, n);
  if (w < 2) return 0.0;
  const double mean = window_mean(values, window);
  double ss = 0.0;
  for (int i = n - w; i < n; ++i) {
    const double d = values[static_cast<std::size_t>(i)] - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(w - 1));
}

MetricStat across(const std::vector<double>& per_run) {
  MetricStat stat;
  const double n = static_cast<double>(per_run.size());
  for (double v : per_run) stat.mean += v;
  stat.mean /= n;
  if (per_run.size() > 1) {
    double ss = 0.0;
    for (double v : per_run) ss += (v - stat.mean) * (v - stat.mean);
    stat.std_dev = std::sqrt(ss / (n - 1.0));
  }
  return stat;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& config, const std::string& out_dir,
                       const neuralnet::NetParams* pretrained) {
  config.validate();
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  Rng rng(config.seed);
  SimState state = make_initial_state(config, rng);

  const bool learning = config.strategy.kind != strategies::StrategyKind::Base;
  neuralnet::NetParams stored;
  std::deque<dqn::AgentLearner> learners;
  std::vector<dqn::AgentLearner*> by_id;
  if (learning) {
    if (pretrained) {
      stored = *pretrained;
    } else {
      if (config.weights_path.empty())
        throw std::invalid_argument(
            "run_scenario: smart/cooperative strategies need a weights file");
      stored = neuralnet::load_params(config.weights_path);
    }
    stored.output_activation = config.learner.output_activation;
    for (int i = 0; i < config.n_agents; ++i) {
      dqn::AgentLearner agent;
      agent.net = stored;
      learners.push_back(std::move(agent));
    }
  }
  const auto sync_learner_index = [&] {
    by_id.resize(state.bodies.size());
    for (std::size_t i = 0; i < learners.size(); ++i) by_id[i] = &learners[i];
  };
  if (learning) sync_learner_index();

  RunResult result;
  result.series.reserve(static_cast<std::size_t>(config.t_max));

  for (int step = 1; step <= config.t_max; ++step) {
    if (config.moving()) {
      geometry::step_mobility(state.bodies, state.world, rng);
      state.refresh_geometry();
    }

    switch (config.strategy.kind) {
      case strategies::StrategyKind::Base:
        strategies::base_step(state, config.strategy, rng);
        break;
      case strategies::StrategyKind::Smart:
        strategies::smart_step(state, by_id, step, config.strategy, config.learner,
                               config.coefficients, strategies::Phase::Decision, rng);
        break;
      case strategies::StrategyKind::Cooperative: {
        strategies::smart_step(state, by_id, step, config.strategy, config.learner,
                               config.coefficients, strategies::Phase::Decision, rng);
        const std::vector<strategies::Request> requests =
            strategies::gather_requests(state, config.strategy);
        strategies::process_requests(state, requests, config.coefficients, rng);
        break;
      }
    }

    if (config.churn && step % config.churn->period == 0) {
      const ChurnMode applied =
          churn_event(state, config.churn->mode, config.churn->count, rng, stored,
                      learning ? &learners : nullptr);
      if (learning) sync_learner_index();
      result.churn_steps.push_back(step);
      result.churn_kinds.push_back(applied);
    }

    result.series.push_back(topology::compute_metrics(
        step, state.bodies, state.adj, config.coefficients, state.world.side_length));

    if (!out_dir.empty() && step % config.snapshot_every == 0)
      write_snapshot(out_dir, step, state);
  }

  if (!out_dir.empty()) {
    write_metrics_csv(out_dir + "/metrics.csv", result.series);
    const RunSummary summary = summarize({result}, state.world.side_length);
    io::write_text_file(out_dir + "/summary.json",
                        summary_to_json(config, summary).dump(2) + "\n");
  }
  return result;
}

RunSummary summarize(const std::vector<RunResult>& results, double side_length,
                     int window) {
  RunSummary summary;
  summary.ensemble_size = static_cast<int>(results.size());
  summary.window = window;
  if (results.empty()) return summary;

  std::vector<double> conn, total_h, energy, reduced_radius, degree, conn_std;
  for (const RunResult& run : results) {
    std::vector<double> c, h, e, r, k;
    c.reserve(run.series.size());
    for (const topology::MetricsRecord& rec : run.series) {
      c.push_back(rec.connectivity_pct);
      h.push_back(rec.total_h);
      e.push_back(rec.energy);
      r.push_back(rec.mean_reduced_radius);
      k.push_back(rec.mean_degree);
    }
    conn.push_back(window_mean(c, window));
    total_h.push_back(window_mean(h, window));
    energy.push_back(window_mean(e, window));
    reduced_radius.push_back(window_mean(r, window));
    degree.push_back(window_mean(k, window));
    conn_std.push_back(window_std(c, window));
  }
  summary.connectivity_pct = across(conn);
  summary.total_h = across(total_h);
  summary.energy = across(energy);
  summary.mean_reduced_radius = across(reduced_radius);
  summary.mean_radius = {summary.mean_reduced_radius.mean * side_length,
                         summary.mean_reduced_radius.std_dev * side_length};
  summary.mean_degree = across(degree);
  summary.connectivity_step_std = across(conn_std).mean;
  return summary;
}

std::vector<RunResult> ensemble_runs(const ScenarioConfig& config, int n_runs,
                                     const std::string& out_dir,
                                     const neuralnet::NetParams* pretrained,
                                     int threads) {
  if (n_runs < 1) throw std::invalid_argument("ensemble: n_runs must be >= 1");
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  if (threads <= 0)
    threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n_runs));

  std::vector<RunResult> results(static_cast<std::size_t>(n_runs));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto worker = [&] {
    for (int i = next.fetch_add(1); i < n_runs; i = next.fetch_add(1)) {
      try {
        ScenarioConfig run_config = config;
        run_config.seed = config.seed + static_cast<std::uint64_t>(i);
        std::string run_dir;
        if (!out_dir.empty()) {
          char name[16];
          std::snprintf(name, sizeof(name), "run_%02d", i);
          run_dir = out_dir + "/" + name;
        }
        results[static_cast<std::size_t>(i)] =
            run_scenario(run_config, run_dir, pretrained);
      } catch (...) {
        std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

RunSummary ensemble(const ScenarioConfig& config, int n_runs, const std::string& out_dir,
                    const neuralnet::NetParams* pretrained, int threads) {
  const std::vector<RunResult> results =
      ensemble_runs(config, n_runs, out_dir, pretrained, threads);
  const RunSummary summary = summarize(results, config.side());
  if (!out_dir.empty())
    io::write_text_file(out_dir + "/summary.json",
                        summary_to_json(config, summary).dump(2) + "\n");
  return summary;
}

std::vector<std::pair<double, RunSummary>> density_sweep(
    const ScenarioConfig& config, const std::vector<double>& rhos,
    const std::string& out_dir, int n_runs, int threads) {
  for (const double rho : rhos)
    if (rho < 0.01 || rho > 1.0)
      throw std::invalid_argument("sweep: rho values must lie in [0.01, 1]");

  std::vector<std::pair<double, RunSummary>> table;
  for (const double rho : rhos) {
    ScenarioConfig sub = config;
    sub.rho = rho;
    sub.side_length.reset();
    if (const auto it = config.sweep_coefficients.find(rho);
        it != config.sweep_coefficients.end())
      sub.coefficients = it->second;

    std::string rho_dir;
    if (!out_dir.empty()) {
      std::ostringstream name;
      name << out_dir << "/rho_" << io::format_double(rho);
      rho_dir = name.str();
      std::filesystem::create_directories(rho_dir);
    }

    if (sub.strategy.kind == strategies::StrategyKind::Base) {
      table.emplace_back(rho, ensemble(sub, n_runs, rho_dir, nullptr, threads));
      continue;
    }
    neuralnet::NetParams params;
    if (sub.weights_path.empty()) {
      Rng pre_rng(sub.seed);
      params = dqn::pretrain(sub, pre_rng);
      if (!rho_dir.empty()) neuralnet::save_params(params, rho_dir + "/weights.txt");
    } else {
      params = neuralnet::load_params(sub.weights_path);
    }
    table.emplace_back(rho, ensemble(sub, n_runs, rho_dir, &params, threads));
  }

  if (!out_dir.empty()) {
    json j;
    j["version"] = kVersion;
    json rows = json::array();
    for (const auto& [rho, summary] : table) {
      json row = summary_to_json(config, summary);
      row["rho"] = rho;
      rows.push_back(row);
    }
    j["sweep"] = rows;
    io::write_text_file(out_dir + "/sweep_summary.json", j.dump(2) + "\n");
  }
  return table;
}

nlohmann::json summary_to_json(const ScenarioConfig& config, const RunSummary& summary) {
  const auto stat = [](const MetricStat& s) {
    return json{{"mean", s.mean}, {"std", s.std_dev}};
  };
  json strategies_json;
  strategies_json[enum_name(config.strategy.kind, kStrategyNames)] = {
      {"connectivity_pct", stat(summary.connectivity_pct)},
      {"total_H", stat(summary.total_h)},
      {"energy", stat(summary.energy)},
      {"mean_reduced_radius", stat(summary.mean_reduced_radius)},
      {"mean_radius", stat(summary.mean_radius)},
      {"mean_degree", stat(summary.mean_degree)},
      {"connectivity_step_std", summary.connectivity_step_std}};
  return json{{"version", kVersion},
              {"ensemble_size", summary.ensemble_size},
              {"window", summary.window},
              {"strategies", strategies_json},
              {"config", config_to_json(config)}};
}

}  // namespace hamnet::harness
