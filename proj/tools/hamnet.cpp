// Command-line front end: pretraining, single runs, ensembles, and density
// sweeps over JSON scenario configs.

#include "hamnet/dqn.hpp"
#include "hamnet/harness.hpp"
#include "hamnet/io.hpp"
#include "hamnet/neuralnet.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<double> parse_rho_list(const std::string& text) {
  std::vector<double> rhos;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) rhos.push_back(std::stod(item));
  }
  return rhos;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-organized transmission-range control simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path, out_dir, weights_path, rho_list;
  int runs = 20;
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;

  CLI::App* pretrain = app.add_subcommand("pretrain", "train shared weights for a scenario");
  pretrain->add_option("--config", config_path, "scenario config (JSON)")->required();
  pretrain->add_option("--out", out_path, "output weights file")->required();
  pretrain->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });

  CLI::App* run = app.add_subcommand("run", "one seeded simulation run");
  run->add_option("--config", config_path, "scenario config (JSON)")->required();
  run->add_option("--weights", weights_path, "pretrained weights file");
  run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });
  run->add_option("--out-dir", out_dir, "output directory")->required();

  CLI::App* ens = app.add_subcommand("ensemble", "independent seeded runs plus a summary");
  ens->add_option("--config", config_path, "scenario config (JSON)")->required();
  ens->add_option("--weights", weights_path, "pretrained weights file");
  ens->add_option("--runs", runs, "ensemble size");
  ens->add_option("--threads", threads, "worker threads (default: hardware)");
  ens->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });
  ens->add_option("--out-dir", out_dir, "output directory")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "density sweep with per-density ensembles");
  sweep->add_option("--config", config_path, "scenario config (JSON)")->required();
  sweep->add_option("--rho", rho_list, "comma-separated densities")->required();
  sweep->add_option("--runs", runs, "ensemble size per density");
  sweep->add_option("--threads", threads, "worker threads (default: hardware)");
  sweep->add_option("--out-dir", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    hamnet::harness::ScenarioConfig config = hamnet::harness::load_config(config_path);
    if (seed_given) config.seed = seed;
    if (!weights_path.empty()) config.weights_path = weights_path;

    if (app.got_subcommand(pretrain)) {
      hamnet::Rng rng(config.seed);
      const hamnet::neuralnet::NetParams params = hamnet::dqn::pretrain(config, rng);
      hamnet::neuralnet::save_params(params, out_path);
      std::printf("wrote %s\n", out_path.c_str());
    } else if (app.got_subcommand(run)) {
      hamnet::harness::run_scenario(config, out_dir);
      std::printf("wrote %s/metrics.csv\n", out_dir.c_str());
    } else if (app.got_subcommand(ens)) {
      hamnet::harness::ensemble(config, runs, out_dir, nullptr, threads);
      std::printf("wrote %s/summary.json\n", out_dir.c_str());
    } else if (app.got_subcommand(sweep)) {
      const std::vector<double> rhos = parse_rho_list(rho_list);
      if (rhos.empty()) throw std::invalid_argument("sweep: empty rho list");
      hamnet::harness::density_sweep(config, rhos, out_dir, runs, threads);
      std::printf("wrote %s/sweep_summary.json\n", out_dir.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
