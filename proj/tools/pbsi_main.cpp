#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbsi/bound.hpp"
#include "pbsi/config.hpp"
#include "pbsi/experiment.hpp"

namespace {

using namespace pbsi;

// Sensor-instance flags shared by the single-sensor subcommands.
struct SensorCli {
  int battery_capacity = 15;
  int max_aocsi = 48;
  int max_aofbl = -1;  // -1: follow max_aocsi
  double weight = 1.0;
  double eta = 0.7;
  double xi = 0.7;
  std::string energy = "bernoulli";
  double lambda = 0.12;
  std::vector<int> support;
  std::vector<double> probs;

  void attach(CLI::App* cmd) {
    cmd->add_option("--battery-capacity", battery_capacity, "Battery capacity (units)");
    cmd->add_option("--max-aocsi", max_aocsi, "Age cost saturation cap");
    cmd->add_option("--max-aofbl", max_aofbl,
                    "Inferred-depletion age cap (default: --max-aocsi)");
    cmd->add_option("--weight", weight, "Cost weight");
    cmd->add_option("--eta", eta, "Request probability per slot");
    cmd->add_option("--xi", xi, "Transmission success probability");
    cmd->add_option("--energy", energy, "Energy model: bernoulli|poisson|table")
        ->check(CLI::IsMember({"bernoulli", "poisson", "table"}));
    cmd->add_option("--lambda", lambda, "Energy model parameter (mean rate)");
    cmd->add_option("--energy-support", support, "Table model support points")
        ->delimiter(',');
    cmd->add_option("--energy-probs", probs, "Table model probabilities")
        ->delimiter(',');
  }

  SensorParams params() const {
    SensorParams p;
    p.battery_capacity = battery_capacity;
    p.max_aocsi = max_aocsi;
    p.max_aofbl = max_aofbl < 0 ? max_aocsi : max_aofbl;
    p.weight = weight;
    p.request_prob = eta;
    p.channel_success = xi;
    if (energy == "bernoulli") p.energy = EnergyModel::bernoulli(lambda);
    else if (energy == "poisson") p.energy = EnergyModel::poisson(lambda);
    else p.energy = EnergyModel::table(support, probs);
    p.validate();
    return p;
  }
};

void emit(const std::string& out, const std::string& content) {
  if (out.empty())
    std::cout << content;
  else
    write_text_file(out, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Status-update control toolkit for energy-harvesting sensors"};
  app.require_subcommand(1);

  std::uint64_t seed = 1;
  long long episodes = 100;
  long long horizon = 10000;
  int workers = 0;
  std::string out;
  app.add_option("--seed", seed, "Root RNG seed")->capture_default_str();
  app.add_option("--episodes", episodes, "Episodes per policy")->capture_default_str();
  app.add_option("--horizon", horizon, "Slots per episode")->capture_default_str();
  app.add_option("--workers", workers, "Worker threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--out", out, "Output file (default: stdout)");
  app.fallthrough();

  // bound
  auto* cmd_bound = app.add_subcommand("bound", "Evaluate the closed-form cost bound");
  double b_lambda = 0.12, b_eta = 0.7, b_xi = 0.7;
  int b_cap = 48;
  cmd_bound->add_option("--lambda", b_lambda, "Clipped mean charging rate")
      ->capture_default_str();
  cmd_bound->add_option("--eta", b_eta, "Request probability")->capture_default_str();
  cmd_bound->add_option("--xi", b_xi, "Success probability")->capture_default_str();
  cmd_bound->add_option("--max-aocsi", b_cap, "Age cap")->capture_default_str();

  // policy-map
  auto* cmd_map = app.add_subcommand("policy-map",
                                     "CSV grid of threshold-policy actions");
  SensorCli map_sensor;
  map_sensor.attach(cmd_map);
  int map_delta_max = 0;
  cmd_map->add_option("--delta-max", map_delta_max,
                      "Grid age depth (default: --max-aocsi)");

  // post-update
  auto* cmd_post = app.add_subcommand(
      "post-update", "Solve the reduced post-update value recursion");
  SensorCli post_sensor;
  post_sensor.attach(cmd_post);
  int block_length = 0;
  cmd_post->add_option("--block-length", block_length,
                       "Slots per decision block (0 = capacity/lambda)");

  // solve-noiseless
  auto* cmd_no = app.add_subcommand(
      "solve-noiseless", "Exact average-cost solve of the inferred-state model");
  SensorCli no_sensor;
  no_sensor.attach(cmd_no);

  // solve-ebsi
  auto* cmd_ebsi = app.add_subcommand(
      "solve-ebsi", "Exact average-cost solve with the true battery observed");
  SensorCli ebsi_sensor;
  ebsi_sensor.attach(cmd_ebsi);

  // run
  auto* cmd_run = app.add_subcommand("run", "Run an experiment spec file");
  std::string spec_path;
  cmd_run->add_option("spec", spec_path, "Experiment spec file")->required();

  // oft-search
  auto* cmd_oft = app.add_subcommand(
      "oft-search", "Exhaustive scan over the two age thresholds");
  SensorCli oft_sensor;
  oft_sensor.attach(cmd_oft);
  long long eval_slots = 200000;
  cmd_oft->add_option("--eval-slots", eval_slots, "Evaluation slots per pair")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_bound->parsed()) {
      const double l0 = lambda0(b_eta, b_xi, b_cap);
      const double theta = theta_lower_bound(b_lambda, b_eta, b_xi, b_cap);
      std::printf("admissible_xi_min = %s\n",
                  format_double(1.0 / (b_cap - 0.5)).c_str());
      std::printf("lambda0 = %s\n", format_double(l0).c_str());
      std::printf("branch = %s\n",
                  b_lambda >= l0 ? "energy-sufficient" : "energy-limited");
      std::printf("theta = %s\n", format_double(theta).c_str());
    } else if (cmd_map->parsed()) {
      const SensorParams p = map_sensor.params();
      const CnContext ctx = make_cn_context(p);
      const int depth = map_delta_max > 0 ? map_delta_max : p.max_aocsi;
      emit(out, format_cn_map_csv(cn_action_map(ctx, depth), p.battery_capacity,
                                  depth));
    } else if (cmd_post->parsed()) {
      const SensorParams p = post_sensor.params();
      const PostUpdateTable table = solve_post_update_values(p, block_length);
      std::fprintf(stderr,
                   "states=%d block_length=%d gain=%s iterations=%ld span=%s "
                   "mults_per_iter=%lld\n",
                   table.num_states, table.block_length,
                   format_double(table.gain).c_str(), table.iterations,
                   format_double(table.final_span).c_str(),
                   static_cast<long long>(table.mults_per_iter));
      emit(out, format_post_update_csv(table));
    } else if (cmd_no->parsed()) {
      const SensorParams p = no_sensor.params();
      const NoPolicy policy = solve_no_policy(p);
      std::fprintf(stderr, "states=%zu gain=%s iterations=%ld span=%s\n",
                   policy.space.states.size(), format_double(policy.gain).c_str(),
                   policy.iterations, format_double(policy.final_span).c_str());
      emit(out, format_no_policy_csv(policy));
    } else if (cmd_ebsi->parsed()) {
      const SensorParams p = ebsi_sensor.params();
      const EbsiPolicy policy = solve_ebsi_policy(p);
      std::fprintf(stderr, "states=%d gain=%s iterations=%ld span=%s\n",
                   policy.space.size(), format_double(policy.gain).c_str(),
                   policy.iterations, format_double(policy.final_span).c_str());
      emit(out, format_ebsi_policy_csv(policy));
    } else if (cmd_run->parsed()) {
      ExperimentSpec spec = load_experiment_spec(spec_path);
      if (app.count("--seed")) spec.seed = seed;
      if (app.count("--episodes")) spec.episodes = episodes;
      if (app.count("--horizon")) spec.horizon = horizon;
      if (app.count("--workers")) spec.workers = workers;
      if (app.count("--out")) spec.out = out;
      const std::vector<ResultRow> rows = run_experiment_spec(spec);
      emit(spec.out, format_metrics_csv(rows));
    } else if (cmd_oft->parsed()) {
      const SensorParams p = oft_sensor.params();
      const OftSearchResult res =
          oft_search(p, seed, eval_slots, RviBackend::OpenMp, workers);
      std::printf("threshold_with_request = %d\n", res.best.with_request);
      std::printf("threshold_without_request = %d\n", res.best.without_request);
      std::printf("cost = %s\n", format_double(res.best_cost).c_str());
      if (!out.empty()) {
        std::string csv = "with_request,without_request,cost\n";
        for (int i = 0; i < res.threshold_range; ++i)
          for (int j = 0; j < res.threshold_range; ++j)
            csv += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                   format_double(res.cost_table[static_cast<std::size_t>(i) *
                                                    res.threshold_range +
                                                j]) +
                   "\n";
        write_text_file(out, csv);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
