// Times each OpenMP-parallel kernel against its serial reference and checks
// that both produce identical results (the parallel paths are Jacobi-style or
// episode-indexed, so agreement is exact, not approximate).

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "pbsi/mdp.hpp"
#include "pbsi/noiseless.hpp"
#include "pbsi/scheduling.hpp"
#include "pbsi/simulator.hpp"

namespace {

using namespace pbsi;

double best_of(int reps, const std::function<void()>& body) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool match) {
  std::printf("%-36s %9.3f %9.3f %7.2fx   %s\n", name, serial, parallel,
              serial / parallel, match ? "identical" : "MISMATCH");
}

SensorParams bench_sensor() {
  SensorParams p;
  p.battery_capacity = 15;
  p.max_aocsi = 48;
  p.max_aofbl = 48;
  p.request_prob = 0.7;
  p.channel_success = 0.7;
  p.energy = EnergyModel::bernoulli(0.12);
  p.validate();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial-vs-OpenMP kernel benchmark"};
  int threads = 0;
  int reps = 3;
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")
      ->capture_default_str();
  app.add_option("--reps", reps, "Repetitions per arm (best time wins)")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) omp_set_num_threads(threads);

  const SensorParams sensor = bench_sensor();
  bool all_match = true;

  std::printf("%-36s %9s %9s %8s   %s\n", "kernel", "serial s", "openmp s",
              "speedup", "results");

  // Value-iteration sweeps over the exact single-sensor chain.
  {
    const FiniteMdp mdp = build_noiseless_mdp(sensor);
    RviOptions opts;
    opts.backend = RviBackend::Serial;
    RviSolution serial_sol, parallel_sol;
    const double ts = best_of(reps, [&] { serial_sol = relative_value_iteration(mdp, opts); });
    opts.backend = RviBackend::OpenMp;
    opts.threads = threads;
    const double tp = best_of(reps, [&] { parallel_sol = relative_value_iteration(mdp, opts); });
    const bool match = serial_sol.gain == parallel_sol.gain &&
                       serial_sol.bias == parallel_sol.bias &&
                       serial_sol.policy == parallel_sol.policy;
    all_match = all_match && match;
    char name[64];
    std::snprintf(name, sizeof name, "value iteration (%d states)",
                  mdp.num_states);
    row(name, ts, tp, match);
  }

  // Episode batches under common random numbers.
  {
    SystemConfig config;
    config.sensors.assign(8, sensor);
    config.max_updates_per_slot = 8;
    PolicyEngine never;
    never.kind = PolicyKind::Never;
    PolicyEngine always;
    always.kind = PolicyKind::Always;
    const std::vector<PolicyEngine> engines{never, always};
    std::vector<PolicyRunResult> serial_res, parallel_res;
    const double ts = best_of(
        reps, [&] { serial_res = run_experiment(config, engines, 40, 5000, 9, 1); });
    const double tp = best_of(reps, [&] {
      parallel_res = run_experiment(config, engines, 40, 5000, 9,
                                    threads > 0 ? threads : omp_get_max_threads());
    });
    bool match = serial_res.size() == parallel_res.size();
    for (std::size_t i = 0; match && i < serial_res.size(); ++i)
      match = serial_res[i].mean_cost == parallel_res[i].mean_cost &&
              serial_res[i].episode_costs == parallel_res[i].episode_costs;
    all_match = all_match && match;
    row("episode batch (2x40x5k, 8 sensors)", ts, tp, match);
  }

  // Threshold scan: every (request, idle) pair scored on shared draws.
  {
    OftSearchResult serial_res, parallel_res;
    const double ts = best_of(reps, [&] {
      serial_res = oft_search(sensor, 17, 50000, RviBackend::Serial);
    });
    const double tp = best_of(reps, [&] {
      parallel_res = oft_search(sensor, 17, 50000, RviBackend::OpenMp, threads);
    });
    const bool match =
        serial_res.best.with_request == parallel_res.best.with_request &&
        serial_res.best.without_request == parallel_res.best.without_request &&
        serial_res.cost_table == parallel_res.cost_table;
    all_match = all_match && match;
    char name[64];
    std::snprintf(name, sizeof name, "threshold scan (%d pairs)",
                  serial_res.threshold_range * serial_res.threshold_range);
    row(name, ts, tp, match);
  }

  if (!all_match) {
    std::fprintf(stderr, "serial and parallel kernels disagree\n");
    return 1;
  }
  return 0;
}
