#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pbsi/cn.hpp"
#include "pbsi/ebsi.hpp"
#include "pbsi/noiseless.hpp"
#include "pbsi/params.hpp"
#include "pbsi/scheduling.hpp"

namespace pbsi {

enum class PolicyKind {
  No,
  Cn,
  EbsiOpt,
  EbsiOptTrackerFed,  // eBSI table driven by the inferred level (diagnostics)
  Oft,
  Maf,
  WugcCn,
  RandomCn,
  Always,
  Never,
};

const char* policy_name(PolicyKind kind);
// Names accepted from configs / the command line; the tracker-fed eBSI
// variant is internal and not registered.
bool parse_policy_name(const std::string& name, PolicyKind& out);

// CN decision rule with a precomputed decision grid; ages beyond the grid
// fall back to evaluating delta_v directly.
struct CnRuntime {
  CnContext ctx;
  int cached_delta = 0;
  std::vector<std::int8_t> grid;  // [b_hat * cached_delta + (aocsi - 1)]

  void build_cache(int delta_max);
  int decide(int request, const InferredPbsi& state) const;
};

// Solved tables / rule parameters for one policy over one system.
struct PolicyEngine {
  PolicyKind kind = PolicyKind::Never;
  std::shared_ptr<const NoPolicy> no;
  std::shared_ptr<const EbsiPolicy> ebsi;
  std::vector<std::shared_ptr<const CnRuntime>> cn;  // per sensor
  OftThresholds oft{};
};

struct EpisodeMetrics {
  double total_cost = 0.0;
  long long slots = 0;
  long long requests = 0;
  long long commands = 0;
  long long transmissions = 0;
  long long successes = 0;
  long long energy_absorbed = 0;
  std::vector<int> final_battery;

  double mean_cost() const { return total_cost / static_cast<double>(slots); }
};

// One episode from cold start (empty batteries, fresh ages).  Deterministic
// in (config, engine, horizon, root_seed, episode_index); every random draw
// comes from a per-(episode, sensor, purpose) substream.
EpisodeMetrics run_episode(const SystemConfig& config, const PolicyEngine& engine,
                           long long horizon, std::uint64_t root_seed,
                           long long episode_index);

struct PolicyRunResult {
  PolicyKind kind = PolicyKind::Never;
  std::string name;
  double mean_cost = 0.0;
  double std_err = 0.0;
  std::vector<double> episode_costs;
};

// Runs every engine over the same episode seeds (common random numbers).
// Episodes are independent and run in parallel; aggregation is a pairwise
// sum over the episode-indexed vector, so results are identical for any
// worker count.
std::vector<PolicyRunResult> run_experiment(const SystemConfig& config,
                                            const std::vector<PolicyEngine>& engines,
                                            long long episodes, long long horizon,
                                            std::uint64_t seed, int workers = 0);

double pairwise_sum(const double* data, std::size_t n);

}  // namespace pbsi
