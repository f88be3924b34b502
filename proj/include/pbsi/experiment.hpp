#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pbsi/simulator.hpp"

namespace pbsi {

enum class SweepAxis { None, Lambda, Xi, Eta, Msur };

const char* sweep_axis_name(SweepAxis axis);
bool parse_sweep_axis(const std::string& name, SweepAxis& out);

// A full experiment: one base sensor (optionally replicated with attribute
// splits), a policy list, and up to two sweep axes (curve split + x axis).
struct ExperimentSpec {
  std::string scenario = "custom";
  std::uint64_t seed = 1;
  long long episodes = 100;
  long long horizon = 10000;
  int workers = 0;
  std::string out;
  std::vector<std::string> policies;
  long long oft_eval_slots = 200000;

  SensorParams base;
  int num_sensors = 1;
  double msur = 1.0;  // update budget per slot as a fraction of the fleet
  std::vector<double> xi_values;
  std::vector<int> xi_counts;
  std::vector<double> lambda_values;
  std::vector<int> lambda_counts;

  SweepAxis axis = SweepAxis::None;
  std::vector<double> values;
  SweepAxis split_axis = SweepAxis::None;
  std::vector<double> split_values;

  void validate() const;  // throws std::invalid_argument
};

struct ResultRow {
  std::string policy;
  double lambda = 0.0;   // nominal charging rate (fleet mean)
  double eta = 0.0;
  double xi = 0.0;
  double k0_ratio = 1.0;
  double mean_cost = 0.0;
  double std_err = 0.0;
  double theta = 0.0;     // closed-form lower bound (weighted fleet sum)
  double gap_add = 0.0;   // mean_cost - theta
  double gap_mul = 0.0;   // mean_cost / theta - 1
  long long episodes = 0;
  long long horizon = 0;
  std::uint64_t seed = 0;
};

// Reusable solver cache so sweeps do not refactor identical instances.
class EngineCache {
 public:
  explicit EngineCache(RviOptions opts = {}) : opts_(opts) {}
  PolicyEngine engine(PolicyKind kind, const SystemConfig& config,
                      std::uint64_t oft_seed, long long oft_eval_slots);

 private:
  RviOptions opts_;
  std::vector<std::pair<std::string, std::shared_ptr<const NoPolicy>>> no_;
  std::vector<std::pair<std::string, std::shared_ptr<const EbsiPolicy>>> ebsi_;
  std::vector<std::pair<std::string, std::shared_ptr<const CnRuntime>>> cn_;
  std::vector<std::pair<std::string, OftThresholds>> oft_;
};

// Builds the sensor fleet for one sweep point (attribute splits assigned by a
// seeded shuffle) and the per-slot update budget.
SystemConfig build_system(const ExperimentSpec& spec);

std::vector<ResultRow> run_experiment_spec(const ExperimentSpec& spec);

// CSV renderers; all floating-point values carry 9 significant digits.
std::string format_metrics_csv(const std::vector<ResultRow>& rows);
std::string format_no_policy_csv(const NoPolicy& policy);
std::string format_ebsi_policy_csv(const EbsiPolicy& policy);
std::string format_post_update_csv(const PostUpdateTable& table);
std::string format_cn_map_csv(const std::vector<std::int8_t>& map,
                              int battery_capacity, int delta_max);
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pbsi
