#include "pbsi/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "pbsi/bound.hpp"

namespace pbsi {

const char* sweep_axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::None: return "none";
    case SweepAxis::Lambda: return "lambda";
    case SweepAxis::Xi: return "xi";
    case SweepAxis::Eta: return "eta";
    case SweepAxis::Msur: return "msur";
  }
  return "?";
}

bool parse_sweep_axis(const std::string& name, SweepAxis& out) {
  for (SweepAxis a : {SweepAxis::None, SweepAxis::Lambda, SweepAxis::Xi,
                      SweepAxis::Eta, SweepAxis::Msur})
    if (name == sweep_axis_name(a)) {
      out = a;
      return true;
    }
  return false;
}

void ExperimentSpec::validate() const {
  base.validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  if (num_sensors < 1) throw std::invalid_argument("num_sensors must be positive");
  if (!(msur > 0.0 && msur <= 1.0))
    throw std::invalid_argument("msur must lie in (0, 1]");
  if (oft_eval_slots < 1)
    throw std::invalid_argument("oft_eval_slots must be positive");
  if (policies.empty()) throw std::invalid_argument("policy list must not be empty");
  for (const std::string& name : policies) {
    PolicyKind kind;
    if (!parse_policy_name(name, kind))
      throw std::invalid_argument("unknown policy name: " + name);
  }
  if (xi_values.size() != xi_counts.size())
    throw std::invalid_argument("xi_values and xi_counts must pair up");
  if (lambda_values.size() != lambda_counts.size())
    throw std::invalid_argument("lambda_values and lambda_counts must pair up");
  auto counts_ok = [this](const std::vector<int>& counts) {
    long long sum = 0;
    for (int c : counts) {
      if (c < 0) return false;
      sum += c;
    }
    return sum == num_sensors;
  };
  if (!xi_counts.empty() && !counts_ok(xi_counts))
    throw std::invalid_argument("xi_counts must sum to num_sensors");
  if (!lambda_counts.empty() && !counts_ok(lambda_counts))
    throw std::invalid_argument("lambda_counts must sum to num_sensors");
  if (axis != SweepAxis::None && values.empty())
    throw std::invalid_argument("sweep axis needs a nonempty value list");
  if (split_axis != SweepAxis::None && split_values.empty())
    throw std::invalid_argument("split axis needs a nonempty value list");
  if (axis != SweepAxis::None && axis == split_axis)
    throw std::invalid_argument("sweep and split axes must differ");
  const bool sweeps_lambda =
      axis == SweepAxis::Lambda || split_axis == SweepAxis::Lambda;
  const bool sweeps_xi = axis == SweepAxis::Xi || split_axis == SweepAxis::Xi;
  if (sweeps_lambda &&
      (base.energy.kind == EnergyKind::Table || !lambda_values.empty()))
    throw std::invalid_argument("lambda sweep needs a single parametric energy model");
  if (sweeps_xi && !xi_values.empty())
    throw std::invalid_argument("xi sweep conflicts with a heterogeneous xi split");
}

namespace {

std::string params_key(const SensorParams& p) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d|%d|%d|%.17g|%.17g|%d|%.17g", p.battery_capacity,
                p.max_aocsi, p.max_aofbl, p.request_prob, p.channel_success,
                static_cast<int>(p.energy.kind), p.energy.param);
  std::string key(buf);
  for (std::size_t i = 0; i < p.energy.support.size(); ++i) {
    std::snprintf(buf, sizeof buf, "|%d:%.17g", p.energy.support[i], p.energy.probs[i]);
    key += buf;
  }
  return key;
}

// The exact solver never consults the channel, so its cache key omits xi.
std::string noiseless_key(const SensorParams& p) {
  SensorParams q = p;
  q.channel_success = 1.0;
  return params_key(q);
}

template <typename T>
const T* find_cached(const std::vector<std::pair<std::string, T>>& cache,
                     const std::string& key) {
  for (const auto& [k, v] : cache)
    if (k == key) return &v;
  return nullptr;
}

void apply_axis(ExperimentSpec& spec, SweepAxis axis, double v) {
  switch (axis) {
    case SweepAxis::None:
      break;
    case SweepAxis::Lambda:
      spec.base.energy.param = v;
      break;
    case SweepAxis::Xi:
      spec.base.channel_success = v;
      break;
    case SweepAxis::Eta:
      spec.base.request_prob = v;
      break;
    case SweepAxis::Msur:
      spec.msur = v;
      break;
  }
}

double nominal_lambda(const SensorParams& p) {
  return p.energy.kind == EnergyKind::Table
             ? clipped_mean(p.energy, p.battery_capacity)
             : p.energy.param;
}

}  // namespace

PolicyEngine EngineCache::engine(PolicyKind kind, const SystemConfig& config,
                                 std::uint64_t oft_seed, long long oft_eval_slots) {
  config.validate();
  PolicyEngine eng;
  eng.kind = kind;
  const std::size_t K = config.sensors.size();
  const bool single_table =
      kind == PolicyKind::No || kind == PolicyKind::EbsiOpt ||
      kind == PolicyKind::EbsiOptTrackerFed || kind == PolicyKind::Oft;
  if (single_table && K != 1)
    throw std::invalid_argument("policy " + std::string(policy_name(kind)) +
                                " is defined for a single sensor");
  switch (kind) {
    case PolicyKind::No: {
      const std::string key = noiseless_key(config.sensors[0]);
      if (const auto* hit = find_cached(no_, key)) {
        eng.no = *hit;
      } else {
        eng.no = std::make_shared<NoPolicy>(solve_no_policy(config.sensors[0], opts_));
        no_.emplace_back(key, eng.no);
      }
      break;
    }
    case PolicyKind::EbsiOpt:
    case PolicyKind::EbsiOptTrackerFed: {
      const std::string key = params_key(config.sensors[0]);
      if (const auto* hit = find_cached(ebsi_, key)) {
        eng.ebsi = *hit;
      } else {
        eng.ebsi =
            std::make_shared<EbsiPolicy>(solve_ebsi_policy(config.sensors[0], opts_));
        ebsi_.emplace_back(key, eng.ebsi);
      }
      break;
    }
    case PolicyKind::Oft: {
      char suffix[48];
      std::snprintf(suffix, sizeof suffix, "|%llu|%lld",
                    static_cast<unsigned long long>(oft_seed),
                    static_cast<long long>(oft_eval_slots));
      const std::string key = params_key(config.sensors[0]) + suffix;
      if (const auto* hit = find_cached(oft_, key)) {
        eng.oft = *hit;
      } else {
        eng.oft = oft_search(config.sensors[0], oft_seed, oft_eval_slots).best;
        oft_.emplace_back(key, eng.oft);
      }
      break;
    }
    case PolicyKind::Cn:
    case PolicyKind::WugcCn:
    case PolicyKind::RandomCn: {
      eng.cn.resize(K);
      for (std::size_t k = 0; k < K; ++k) {
        const std::string key = params_key(config.sensors[k]);
        if (const auto* hit = find_cached(cn_, key)) {
          eng.cn[k] = *hit;
          continue;
        }
        auto rt = std::make_shared<CnRuntime>();
        rt->ctx = make_cn_context(config.sensors[k], 0, opts_);
        rt->build_cache(std::max(192, 4 * config.sensors[k].max_aocsi));
        eng.cn[k] = rt;
        cn_.emplace_back(key, eng.cn[k]);
      }
      break;
    }
    case PolicyKind::Maf:
    case PolicyKind::Always:
    case PolicyKind::Never:
      break;
  }
  return eng;
}

SystemConfig build_system(const ExperimentSpec& spec) {
  SystemConfig sys;
  sys.sensors.assign(static_cast<std::size_t>(spec.num_sensors), spec.base);
  const int K = spec.num_sensors;
  sys.max_updates_per_slot = std::clamp(
      static_cast<int>(std::llround(spec.msur * K)), 1, K);

  // Seeded shuffle shared by every attribute split.
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);
  RngStream shuffle(derive_substream(spec.seed, 0, 0, StreamKind::Assignment));
  for (int i = K - 1; i > 0; --i) {
    const int j = static_cast<int>(shuffle.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  auto assign = [&](const std::vector<double>& values, const std::vector<int>& counts,
                    auto&& setter) {
    std::size_t pos = 0;
    for (std::size_t g = 0; g < values.size(); ++g)
      for (int c = 0; c < counts[g]; ++c, ++pos)
        setter(sys.sensors[static_cast<std::size_t>(order[pos])], values[g]);
  };
  assign(spec.xi_values, spec.xi_counts,
         [](SensorParams& s, double v) { s.channel_success = v; });
  assign(spec.lambda_values, spec.lambda_counts,
         [](SensorParams& s, double v) { s.energy.param = v; });
  sys.validate();
  return sys;
}

std::vector<ResultRow> run_experiment_spec(const ExperimentSpec& spec) {
  spec.validate();
  EngineCache cache;
  const std::uint64_t oft_seed = derive_substream(spec.seed, 0, 0, StreamKind::OftEval);

  std::vector<double> splits =
      spec.split_axis == SweepAxis::None ? std::vector<double>{0.0} : spec.split_values;
  std::vector<double> points =
      spec.axis == SweepAxis::None ? std::vector<double>{0.0} : spec.values;

  std::vector<ResultRow> rows;
  for (double split : splits)
    for (double point : points) {
      ExperimentSpec pt = spec;
      if (spec.split_axis != SweepAxis::None) apply_axis(pt, spec.split_axis, split);
      if (spec.axis != SweepAxis::None) apply_axis(pt, spec.axis, point);
      const SystemConfig sys = build_system(pt);

      double theta = 0.0, lambda_mean = 0.0, eta_mean = 0.0, xi_mean = 0.0;
      for (const SensorParams& s : sys.sensors) {
        theta += s.weight * theta_lower_bound(s.clipped_lambda(), s.request_prob,
                                              s.channel_success, s.max_aocsi);
        lambda_mean += nominal_lambda(s);
        eta_mean += s.request_prob;
        xi_mean += s.channel_success;
      }
      const double K = static_cast<double>(sys.sensors.size());
      lambda_mean /= K;
      eta_mean /= K;
      xi_mean /= K;

      std::vector<PolicyEngine> engines;
      for (const std::string& name : pt.policies) {
        PolicyKind kind;
        parse_policy_name(name, kind);
        engines.push_back(cache.engine(kind, sys, oft_seed, pt.oft_eval_slots));
      }
      const std::vector<PolicyRunResult> results = run_experiment(
          sys, engines, pt.episodes, pt.horizon, pt.seed, pt.workers);
      for (const PolicyRunResult& r : results) {
        ResultRow row;
        row.policy = r.name;
        row.lambda = lambda_mean;
        row.eta = eta_mean;
        row.xi = xi_mean;
        row.k0_ratio = static_cast<double>(sys.max_updates_per_slot) / K;
        row.mean_cost = r.mean_cost;
        row.std_err = r.std_err;
        row.theta = theta;
        row.gap_add = r.mean_cost - theta;
        row.gap_mul = r.mean_cost / theta - 1.0;
        row.episodes = pt.episodes;
        row.horizon = pt.horizon;
        row.seed = pt.seed;
        rows.push_back(std::move(row));
      }
    }
  return rows;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string format_metrics_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "policy,lambda,eta,xi,k0_ratio,mean_cost,se,theta,gap_add,gap_mul,"
      "episodes,horizon,seed\n";
  for (const ResultRow& r : rows) {
    out += r.policy;
    for (double v : {r.lambda, r.eta, r.xi, r.k0_ratio, r.mean_cost, r.std_err,
                     r.theta, r.gap_add, r.gap_mul})
      out += "," + format_double(v);
    out += "," + std::to_string(r.episodes);
    out += "," + std::to_string(r.horizon);
    out += "," + std::to_string(r.seed);
    out += "\n";
  }
  return out;
}

std::string format_no_policy_csv(const NoPolicy& policy) {
  std::string out = "r,b_hat,delta,d,action\n";
  for (std::size_t i = 0; i < policy.space.states.size(); ++i) {
    const NoiselessState& s = policy.space.states[i];
    out += std::to_string(s.request) + "," + std::to_string(s.b_hat) + "," +
           std::to_string(s.aocsi) + "," + std::to_string(s.aofbl) + "," +
           std::to_string(policy.action[i]) + "\n";
  }
  return out;
}

std::string format_ebsi_policy_csv(const EbsiPolicy& policy) {
  std::string out = "r,b,delta,action\n";
  for (int r = 0; r < 2; ++r)
    for (int b = 0; b <= policy.space.battery_capacity; ++b)
      for (int delta = 1; delta <= policy.space.max_aocsi; ++delta) {
        const std::size_t i =
            static_cast<std::size_t>(policy.space.index_of(r, b, delta));
        out += std::to_string(r) + "," + std::to_string(b) + "," +
               std::to_string(delta) + "," + std::to_string(policy.action[i]) + "\n";
      }
  return out;
}

std::string format_post_update_csv(const PostUpdateTable& table) {
  std::string out = "b_hat,h_tilde\n";
  for (std::size_t b = 0; b < table.h.size(); ++b)
    out += std::to_string(b) + "," + format_double(table.h[b]) + "\n";
  return out;
}

std::string format_cn_map_csv(const std::vector<std::int8_t>& map,
                              int battery_capacity, int delta_max) {
  std::string out = "b_hat,delta,action\n";
  for (int b = 0; b < battery_capacity; ++b)
    for (int delta = 1; delta <= delta_max; ++delta)
      out += std::to_string(b) + "," + std::to_string(delta) + "," +
             std::to_string(static_cast<int>(
                 map[static_cast<std::size_t>(b) * delta_max + (delta - 1)])) +
             "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace pbsi
