#include "pbsi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbsi {

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::No: return "no";
    case PolicyKind::Cn: return "cn";
    case PolicyKind::EbsiOpt: return "ebsi-opt";
    case PolicyKind::EbsiOptTrackerFed: return "ebsi-opt-tracker";
    case PolicyKind::Oft: return "oft";
    case PolicyKind::Maf: return "maf";
    case PolicyKind::WugcCn: return "wugc-cn";
    case PolicyKind::RandomCn: return "random-cn";
    case PolicyKind::Always: return "always";
    case PolicyKind::Never: return "never";
  }
  return "?";
}

bool parse_policy_name(const std::string& name, PolicyKind& out) {
  static const std::pair<const char*, PolicyKind> registered[] = {
      {"no", PolicyKind::No},           {"cn", PolicyKind::Cn},
      {"ebsi-opt", PolicyKind::EbsiOpt}, {"oft", PolicyKind::Oft},
      {"maf", PolicyKind::Maf},         {"wugc-cn", PolicyKind::WugcCn},
      {"random-cn", PolicyKind::RandomCn}, {"always", PolicyKind::Always},
      {"never", PolicyKind::Never},
  };
  for (const auto& [text, kind] : registered)
    if (name == text) {
      out = kind;
      return true;
    }
  return false;
}

void CnRuntime::build_cache(int delta_max) {
  cached_delta = delta_max;
  grid = cn_action_map(ctx, delta_max);
}

int CnRuntime::decide(int request, const InferredPbsi& state) const {
  if (request == 0) return 0;
  if (state.aocsi <= cached_delta)
    return grid[static_cast<std::size_t>(state.b_hat) * cached_delta +
                static_cast<std::size_t>(state.aocsi - 1)];
  return cn_decide(ctx, request, state);
}

namespace {

struct SensorState {
  int battery = 0;
  long long aocsi = 1;  // untruncated mirror
  int aocsi_trunc = 1;
  NoiselessTracker nl;
  InferredPbsi inf;
  RngStream req, chan, en;
};

bool selector_policy(PolicyKind k) {
  return k == PolicyKind::Maf || k == PolicyKind::WugcCn || k == PolicyKind::RandomCn;
}

}  // namespace

EpisodeMetrics run_episode(const SystemConfig& config, const PolicyEngine& engine,
                           long long horizon, std::uint64_t root_seed,
                           long long episode_index) {
  config.validate();
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  const std::size_t K = config.sensors.size();
  const int budget = config.max_updates_per_slot;
  if (!selector_policy(engine.kind) && budget < static_cast<int>(K))
    throw std::invalid_argument(
        "per-sensor policies need an update budget covering every sensor");

  std::vector<SensorState> st(K);
  for (std::size_t k = 0; k < K; ++k) {
    st[k].req = RngStream(derive_substream(root_seed, static_cast<std::uint64_t>(episode_index),
                                           static_cast<std::uint64_t>(k), StreamKind::Request));
    st[k].chan = RngStream(derive_substream(root_seed, static_cast<std::uint64_t>(episode_index),
                                            static_cast<std::uint64_t>(k), StreamKind::Channel));
    st[k].en = RngStream(derive_substream(root_seed, static_cast<std::uint64_t>(episode_index),
                                          static_cast<std::uint64_t>(k), StreamKind::Energy));
  }
  RngStream scheduler(derive_substream(root_seed, static_cast<std::uint64_t>(episode_index), 0,
                                       StreamKind::Scheduler));

  EpisodeMetrics metrics;
  metrics.slots = horizon;
  std::vector<std::int8_t> request(K), action(K), decisions(K);
  std::vector<SensorSnapshot> snaps(K);
  std::vector<std::int32_t> selected;

  for (long long t = 0; t < horizon; ++t) {
    for (std::size_t k = 0; k < K; ++k) {
      request[k] = static_cast<std::int8_t>(
          st[k].req.bernoulli(config.sensors[k].request_prob));
      metrics.requests += request[k];
    }

    // Policy step.
    switch (engine.kind) {
      case PolicyKind::Never:
        std::fill(action.begin(), action.end(), std::int8_t{0});
        break;
      case PolicyKind::Always:
        for (std::size_t k = 0; k < K; ++k) action[k] = request[k];
        break;
      case PolicyKind::Oft:
        for (std::size_t k = 0; k < K; ++k) {
          const int thr = request[k] ? engine.oft.with_request
                                     : engine.oft.without_request;
          action[k] = static_cast<std::int8_t>(st[k].aocsi_trunc >= thr ? 1 : 0);
        }
        break;
      case PolicyKind::No:
        for (std::size_t k = 0; k < K; ++k)
          action[k] = request[k]
                          ? static_cast<std::int8_t>(
                                engine.no->action[static_cast<std::size_t>(
                                    engine.no->space.index_of(1, st[k].nl.b_hat,
                                                              st[k].nl.aocsi,
                                                              st[k].nl.aofbl))])
                          : std::int8_t{0};
        break;
      case PolicyKind::EbsiOpt:
      case PolicyKind::EbsiOptTrackerFed:
        for (std::size_t k = 0; k < K; ++k) {
          if (!request[k]) {
            action[k] = 0;
            continue;
          }
          const int level = engine.kind == PolicyKind::EbsiOpt
                                ? st[k].battery
                                : st[k].inf.b_hat;
          action[k] = static_cast<std::int8_t>(
              engine.ebsi->action[static_cast<std::size_t>(
                  engine.ebsi->space.index_of(1, level, st[k].aocsi_trunc))]);
        }
        break;
      case PolicyKind::Cn:
        for (std::size_t k = 0; k < K; ++k)
          action[k] = static_cast<std::int8_t>(
              engine.cn[k]->decide(request[k], st[k].inf));
        break;
      case PolicyKind::Maf:
      case PolicyKind::WugcCn:
      case PolicyKind::RandomCn: {
        for (std::size_t k = 0; k < K; ++k) {
          const SensorParams& p = config.sensors[k];
          snaps[k] = SensorSnapshot{static_cast<std::int32_t>(k),
                                    request[k],
                                    st[k].inf.b_hat,
                                    st[k].inf.aocsi,
                                    st[k].inf.aofbl,
                                    p.weight,
                                    p.channel_success,
                                    engine.cn.empty() ? 0.0 : engine.cn[k]->ctx.p1,
                                    p.max_aocsi};
        }
        if (engine.kind == PolicyKind::Maf) {
          selected = maf_select(snaps, budget);
        } else {
          for (std::size_t k = 0; k < K; ++k)
            decisions[k] = static_cast<std::int8_t>(
                engine.cn[k]->decide(request[k], st[k].inf));
          selected = engine.kind == PolicyKind::WugcCn
                         ? wugc_select(snaps, decisions, budget)
                         : random_cn_select(snaps, decisions, budget, scheduler);
        }
        std::fill(action.begin(), action.end(), std::int8_t{0});
        for (std::int32_t id : selected) action[static_cast<std::size_t>(id)] = 1;
        break;
      }
    }

    // Transmissions, channel, ages, batteries, cost, trackers.
    for (std::size_t k = 0; k < K; ++k) {
      const SensorParams& p = config.sensors[k];
      const int a = action[k];
      const int m = a && st[k].battery >= 1 ? 1 : 0;
      const int reported = st[k].battery;  // level before spending
      const int lucky = st[k].chan.bernoulli(p.channel_success);
      const int h = m && lucky ? 1 : 0;
      const int e = sample_energy(p.energy, st[k].en);

      const int age_next = h ? 1 : std::min(st[k].aocsi_trunc + 1, p.max_aocsi);
      metrics.total_cost += p.weight * static_cast<double>(request[k] * age_next);
      const int battery_next = std::min(st[k].battery - m + e, p.battery_capacity);
      metrics.commands += a;
      metrics.transmissions += m;
      metrics.successes += h;
      metrics.energy_absorbed += battery_next - (st[k].battery - m);

      const int outcome = a == 0 ? 0 : (h ? 1 : 2);
      update_noiseless_tracker(st[k].nl, a, outcome, reported, p.max_aocsi,
                               p.max_aofbl);
      const TxOutcome tx = a == 0 ? TxOutcome::None
                                  : (h ? TxOutcome::Delivered : TxOutcome::Failed);
      if (engine.cn.empty()) {
        // No CN context on this engine; keep the generalized tracker in its
        // exact noiseless form so diagnostics stay meaningful.
        if (tx == TxOutcome::Delivered)
          st[k].inf = InferredPbsi{reported - 1, 1, 0.0};
        else if (tx == TxOutcome::Failed)
          st[k].inf = InferredPbsi{std::max(st[k].inf.b_hat - 1, 0), st[k].inf.aocsi + 1,
                                   st[k].inf.b_hat >= 1 ? 0.0 : 1.0};
        else
          st[k].inf = InferredPbsi{st[k].inf.b_hat, st[k].inf.aocsi + 1,
                                   st[k].inf.aofbl > 0.0 ? st[k].inf.aofbl + 1.0 : 0.0};
      } else {
        st[k].inf = update_inferred_pbsi(st[k].inf, a, tx, reported,
                                         engine.cn[k]->ctx);
      }

      st[k].aocsi = h ? 1 : st[k].aocsi + 1;
      st[k].aocsi_trunc = age_next;
      st[k].battery = battery_next;

      // With a perfect channel the generalized tracker must coincide with the
      // noiseless one (failures can only mean an empty battery).
      if (p.channel_success == 1.0 && !engine.cn.empty()) {
        const bool same =
            st[k].inf.b_hat == st[k].nl.b_hat &&
            std::min(st[k].inf.aocsi, static_cast<long long>(p.max_aocsi)) ==
                st[k].nl.aocsi &&
            std::min(st[k].inf.aofbl, static_cast<double>(p.max_aofbl)) ==
                static_cast<double>(st[k].nl.aofbl);
        if (!same)
          throw std::logic_error("trackers diverged under a noiseless channel");
      }
    }
  }

  metrics.final_battery.resize(K);
  for (std::size_t k = 0; k < K; ++k) metrics.final_battery[k] = st[k].battery;
  return metrics;
}

double pairwise_sum(const double* data, std::size_t n) {
  if (n == 0) return 0.0;
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

std::vector<PolicyRunResult> run_experiment(const SystemConfig& config,
                                            const std::vector<PolicyEngine>& engines,
                                            long long episodes, long long horizon,
                                            std::uint64_t seed, int workers) {
  config.validate();
  if (episodes < 1) throw std::invalid_argument("episodes must be positive");
  std::vector<PolicyRunResult> results;
  results.reserve(engines.size());
  for (const PolicyEngine& engine : engines) {
    PolicyRunResult r;
    r.kind = engine.kind;
    r.name = policy_name(engine.kind);
    r.episode_costs.assign(static_cast<std::size_t>(episodes), 0.0);
    double* costs = r.episode_costs.data();
#ifdef _OPENMP
    if (workers > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(workers)
      for (long long ep = 0; ep < episodes; ++ep)
        costs[ep] = run_episode(config, engine, horizon, seed, ep).mean_cost();
    } else {
#pragma omp parallel for schedule(dynamic)
      for (long long ep = 0; ep < episodes; ++ep)
        costs[ep] = run_episode(config, engine, horizon, seed, ep).mean_cost();
    }
#else
    (void)workers;
    for (long long ep = 0; ep < episodes; ++ep)
      costs[ep] = run_episode(config, engine, horizon, seed, ep).mean_cost();
#endif
    const std::size_t n = r.episode_costs.size();
    r.mean_cost = pairwise_sum(costs, n) / static_cast<double>(n);
    if (n > 1) {
      std::vector<double> sq(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double d = costs[i] - r.mean_cost;
        sq[i] = d * d;
      }
      const double var = pairwise_sum(sq.data(), n) / static_cast<double>(n - 1);
      r.std_err = std::sqrt(var / static_cast<double>(n));
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace pbsi
