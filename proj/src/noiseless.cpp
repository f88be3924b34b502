#include "pbsi/noiseless.hpp"

#include <algorithm>
#include <stdexcept>

namespace pbsi {

bool noiseless_state_feasible(int b_hat, int aocsi, int aofbl, int max_aocsi) {
  if (aofbl == 0) return true;
  if (b_hat != 0) return false;
  return aocsi == max_aocsi || aocsi > aofbl;
}

std::int32_t NoiselessSpace::index_of(int request, int b_hat, int aocsi,
                                      int aofbl) const {
  const std::size_t flat =
      ((static_cast<std::size_t>(request) * battery_capacity + b_hat) * max_aocsi +
       (aocsi - 1)) *
          (max_aofbl + 1) +
      aofbl;
  return index[flat];
}

NoiselessSpace enumerate_states(int battery_capacity, int max_aocsi, int max_aofbl) {
  if (battery_capacity < 1 || max_aocsi < 2 || max_aofbl < 1)
    throw std::invalid_argument("invalid state-space dimensions");
  NoiselessSpace sp;
  sp.battery_capacity = battery_capacity;
  sp.max_aocsi = max_aocsi;
  sp.max_aofbl = max_aofbl;
  sp.index.assign(static_cast<std::size_t>(2) * battery_capacity * max_aocsi *
                      (max_aofbl + 1),
                  -1);
  std::size_t flat = 0;
  for (int r = 0; r < 2; ++r)
    for (int b = 0; b < battery_capacity; ++b)
      for (int delta = 1; delta <= max_aocsi; ++delta)
        for (int d = 0; d <= max_aofbl; ++d, ++flat)
          if (noiseless_state_feasible(b, delta, d, max_aocsi)) {
            sp.index[flat] = static_cast<std::int32_t>(sp.states.size());
            sp.states.push_back(NoiselessState{
                static_cast<std::int16_t>(r), static_cast<std::int16_t>(b),
                static_cast<std::int16_t>(delta), static_cast<std::int16_t>(d)});
          }
  return sp;
}

long long noiseless_state_count(int battery_capacity, int max_aocsi, int max_aofbl) {
  const long long b = battery_capacity, a = max_aocsi, d = max_aofbl;
  const long long t1 = std::min(a, d + 1);
  return 2 * b * a + 2 * d * (a - t1 + 1) + (t1 - 1) * (t1 - 2);
}

std::vector<double> battery_growth_distribution(int b_hat, int age,
                                                const EnergyModel& model,
                                                int capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
  if (b_hat < 0 || b_hat > capacity)
    throw std::invalid_argument("b_hat must lie in [0, capacity]");
  if (age < 0) throw std::invalid_argument("age must be nonnegative");
  const std::vector<double> step = clipped_pmf(model, capacity);
  std::vector<double> dist(static_cast<std::size_t>(capacity) + 1, 0.0);
  dist[static_cast<std::size_t>(b_hat)] = 1.0;
  std::vector<double> next(dist.size());
  for (int t = 0; t < age; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int v = 0; v <= capacity; ++v) {
      if (dist[static_cast<std::size_t>(v)] == 0.0) continue;
      for (int e = 0; e <= capacity; ++e) {
        const int w = std::min(v + e, capacity);
        next[static_cast<std::size_t>(w)] +=
            dist[static_cast<std::size_t>(v)] * step[static_cast<std::size_t>(e)];
      }
    }
    dist.swap(next);
  }
  return dist;
}

FiniteMdp build_noiseless_mdp(const SensorParams& params) {
  params.validate();
  const int B = params.battery_capacity;
  const int A = params.max_aocsi;
  const int D = params.max_aofbl;
  const double eta = params.request_prob;
  const NoiselessSpace sp = enumerate_states(B, A, D);

  // Growth distributions for every (b_hat, age) the transitions can need.
  const int max_age = std::max(A, D);
  std::vector<std::vector<double>> growth(
      static_cast<std::size_t>(B) * (max_age + 1));
  const std::vector<double> step = clipped_pmf(params.energy, B);
  for (int b = 0; b < B; ++b) {
    std::vector<double> dist(static_cast<std::size_t>(B) + 1, 0.0);
    dist[static_cast<std::size_t>(b)] = 1.0;
    growth[static_cast<std::size_t>(b) * (max_age + 1)] = dist;
    std::vector<double> next(dist.size());
    for (int age = 1; age <= max_age; ++age) {
      std::fill(next.begin(), next.end(), 0.0);
      for (int v = 0; v <= B; ++v) {
        if (dist[static_cast<std::size_t>(v)] == 0.0) continue;
        for (int e = 0; e <= B; ++e) {
          const int w = std::min(v + e, B);
          next[static_cast<std::size_t>(w)] +=
              dist[static_cast<std::size_t>(v)] * step[static_cast<std::size_t>(e)];
        }
      }
      dist = next;
      growth[static_cast<std::size_t>(b) * (max_age + 1) + age] = dist;
    }
  }

  FiniteMdp mdp;
  mdp.num_states = static_cast<std::int32_t>(sp.states.size());
  mdp.sa_begin.reserve(sp.states.size() + 1);
  mdp.sa_begin.push_back(0);
  mdp.tr_begin.push_back(0);

  auto push_entry = [&mdp](std::int32_t target, double prob) {
    if (prob <= 0.0) return;
    mdp.tr_state.push_back(target);
    mdp.tr_prob.push_back(prob);
  };
  auto close_slot = [&mdp](std::int32_t label, double cost) {
    mdp.action_label.push_back(label);
    mdp.cost.push_back(cost);
    mdp.tr_begin.push_back(static_cast<std::int64_t>(mdp.tr_state.size()));
  };

  for (const NoiselessState& st : sp.states) {
    const int r = st.request, b = st.b_hat, delta = st.aocsi, d = st.aofbl;
    const int aged = std::min(delta + 1, A);

    // Hold: ages advance, inferred level frozen.
    {
      const int d_next = d > 0 ? std::min(d + 1, D) : 0;
      push_entry(sp.index_of(0, b, aged, d_next), 1.0 - eta);
      push_entry(sp.index_of(1, b, aged, d_next), eta);
      close_slot(0, static_cast<double>(r) * aged);
    }

    if (r == 1) {
      const int age = d > 0 ? d : delta;
      const std::vector<double>& beta =
          growth[static_cast<std::size_t>(b) * (max_age + 1) + age];
      const double eps = beta[0];
      for (int rn = 0; rn < 2; ++rn) {
        const double pr = rn == 1 ? eta : 1.0 - eta;
        if (pr <= 0.0) continue;
        push_entry(sp.index_of(rn, 0, aged, 1), pr * eps);
        for (int level = 1; level <= B; ++level)
          push_entry(sp.index_of(rn, level - 1, 1, 0),
                     pr * beta[static_cast<std::size_t>(level)]);
      }
      close_slot(1, eps * aged + 1.0 - eps);
    }
    mdp.sa_begin.push_back(static_cast<std::int64_t>(mdp.cost.size()));
  }
  return mdp;
}

NoPolicy solve_no_policy(const SensorParams& params, const RviOptions& opts) {
  NoPolicy out;
  out.space = enumerate_states(params.battery_capacity, params.max_aocsi,
                               params.max_aofbl);
  const FiniteMdp mdp = build_noiseless_mdp(params);
  const RviSolution sol = relative_value_iteration(mdp, opts);
  out.action = sol.policy;
  out.gain = sol.gain;
  out.iterations = sol.iterations;
  out.final_span = sol.final_span;
  return out;
}

void update_noiseless_tracker(NoiselessTracker& t, int action, int outcome,
                              int reported_battery, int max_aocsi, int max_aofbl) {
  if (action == 0 && outcome != 0)
    throw std::invalid_argument("outcome without a command");
  if (action == 1 && outcome == 0)
    throw std::invalid_argument("command needs a delivery or failure outcome");
  switch (outcome) {
    case 0:
      t.aocsi = std::min(t.aocsi + 1, max_aocsi);
      t.aofbl = t.aofbl > 0 ? std::min(t.aofbl + 1, max_aofbl) : 0;
      break;
    case 1:
      if (reported_battery < 1)
        throw std::invalid_argument("delivered update must report a positive level");
      t.b_hat = reported_battery - 1;
      t.aocsi = 1;
      t.aofbl = 0;
      break;
    case 2:
      t.b_hat = 0;
      t.aocsi = std::min(t.aocsi + 1, max_aocsi);
      t.aofbl = 1;
      break;
    default:
      throw std::invalid_argument("unknown outcome");
  }
}

}  // namespace pbsi
