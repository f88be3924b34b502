#include "pbsi/ebsi.hpp"

#include <algorithm>

namespace pbsi {

FiniteMdp build_ebsi_mdp(const SensorParams& params) {
  params.validate();
  const int B = params.battery_capacity;
  const int A = params.max_aocsi;
  const double eta = params.request_prob;
  const double xi = params.channel_success;
  const EbsiSpace sp{B, A};
  const std::vector<double> step = clipped_pmf(params.energy, B);

  FiniteMdp mdp;
  mdp.num_states = sp.size();
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

  for (int r = 0; r < 2; ++r)
    for (int b = 0; b <= B; ++b)
      for (int delta = 1; delta <= A; ++delta) {
        const int aged = std::min(delta + 1, A);
        const int max_action = r == 1 ? 1 : 0;
        for (int a = 0; a <= max_action; ++a) {
          const int m = a == 1 && b >= 1 ? 1 : 0;
          const double succ = xi * m;
          for (int rn = 0; rn < 2; ++rn) {
            const double pr = rn == 1 ? eta : 1.0 - eta;
            if (pr <= 0.0) continue;
            for (int e = 0; e <= B; ++e) {
              const double pe = step[static_cast<std::size_t>(e)];
              if (pe <= 0.0) continue;
              const int bn = std::min(b - m + e, B);
              push_entry(sp.index_of(rn, bn, 1), pr * pe * succ);
              push_entry(sp.index_of(rn, bn, aged), pr * pe * (1.0 - succ));
            }
          }
          close_slot(a, static_cast<double>(r) * (succ + (1.0 - succ) * aged));
        }
        mdp.sa_begin.push_back(static_cast<std::int64_t>(mdp.cost.size()));
      }
  return mdp;
}

EbsiPolicy solve_ebsi_policy(const SensorParams& params, const RviOptions& opts) {
  EbsiPolicy out;
  out.space = EbsiSpace{params.battery_capacity, params.max_aocsi};
  const FiniteMdp mdp = build_ebsi_mdp(params);
  const RviSolution sol = relative_value_iteration(mdp, opts);
  out.action = sol.policy;
  out.gain = sol.gain;
  out.iterations = sol.iterations;
  out.final_span = sol.final_span;
  return out;
}

}  // namespace pbsi
