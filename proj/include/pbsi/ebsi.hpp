#pragma once

#include <cstdint>
#include <vector>

#include "pbsi/mdp.hpp"
#include "pbsi/params.hpp"

namespace pbsi {

// Baseline with exact battery knowledge: state (request, battery, aocsi) with
// battery in [0, capacity] and aocsi in [1, max_aocsi].  Index layout
// (request * (capacity + 1) + battery) * max_aocsi + (aocsi - 1).
struct EbsiSpace {
  int battery_capacity = 0;
  int max_aocsi = 0;

  std::int32_t size() const {
    return static_cast<std::int32_t>(2 * (battery_capacity + 1) * max_aocsi);
  }
  std::int32_t index_of(int request, int battery, int aocsi) const {
    return static_cast<std::int32_t>(
        (static_cast<long long>(request) * (battery_capacity + 1) + battery) *
            max_aocsi +
        (aocsi - 1));
  }
};

// Average-cost MDP with a noisy channel (success probability
// params.channel_success); commands from an empty battery transmit nothing.
FiniteMdp build_ebsi_mdp(const SensorParams& params);

struct EbsiPolicy {
  EbsiSpace space;
  std::vector<std::int32_t> action;  // per state index
  double gain = 0.0;
  long iterations = 0;
  double final_span = 0.0;
};

EbsiPolicy solve_ebsi_policy(const SensorParams& params, const RviOptions& opts = {});

}  // namespace pbsi
