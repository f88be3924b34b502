#pragma once

#include <cstdint>
#include <vector>

#include "pbsi/mdp.hpp"
#include "pbsi/params.hpp"

namespace pbsi {

// Inferred battery/age state carried by the edge when failed commands imply an
// empty battery (noiseless feedback): last reported level b_hat, slots since
// the last delivered update (aocsi), slots since the last failed command
// started charging from empty (aofbl, 0 when b_hat is current).
struct NoiselessState {
  std::int16_t request = 0;
  std::int16_t b_hat = 0;    // [0, battery_capacity)
  std::int16_t aocsi = 1;    // [1, max_aocsi]
  std::int16_t aofbl = 0;    // [0, max_aofbl]
};

// A state is representable iff a positive aofbl pins b_hat to 0 and the pair
// (aocsi, aofbl) is reachable: an unsaturated aocsi always exceeds aofbl.
bool noiseless_state_feasible(int b_hat, int aocsi, int aofbl, int max_aocsi);

struct NoiselessSpace {
  int battery_capacity = 0;
  int max_aocsi = 0;
  int max_aofbl = 0;
  std::vector<NoiselessState> states;   // lexicographic (request, b_hat, aocsi, aofbl)
  std::vector<std::int32_t> index;      // dense map, -1 for infeasible tuples

  std::int32_t index_of(int request, int b_hat, int aocsi, int aofbl) const;
};

NoiselessSpace enumerate_states(int battery_capacity, int max_aocsi, int max_aofbl);

// Closed-form size of the feasible space (cross-checked against enumeration).
long long noiseless_state_count(int battery_capacity, int max_aocsi, int max_aofbl);

// Distribution of min(b_hat + sum of `age` arrivals, capacity) on
// {0, ..., capacity}; exact iterated convolution.
std::vector<double> battery_growth_distribution(int b_hat, int age,
                                                const EnergyModel& model,
                                                int capacity);

// Exact average-cost MDP over the feasible space; states in enumeration
// order, action labels 0 (hold) and 1 (command an update).  The channel is
// noiseless here, so params.channel_success is not consulted.
FiniteMdp build_noiseless_mdp(const SensorParams& params);

struct NoPolicy {
  NoiselessSpace space;
  std::vector<std::int32_t> action;  // per state, enumeration order
  double gain = 0.0;
  long iterations = 0;
  double final_span = 0.0;
};

NoPolicy solve_no_policy(const SensorParams& params, const RviOptions& opts = {});

// Tracker carrying the NoiselessState fields at run time; ages saturate at
// their caps so the tuple always indexes the solved table.
struct NoiselessTracker {
  int b_hat = 0;
  int aocsi = 1;
  int aofbl = 0;
};

// outcome: 0 = no command, 1 = delivered (reported_battery >= 1 is the level
// before spending), 2 = command failed / nothing arrived.
void update_noiseless_tracker(NoiselessTracker& t, int action, int outcome,
                              int reported_battery, int max_aocsi, int max_aofbl);

}  // namespace pbsi
