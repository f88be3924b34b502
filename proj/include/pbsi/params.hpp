#pragma once

#include <vector>

#include "pbsi/energy.hpp"

namespace pbsi {

// One sensor: battery capacity, age caps, request/channel probabilities and
// the energy arrival model.
struct SensorParams {
  int battery_capacity = 15;   // integer units, >= 1
  int max_aocsi = 48;          // cost saturation age, >= 2
  int max_aofbl = 48;          // inferred-age cap for the exact solver, >= 1
  double weight = 1.0;         // cost weight, > 0
  double request_prob = 0.7;   // (0, 1]
  double channel_success = 0.7;  // (0, 1]
  EnergyModel energy = EnergyModel{};

  void validate() const;  // throws std::invalid_argument

  // E[min(E, battery_capacity)], the effective charging rate.
  double clipped_lambda() const;
};

struct SystemConfig {
  std::vector<SensorParams> sensors;
  int max_updates_per_slot = 1;  // K0

  void validate() const;
};

}  // namespace pbsi
