#include "pbsi/params.hpp"

#include <stdexcept>

namespace pbsi {

void SensorParams::validate() const {
  if (battery_capacity < 1)
    throw std::invalid_argument("battery_capacity must be at least 1");
  if (max_aocsi < 2) throw std::invalid_argument("max_aocsi must be at least 2");
  if (max_aofbl < 1) throw std::invalid_argument("max_aofbl must be at least 1");
  if (!(weight > 0.0)) throw std::invalid_argument("weight must be positive");
  if (!(request_prob > 0.0 && request_prob <= 1.0))
    throw std::invalid_argument("request_prob must lie in (0, 1]");
  if (!(channel_success > 0.0 && channel_success <= 1.0))
    throw std::invalid_argument("channel_success must lie in (0, 1]");
  energy.validate();
}

double SensorParams::clipped_lambda() const {
  return clipped_mean(energy, battery_capacity);
}

void SystemConfig::validate() const {
  if (sensors.empty()) throw std::invalid_argument("at least one sensor is required");
  for (const SensorParams& s : sensors) s.validate();
  if (max_updates_per_slot < 1 ||
      max_updates_per_slot > static_cast<int>(sensors.size()))
    throw std::invalid_argument("max_updates_per_slot must lie in [1, num_sensors]");
}

}  // namespace pbsi
