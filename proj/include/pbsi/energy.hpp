#pragma once

#include <vector>

#include "pbsi/rng.hpp"

namespace pbsi {

enum class EnergyKind { Bernoulli, Poisson, Table };

// Per-slot energy arrival model.  Arrivals are nonnegative integer counts of
// battery units; everything above the battery capacity is absorbed at the cap.
struct EnergyModel {
  EnergyKind kind = EnergyKind::Bernoulli;
  double param = 0.0;              // success probability / Poisson mean
  std::vector<int> support;       // Table only
  std::vector<double> probs;      // Table only

  static EnergyModel bernoulli(double p);
  static EnergyModel poisson(double mean);
  static EnergyModel table(std::vector<int> support, std::vector<double> probs);

  void validate() const;          // throws std::invalid_argument

  // P{E > 0}.
  double positive_prob() const;
};

// pmf of min(E, capacity) on {0, ..., capacity}; exact, tail mass lumped at
// the capacity point.
std::vector<double> clipped_pmf(const EnergyModel& model, int capacity);

// E[min(E, capacity)] and the standard deviation of min(E, capacity).
double clipped_mean(const EnergyModel& model, int capacity);
double clipped_std(const EnergyModel& model, int capacity);

// Draws an (unclipped) arrival count by CDF inversion on one uniform.
int sample_energy(const EnergyModel& model, RngStream& rng);

}  // namespace pbsi
