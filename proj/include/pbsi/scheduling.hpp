#pragma once

#include <cstdint>
#include <vector>

#include "pbsi/cn.hpp"
#include "pbsi/mdp.hpp"
#include "pbsi/params.hpp"
#include "pbsi/rng.hpp"

namespace pbsi {

// Per-slot view of one sensor as the selectors see it.
struct SensorSnapshot {
  std::int32_t id = 0;
  std::int8_t request = 0;
  std::int32_t b_hat = 0;
  long long aocsi = 1;
  double aofbl = 0.0;
  double weight = 1.0;
  double xi = 1.0;
  double p1 = 0.0;
  std::int32_t max_aocsi = 2;
};

// Expected one-slot age saving of commanding this sensor now: weight times
// the delivery probability (certain supply when a level is known, charged-
// since-empty probability otherwise) times the age that would be shed.
double weighted_update_gain(const SensorSnapshot& snap);

// Requesting sensors whose CN decision is 1; when more than budget compete,
// the largest weighted gains win (ties toward the lower id).  Returns
// selected sensor ids in increasing order.
std::vector<std::int32_t> wugc_select(const std::vector<SensorSnapshot>& snaps,
                                      const std::vector<std::int8_t>& cn_decisions,
                                      int budget);

// Requesting sensors with the largest truncated ages, ties toward lower id.
std::vector<std::int32_t> maf_select(const std::vector<SensorSnapshot>& snaps,
                                     int budget);

// Uniformly random subset of the CN candidates when they exceed the budget.
std::vector<std::int32_t> random_cn_select(const std::vector<SensorSnapshot>& snaps,
                                           const std::vector<std::int8_t>& cn_decisions,
                                           int budget, RngStream& rng);

// Age-threshold policy with separate request-slot / idle-slot thresholds;
// a threshold of max_aocsi + 1 never fires.
struct OftThresholds {
  int with_request = 1;
  int without_request = 1;
};

struct OftSearchResult {
  OftThresholds best;
  double best_cost = 0.0;
  int threshold_range = 0;          // thresholds scanned per axis
  std::vector<double> cost_table;   // row-major [with_request][without_request]
};

// Exhaustive scan over both threshold axes under common random numbers; the
// same pregenerated draws score every pair, and the scan order makes the
// argmin independent of the worker count.
OftSearchResult oft_search(const SensorParams& params, std::uint64_t seed,
                           long long eval_slots = 200000,
                           RviBackend backend = RviBackend::OpenMp,
                           int threads = 0);

}  // namespace pbsi
