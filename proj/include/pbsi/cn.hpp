#pragma once

#include <cstdint>
#include <vector>

#include "pbsi/params.hpp"
#include "pbsi/post_update.hpp"

namespace pbsi {

// Edge-side inferred battery/age triple under a noisy channel.  b_hat is the
// last explicitly reported level net of spending, aocsi counts slots since the
// last delivered update (no cap), aofbl is the real-valued estimated age of
// the battery since it was last known empty (0 while b_hat is explicit).
struct InferredPbsi {
  int b_hat = 0;
  long long aocsi = 1;
  double aofbl = 0.0;
};

// Age of the inferred battery level: aofbl when a failure pinned the level,
// otherwise the full aocsi.
double aoibl(long long aocsi, double aofbl);

enum class TxOutcome { None, Delivered, Failed };

struct CnContext {
  SensorParams params;
  double lambda = 0.0;        // clipped mean charging rate
  double p1 = 0.0;            // P{E > 0}
  PostUpdateTable values;     // g* and h~
};

CnContext make_cn_context(const SensorParams& params, int block_length = 0,
                          const RviOptions& opts = {});

InferredPbsi update_inferred_pbsi(const InferredPbsi& state, int action,
                                  TxOutcome outcome, int reported_battery,
                                  const CnContext& ctx);

// Expected slot count of the i-th request counted from the current slot.
double phi0(double i, double eta);
// Estimated slots until one battery unit is available with certainty margin.
double phi1(double b, double lambda, double eta, double xi);
double psi0(double delta, double i, double eta);
// Sum of truncated ages over the first i requests (integer i >= 0).
double psi1(double delta, long long i, double eta, int max_aocsi);
// Fractional-index extension of psi1.
double psi2(double delta, double x, double eta, int max_aocsi);

// Value estimates with the common N*g* term dropped (the finite-horizon
// anchor cancels in differences); the -phi0(i)*g* / -x*g* offsets remain.
double v_hat(const CnContext& ctx, double b, double delta, long long i);
double v_tilde(const CnContext& ctx, double b, double delta, double x);

// Estimated value of updating now versus at the next request, at the current
// age and surrogate level b_hat (>= 1 as used by the policy); negative means
// updating now is better.
double delta_v(const CnContext& ctx, double b_hat, long long delta);

int cn_decide(const CnContext& ctx, int request, const InferredPbsi& state);

// Decision grid over b_hat in [0, capacity) x aocsi in [1, delta_max],
// row-major with aocsi fastest.
std::vector<std::int8_t> cn_action_map(const CnContext& ctx, int delta_max);

}  // namespace pbsi
