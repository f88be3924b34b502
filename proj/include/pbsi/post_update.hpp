#pragma once

#include <cstdint>
#include <vector>

#include "pbsi/mdp.hpp"
#include "pbsi/params.hpp"

namespace pbsi {

// Three-point surrogate for the energy harvested over a block of n slots:
// mean point n*lambda and symmetric +-3 sigma sqrt(n) points, with the low
// point clipped at 1 and its mass adjusted to keep the tail weight.
struct BlockEnergyDist {
  int count = 0;          // 1 (sigma == 0) or 3
  double point[3] = {0, 0, 0};
  double prob[3] = {0, 0, 0};
};

BlockEnergyDist block_energy_distribution(double lambda, double sigma, int n);

// Expected on-demand age cost of one block that starts a fresh update cycle
// with inferred level b_hat, harvested energy e, and q units left unspent for
// the next block.  u = min(b_hat + e - q, n*eta) is the usable supply.
double block_cost(double b_hat, double e, int q, int n, double eta, double xi,
                  int max_aocsi);

// Block-level solve: states (carried level, harvested point), actions the
// feasible carried levels of the next block.
struct PostUpdateTable {
  int battery_capacity = 0;
  int block_length = 0;
  BlockEnergyDist dist;
  double gain = 0.0;            // per-slot average cost estimate g*
  double block_gain = 0.0;      // per-block gain from the solver
  std::vector<double> h;        // mixed bias h~(b_hat), b_hat in [0, capacity)
  std::vector<double> h_by_point;  // raw bias, layout [point * capacity + b_hat]
  long iterations = 0;
  double final_span = 0.0;
  std::int64_t mults_per_iter = 0;
  std::int32_t num_states = 0;
};

// block_length 0 picks round(capacity / lambda), clamped to at least 1.
PostUpdateTable solve_post_update_values(const SensorParams& params,
                                         int block_length = 0,
                                         const RviOptions& opts = {});

// Piecewise-linear read of h~ at a real-valued level, clamped to the table
// ends outside [0, capacity - 1].
double h_tilde_at(const PostUpdateTable& table, double b_hat);

}  // namespace pbsi
