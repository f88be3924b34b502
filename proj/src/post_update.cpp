#include "pbsi/post_update.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbsi {

BlockEnergyDist block_energy_distribution(double lambda, double sigma, int n) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
  if (n < 1) throw std::invalid_argument("block length must be at least 1");
  BlockEnergyDist d;
  const double mean = static_cast<double>(n) * lambda;
  if (sigma == 0.0) {
    d.count = 1;
    d.point[0] = mean;
    d.prob[0] = 1.0;
    return d;
  }
  const double spread = 3.0 * sigma * std::sqrt(static_cast<double>(n));
  const double lo = std::max(mean - spread, 1.0);
  if (!(mean > lo))
    throw std::invalid_argument("block too short: mean energy must exceed the clipped low point");
  const double p_lo = sigma * std::sqrt(static_cast<double>(n)) / (6.0 * (mean - lo));
  if (p_lo > 17.0 / 18.0)
    throw std::invalid_argument("clipped low point takes more mass than available");
  d.count = 3;
  d.point[0] = lo;
  d.point[1] = mean;
  d.point[2] = mean + spread;
  d.prob[0] = p_lo;
  d.prob[1] = 17.0 / 18.0 - p_lo;
  d.prob[2] = 1.0 / 18.0;
  return d;
}

double block_cost(double b_hat, double e, int q, int n, double eta, double xi,
                  int max_aocsi) {
  if (n < 1) throw std::invalid_argument("block length must be at least 1");
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("eta must lie in (0, 1]");
  if (!(xi > 0.0 && xi <= 1.0)) throw std::invalid_argument("xi must lie in (0, 1]");
  if (max_aocsi < 2) throw std::invalid_argument("max_aocsi must be at least 2");
  const double cap = static_cast<double>(max_aocsi);
  const double slots = static_cast<double>(n);
  const double u = std::min(b_hat + e - static_cast<double>(q), slots * eta);
  if (u <= 0.0) return cap * slots * eta;
  if (slots / (xi * u) <= cap)
    return slots * eta - slots / 2.0 + slots * slots * eta / (2.0 * xi * u);
  return cap * slots * eta - (cap - 1.0) * xi * u -
         (cap - 1.0) * (cap - 2.0) * xi * u * (slots * eta - xi * u) /
             (2.0 * (slots - xi * u));
}

PostUpdateTable solve_post_update_values(const SensorParams& params,
                                         int block_length, const RviOptions& opts) {
  params.validate();
  const int B = params.battery_capacity;
  const double lambda = params.clipped_lambda();
  const double sigma = clipped_std(params.energy, B);
  if (block_length == 0)
    block_length = std::max(1, static_cast<int>(std::llround(B / lambda)));
  if (block_length < 1) throw std::invalid_argument("block length must be at least 1");

  PostUpdateTable out;
  out.battery_capacity = B;
  out.block_length = block_length;
  out.dist = block_energy_distribution(lambda, sigma, block_length);

  const double slots_eta = block_length * params.request_prob;
  FiniteMdp mdp;
  mdp.num_states = static_cast<std::int32_t>(out.dist.count * B);
  mdp.sa_begin.push_back(0);
  mdp.tr_begin.push_back(0);
  for (int j = 0; j < out.dist.count; ++j)
    for (int b = 0; b < B; ++b) {
      const double supply = b + out.dist.point[j];
      const int q_lo = static_cast<int>(std::ceil(
          std::clamp(supply - slots_eta, 0.0, static_cast<double>(B - 1))));
      const int q_hi = static_cast<int>(
          std::floor(std::min(supply, static_cast<double>(B - 1))));
      if (q_lo > q_hi)
        throw std::invalid_argument("empty carry-over action set; block too short");
      for (int q = q_lo; q <= q_hi; ++q) {
        for (int jn = 0; jn < out.dist.count; ++jn) {
          mdp.tr_state.push_back(static_cast<std::int32_t>(jn * B + q));
          mdp.tr_prob.push_back(out.dist.prob[jn]);
        }
        mdp.action_label.push_back(q);
        mdp.cost.push_back(block_cost(b, out.dist.point[j], q, block_length,
                                      params.request_prob, params.channel_success,
                                      params.max_aocsi));
        mdp.tr_begin.push_back(static_cast<std::int64_t>(mdp.tr_state.size()));
      }
      mdp.sa_begin.push_back(static_cast<std::int64_t>(mdp.cost.size()));
    }

  const RviSolution sol = relative_value_iteration(mdp, opts);
  out.block_gain = sol.gain;
  out.gain = sol.gain / block_length;
  out.iterations = sol.iterations;
  out.final_span = sol.final_span;
  out.mults_per_iter = sol.mults_per_iter;
  out.num_states = mdp.num_states;
  out.h_by_point = sol.bias;
  out.h.assign(static_cast<std::size_t>(B), 0.0);
  for (int b = 0; b < B; ++b) {
    double mixed = 0.0;
    for (int j = 0; j < out.dist.count; ++j)
      mixed += out.dist.prob[j] * sol.bias[static_cast<std::size_t>(j * B + b)];
    out.h[static_cast<std::size_t>(b)] = mixed;
  }
  return out;
}

double h_tilde_at(const PostUpdateTable& table, double b_hat) {
  const int top = table.battery_capacity - 1;
  if (b_hat <= 0.0) return table.h[0];
  if (b_hat >= static_cast<double>(top)) return table.h[static_cast<std::size_t>(top)];
  const int lo = static_cast<int>(std::floor(b_hat));
  const double frac = b_hat - lo;
  return (1.0 - frac) * table.h[static_cast<std::size_t>(lo)] +
         frac * table.h[static_cast<std::size_t>(lo + 1)];
}

}  // namespace pbsi
