#include "pbsi/cn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pbsi {

double aoibl(long long aocsi, double aofbl) {
  return aofbl > 0.0 ? aofbl : static_cast<double>(aocsi);
}

CnContext make_cn_context(const SensorParams& params, int block_length,
                          const RviOptions& opts) {
  CnContext ctx;
  ctx.params = params;
  ctx.lambda = params.clipped_lambda();
  ctx.p1 = params.energy.positive_prob();
  ctx.values = solve_post_update_values(params, block_length, opts);
  return ctx;
}

InferredPbsi update_inferred_pbsi(const InferredPbsi& state, int action,
                                  TxOutcome outcome, int reported_battery,
                                  const CnContext& ctx) {
  if ((action == 0) != (outcome == TxOutcome::None))
    throw std::invalid_argument("outcome must accompany a command and only a command");
  InferredPbsi next;
  switch (outcome) {
    case TxOutcome::None:
      next.b_hat = state.b_hat;
      next.aocsi = state.aocsi + 1;
      next.aofbl = state.aofbl > 0.0 ? state.aofbl + 1.0 : 0.0;
      break;
    case TxOutcome::Delivered:
      if (reported_battery < 1)
        throw std::invalid_argument("delivered update must report a positive level");
      next.b_hat = reported_battery - 1;
      next.aocsi = 1;
      next.aofbl = 0.0;
      break;
    case TxOutcome::Failed: {
      next.aocsi = state.aocsi + 1;
      if (state.b_hat >= 1) {
        next.b_hat = state.b_hat - 1;
        next.aofbl = 0.0;
      } else {
        next.b_hat = 0;
        const double xi = ctx.params.channel_success;
        const double age = aoibl(state.aocsi, state.aofbl);
        const double theta = 1.0 - std::pow(1.0 - ctx.p1, age);
        next.aofbl =
            (1.0 - xi) * (age - theta / ctx.lambda) / (1.0 - theta * xi) + 1.0;
      }
      break;
    }
  }
  return next;
}

double phi0(double i, double eta) { return 1.0 + (i - 1.0) / eta; }

double phi1(double b, double lambda, double eta, double xi) {
  return std::max(1.0 / (xi * lambda) - b / lambda,
                  1.0 / (xi * eta) - 1.0 / eta + 1.0);
}

double psi0(double delta, double i, double eta) { return delta + phi0(i, eta); }

double psi1(double delta, long long i, double eta, int max_aocsi) {
  const double cap = static_cast<double>(max_aocsi);
  double sum = 0.0;
  for (long long j = 1; j <= i; ++j) {
    const double term = psi0(delta, static_cast<double>(j), eta);
    if (term >= cap) {
      sum += static_cast<double>(i - j + 1) * cap;
      break;
    }
    sum += term;
  }
  return sum;
}

double psi2(double delta, double x, double eta, int max_aocsi) {
  const double cap = static_cast<double>(max_aocsi);
  const double fl = std::floor(x);
  const double frac = x - fl;
  double sum = psi1(delta, static_cast<long long>(fl), eta, max_aocsi);
  if (frac > 0.0)
    sum += frac * std::min(psi0(delta, std::ceil(x), eta), cap);
  return sum;
}

double v_hat(const CnContext& ctx, double b, double delta, long long i) {
  const double eta = ctx.params.request_prob;
  const double lam = ctx.lambda;
  const double g = ctx.values.gain;
  const double steps = phi0(static_cast<double>(i), eta);
  return 1.0 + psi1(delta, i - 1, eta, ctx.params.max_aocsi) - steps * g +
         h_tilde_at(ctx.values, b - static_cast<double>(i) + lam * steps - lam);
}

double v_tilde(const CnContext& ctx, double b, double delta, double x) {
  const double eta = ctx.params.request_prob;
  const double lam = ctx.lambda;
  const double g = ctx.values.gain;
  const double spend = 1.0 + eta * (x - 1.0);
  const double level = std::max(b - spend + lam * x - lam, 0.0);
  return 1.0 + eta * psi2(delta, x - 1.0, eta, ctx.params.max_aocsi) - x * g +
         h_tilde_at(ctx.values, level);
}

double delta_v(const CnContext& ctx, double b_hat, long long delta) {
  if (b_hat < 0.0) throw std::invalid_argument("b_hat must be nonnegative");
  if (delta < 1) throw std::invalid_argument("delta must be at least 1");
  const double eta = ctx.params.request_prob;
  const double xi = ctx.params.channel_success;
  const double lam = ctx.lambda;
  const double g = ctx.values.gain;
  const double cap_b = static_cast<double>(ctx.params.battery_capacity);
  const double del = static_cast<double>(delta);

  const double b0 = std::min(b_hat + lam * del, cap_b);
  const long long nbar = static_cast<long long>(std::floor(b0));
  const double b0p = std::min(b0 + lam / eta, cap_b);
  const double gap = phi0(static_cast<double>(nbar), eta);
  const double b1 = b0 - static_cast<double>(nbar) + lam * gap;
  const double b2 = b0p - static_cast<double>(nbar) + lam * gap;

  double now = 0.0, later = 0.0;
  double wfail = 1.0;  // (1 - xi)^(i - 1)
  for (long long i = 1; i <= nbar; ++i) {
    now += xi * wfail * v_hat(ctx, b0, del, i);
    later += xi * wfail * v_hat(ctx, b0p - lam / eta + 1.0, del, i + 1);
    wfail *= 1.0 - xi;
  }
  if (wfail > 0.0) {
    now += wfail *
           (psi1(del, nbar, eta, ctx.params.max_aocsi) +
            v_tilde(ctx, b1, psi0(del, static_cast<double>(nbar), eta),
                    phi1(b1, lam, eta, xi)) -
            gap * g);
    later += wfail *
             (psi1(del, nbar + 1, eta, ctx.params.max_aocsi) +
              v_tilde(ctx, b2, psi0(del, static_cast<double>(nbar) + 1.0, eta),
                      phi1(b2, lam, eta, xi)) -
              phi0(static_cast<double>(nbar) + 1.0, eta) * g);
  }
  return now - later;
}

int cn_decide(const CnContext& ctx, int request, const InferredPbsi& state) {
  if (request == 0) return 0;
  const double b = state.b_hat >= 1 ? static_cast<double>(state.b_hat) : 1.0;
  return delta_v(ctx, b, state.aocsi) < 0.0 ? 1 : 0;
}

std::vector<std::int8_t> cn_action_map(const CnContext& ctx, int delta_max) {
  if (delta_max < 1) throw std::invalid_argument("delta_max must be at least 1");
  const int B = ctx.params.battery_capacity;
  std::vector<std::int8_t> map(static_cast<std::size_t>(B) * delta_max, 0);
  for (int b = 0; b < B; ++b) {
    const double surrogate = b >= 1 ? static_cast<double>(b) : 1.0;
    for (int delta = 1; delta <= delta_max; ++delta)
      map[static_cast<std::size_t>(b) * delta_max + (delta - 1)] =
          delta_v(ctx, surrogate, delta) < 0.0 ? 1 : 0;
  }
  return map;
}

}  // namespace pbsi
