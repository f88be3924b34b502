#include "pbsi/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pbsi {

namespace {

constexpr double kRowSumTol = 1e-9;
// Damping weight of the self-loop (aperiodicity) transform.
constexpr double kDamping = 0.5;

}  // namespace

ConvergenceError::ConvergenceError(double span_, long iterations_)
    : std::runtime_error("relative value iteration did not converge: span " +
                         std::to_string(span_) + " after " +
                         std::to_string(iterations_) + " iterations"),
      span(span_),
      iterations(iterations_) {}

void FiniteMdp::validate() const {
  if (num_states <= 0) throw std::invalid_argument("mdp has no states");
  if (sa_begin.size() != static_cast<std::size_t>(num_states) + 1)
    throw std::invalid_argument("sa_begin size mismatch");
  if (sa_begin.front() != 0 || sa_begin.back() != num_action_slots())
    throw std::invalid_argument("sa_begin range mismatch");
  if (action_label.size() != cost.size())
    throw std::invalid_argument("action_label size mismatch");
  if (tr_begin.size() != cost.size() + 1)
    throw std::invalid_argument("tr_begin size mismatch");
  if (tr_begin.front() != 0 || tr_begin.back() != num_transitions())
    throw std::invalid_argument("tr_begin range mismatch");
  if (tr_state.size() != tr_prob.size())
    throw std::invalid_argument("transition arrays size mismatch");
  for (std::int32_t s = 0; s < num_states; ++s) {
    if (sa_begin[s + 1] <= sa_begin[s])
      throw std::invalid_argument("state " + std::to_string(s) + " has no actions");
    for (std::int64_t k = sa_begin[s]; k < sa_begin[s + 1]; ++k) {
      if (k > sa_begin[s] && action_label[k] <= action_label[k - 1])
        throw std::invalid_argument("action labels must increase within a state");
      if (tr_begin[k + 1] <= tr_begin[k])
        throw std::invalid_argument("action slot without transitions");
      double sum = 0.0;
      for (std::int64_t e = tr_begin[k]; e < tr_begin[k + 1]; ++e) {
        if (!(tr_prob[e] >= 0.0))
          throw std::invalid_argument("negative transition probability");
        if (tr_state[e] < 0 || tr_state[e] >= num_states)
          throw std::invalid_argument("transition target out of range");
        sum += tr_prob[e];
      }
      if (std::abs(sum - 1.0) > kRowSumTol)
        throw std::invalid_argument("transition row does not sum to 1");
    }
  }
}

namespace {

// One Jacobi sweep: per-state minimum of cost + expected previous bias, then
// the damped update.  Per-state arithmetic is a fixed sequential order, so the
// result does not depend on how states are distributed over threads.
inline void sweep_state(const FiniteMdp& mdp, const double* h, std::int32_t s,
                        double* v_new) {
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t k = mdp.sa_begin[s]; k < mdp.sa_begin[s + 1]; ++k) {
    double q = mdp.cost[k];
    for (std::int64_t e = mdp.tr_begin[k]; e < mdp.tr_begin[k + 1]; ++e)
      q += mdp.tr_prob[e] * h[mdp.tr_state[e]];
    if (q < best) best = q;
  }
  v_new[s] = (1.0 - kDamping) * h[s] + kDamping * best;
}

void sweep_serial(const FiniteMdp& mdp, const double* h, double* v_new) {
  for (std::int32_t s = 0; s < mdp.num_states; ++s) sweep_state(mdp, h, s, v_new);
}

void sweep_openmp(const FiniteMdp& mdp, const double* h, double* v_new, int threads) {
#ifdef _OPENMP
  if (threads > 0) {
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::int32_t s = 0; s < mdp.num_states; ++s) sweep_state(mdp, h, s, v_new);
  } else {
#pragma omp parallel for schedule(static)
    for (std::int32_t s = 0; s < mdp.num_states; ++s) sweep_state(mdp, h, s, v_new);
  }
#else
  (void)threads;
  sweep_serial(mdp, h, v_new);
#endif
}

}  // namespace

RviSolution relative_value_iteration(const FiniteMdp& mdp, const RviOptions& opts) {
  mdp.validate();
  if (opts.ref_state < 0 || opts.ref_state >= mdp.num_states)
    throw std::invalid_argument("ref_state out of range");
  if (!(opts.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (opts.max_iters < 1) throw std::invalid_argument("max_iters must be positive");

  const std::size_t n = static_cast<std::size_t>(mdp.num_states);
  std::vector<double> v_old(n, 0.0), v_new(n, 0.0), h(n, 0.0);
  const double stop_span = kDamping * opts.tol;

  long iter = 0;
  double span = std::numeric_limits<double>::infinity();
  bool converged = false;
  while (iter < opts.max_iters) {
    ++iter;
    if (opts.backend == RviBackend::Serial)
      sweep_serial(mdp, h.data(), v_new.data());
    else
      sweep_openmp(mdp, h.data(), v_new.data(), opts.threads);

    double dmax = -std::numeric_limits<double>::infinity();
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < n; ++s) {
      const double d = v_new[s] - v_old[s];
      if (d > dmax) dmax = d;
      if (d < dmin) dmin = d;
    }
    span = dmax - dmin;

    const double ref = v_new[static_cast<std::size_t>(opts.ref_state)];
    for (std::size_t s = 0; s < n; ++s) h[s] = v_new[s] - ref;
    std::swap(v_old, v_new);

    if (span < stop_span) {
      converged = true;
      break;
    }
  }
  if (!converged) throw ConvergenceError(span / kDamping, iter);

  RviSolution sol;
  sol.gain = v_old[static_cast<std::size_t>(opts.ref_state)] / kDamping;
  sol.bias = std::move(h);
  sol.iterations = iter;
  sol.final_span = span / kDamping;
  sol.mults_per_iter = mdp.num_transitions() + 2 * static_cast<std::int64_t>(n);

  sol.policy.resize(n);
  for (std::int32_t s = 0; s < mdp.num_states; ++s) {
    double best = std::numeric_limits<double>::infinity();
    std::int32_t best_label = mdp.action_label[mdp.sa_begin[s]];
    for (std::int64_t k = mdp.sa_begin[s]; k < mdp.sa_begin[s + 1]; ++k) {
      double q = mdp.cost[k];
      for (std::int64_t e = mdp.tr_begin[k]; e < mdp.tr_begin[k + 1]; ++e)
        q += mdp.tr_prob[e] * sol.bias[mdp.tr_state[e]];
      if (q < best) {
        best = q;
        best_label = mdp.action_label[k];
      }
    }
    sol.policy[static_cast<std::size_t>(s)] = best_label;
  }
  return sol;
}

}  // namespace pbsi
