#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace pbsi {

// Sparse finite MDP in CSR-like form.  State s owns the action slots
// sa_begin[s] .. sa_begin[s+1]; slot k owns transition entries
// tr_begin[k] .. tr_begin[k+1].  Action labels within a state must be
// strictly increasing so that greedy ties resolve toward the lowest label.
struct FiniteMdp {
  std::int32_t num_states = 0;
  std::vector<std::int64_t> sa_begin;
  std::vector<std::int32_t> action_label;
  std::vector<double> cost;
  std::vector<std::int64_t> tr_begin;
  std::vector<std::int32_t> tr_state;
  std::vector<double> tr_prob;

  std::int64_t num_action_slots() const { return static_cast<std::int64_t>(cost.size()); }
  std::int64_t num_transitions() const { return static_cast<std::int64_t>(tr_prob.size()); }

  // Structural checks: shapes, action ordering, probability rows summing to 1
  // within 1e-9, valid target states.  Throws std::invalid_argument.
  void validate() const;
};

enum class RviBackend { Serial, OpenMp };

struct RviOptions {
  double tol = 1e-6;
  long max_iters = 100000;
  std::int32_t ref_state = 0;
  RviBackend backend = RviBackend::OpenMp;
  int threads = 0;  // 0 = runtime default
};

struct RviSolution {
  double gain = 0.0;
  std::vector<double> bias;           // h, zero at ref_state
  std::vector<std::int32_t> policy;   // greedy action label per state
  long iterations = 0;
  double final_span = 0.0;
  std::int64_t mults_per_iter = 0;    // inner-loop multiplications per sweep
};

struct ConvergenceError : std::runtime_error {
  ConvergenceError(double span_, long iterations_);
  double span;
  long iterations;
};

// Relative value iteration for the long-run average cost.  Jacobi sweeps (the
// new value vector is computed entirely from the previous one), so the OpenMP
// backend is bitwise identical to the serial reference.  Iterates on the
// standard damped (self-loop) form so periodic chains converge too; the
// returned gain/bias/span are on the original scale.
RviSolution relative_value_iteration(const FiniteMdp& mdp, const RviOptions& opts = {});

}  // namespace pbsi
