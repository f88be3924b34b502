#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pbsi/mdp.hpp"
#include "pbsi/rng.hpp"

using namespace pbsi;

namespace {

// Incremental CSR builder for hand-made test chains.
struct Builder {
  FiniteMdp mdp;

  explicit Builder(int states) {
    mdp.num_states = states;
    mdp.sa_begin.assign(1, 0);
    mdp.tr_begin.assign(1, 0);
  }
  void state() { mdp.sa_begin.push_back(mdp.num_action_slots()); }
  void action(std::int32_t label, double cost,
              const std::vector<std::pair<std::int32_t, double>>& entries) {
    mdp.action_label.push_back(label);
    mdp.cost.push_back(cost);
    for (const auto& [to, p] : entries) {
      mdp.tr_state.push_back(to);
      mdp.tr_prob.push_back(p);
    }
    mdp.tr_begin.push_back(mdp.num_transitions());
  }
  FiniteMdp done() {
    while (static_cast<std::int32_t>(mdp.sa_begin.size()) <= mdp.num_states)
      state();
    mdp.validate();
    return mdp;
  }
};

FiniteMdp random_mdp(std::uint64_t seed, int states, int actions) {
  RngStream rng(seed);
  Builder b(states);
  for (int s = 0; s < states; ++s) {
    for (int a = 0; a < actions; ++a) {
      std::vector<std::pair<std::int32_t, double>> entries;
      double total = 0.0;
      for (int t = 0; t < states; ++t) {
        const double w = rng.uniform() + 0.01;
        entries.emplace_back(t, w);
        total += w;
      }
      for (auto& [to, p] : entries) p /= total;
      b.action(a, 10.0 * rng.uniform(), entries);
    }
    b.state();
  }
  return b.done();
}

double bellman_residual(const FiniteMdp& mdp, const RviSolution& sol) {
  double worst = 0.0;
  for (std::int32_t s = 0; s < mdp.num_states; ++s) {
    double best = 1e300;
    for (std::int64_t k = mdp.sa_begin[s]; k < mdp.sa_begin[s + 1]; ++k) {
      double q = mdp.cost[k];
      for (std::int64_t e = mdp.tr_begin[k]; e < mdp.tr_begin[k + 1]; ++e)
        q += mdp.tr_prob[e] * sol.bias[static_cast<std::size_t>(mdp.tr_state[e])];
      best = std::min(best, q);
    }
    worst = std::max(worst, std::abs(best - sol.gain - sol.bias[s]));
  }
  return worst;
}

}  // namespace

TEST_CASE("deterministic two-state cycle: exact gain and bias") {
  // 0 -(cost 1)-> 1 -(cost 3)-> 0.  Average cost 2; bias difference solves
  // g + h(0) = 1 + h(1).  A periodic chain, so this also exercises the
  // damped iteration's convergence.
  Builder b(2);
  b.action(0, 1.0, {{1, 1.0}});
  b.state();
  b.action(0, 3.0, {{0, 1.0}});
  b.state();
  const FiniteMdp mdp = b.done();

  const RviSolution sol = relative_value_iteration(mdp);
  CHECK(sol.gain == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sol.bias[0] == 0.0);
  CHECK(sol.bias[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(sol.final_span < 1e-6);
}

TEST_CASE("single state picks the cheaper action") {
  Builder b(1);
  b.action(0, 5.0, {{0, 1.0}});
  b.action(1, 3.0, {{0, 1.0}});
  const FiniteMdp mdp = b.done();

  const RviSolution sol = relative_value_iteration(mdp);
  CHECK(sol.gain == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(sol.policy[0] == 1);
}

TEST_CASE("greedy ties resolve to the lowest action label") {
  Builder b(1);
  b.action(2, 1.0, {{0, 1.0}});
  b.action(7, 1.0, {{0, 1.0}});
  const FiniteMdp mdp = b.done();
  const RviSolution sol = relative_value_iteration(mdp);
  CHECK(sol.policy[0] == 2);
}

TEST_CASE("random chains: Bellman residual below 10x tolerance") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const FiniteMdp mdp = random_mdp(seed, 12, 3);
    RviOptions opts;
    opts.tol = 1e-8;
    const RviSolution sol = relative_value_iteration(mdp, opts);
    CHECK(bellman_residual(mdp, sol) < 10 * opts.tol);
    CHECK(sol.bias[0] == 0.0);
    // Per-sweep multiplications stay linear in the transition count.
    CHECK(sol.mults_per_iter <= mdp.num_transitions() + 2 * mdp.num_states);
  }
}

TEST_CASE("cost shift moves the gain, not the policy") {
  const FiniteMdp base = random_mdp(17, 10, 2);
  FiniteMdp shifted = base;
  for (double& c : shifted.cost) c += 4.0;
  RviOptions opts;
  opts.tol = 1e-9;
  const RviSolution a = relative_value_iteration(base, opts);
  const RviSolution c = relative_value_iteration(shifted, opts);
  CHECK(c.gain == doctest::Approx(a.gain + 4.0).epsilon(1e-7));
  for (std::int32_t s = 0; s < base.num_states; ++s)
    CHECK(a.policy[s] == c.policy[s]);
}

TEST_CASE("serial and OpenMP backends agree bitwise") {
  const FiniteMdp mdp = random_mdp(23, 40, 4);
  RviOptions serial;
  serial.backend = RviBackend::Serial;
  RviOptions parallel;
  parallel.backend = RviBackend::OpenMp;
  parallel.threads = 3;
  const RviSolution a = relative_value_iteration(mdp, serial);
  const RviSolution b = relative_value_iteration(mdp, parallel);
  CHECK(a.gain == b.gain);
  CHECK(a.iterations == b.iterations);
  for (std::size_t s = 0; s < a.bias.size(); ++s) {
    CHECK(a.bias[s] == b.bias[s]);
    CHECK(a.policy[s] == b.policy[s]);
  }
}

TEST_CASE("iteration cap raises a convergence error") {
  const FiniteMdp mdp = random_mdp(31, 12, 3);
  RviOptions opts;
  opts.tol = 1e-12;
  opts.max_iters = 2;
  CHECK_THROWS_AS(relative_value_iteration(mdp, opts), ConvergenceError);
}

TEST_CASE("validation rejects malformed chains") {
  SUBCASE("row sum off by more than 1e-9") {
    Builder b(1);
    b.action(0, 1.0, {{0, 0.9}});
    CHECK_THROWS_AS(b.done(), std::invalid_argument);
  }
  SUBCASE("action labels out of order") {
    Builder b(1);
    b.action(1, 1.0, {{0, 1.0}});
    b.action(0, 1.0, {{0, 1.0}});
    CHECK_THROWS_AS(b.done(), std::invalid_argument);
  }
  SUBCASE("target state out of range") {
    Builder b(1);
    b.action(0, 1.0, {{5, 1.0}});
    CHECK_THROWS_AS(b.done(), std::invalid_argument);
  }
  SUBCASE("state without actions") {
    Builder b(2);
    b.action(0, 1.0, {{0, 1.0}});
    b.state();
    CHECK_THROWS_AS(b.done(), std::invalid_argument);
  }
}
