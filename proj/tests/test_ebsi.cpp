#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "pbsi/ebsi.hpp"
#include "pbsi/noiseless.hpp"

using namespace pbsi;

namespace {

SensorParams small_params(double eta, double xi, double lambda) {
  SensorParams p;
  p.battery_capacity = 2;
  p.max_aocsi = 3;
  p.max_aofbl = 2;
  p.request_prob = eta;
  p.channel_success = xi;
  p.energy = EnergyModel::bernoulli(lambda);
  return p;
}

double discounted_gain(const FiniteMdp& mdp, double gamma, std::size_t probe) {
  std::vector<double> v(static_cast<std::size_t>(mdp.num_states), 0.0);
  std::vector<double> w(v.size());
  for (int it = 0; it < 500000; ++it) {
    double change = 0.0;
    for (std::int32_t s = 0; s < mdp.num_states; ++s) {
      double best = 1e300;
      for (std::int64_t k = mdp.sa_begin[s]; k < mdp.sa_begin[s + 1]; ++k) {
        double q = mdp.cost[static_cast<std::size_t>(k)];
        for (std::int64_t e = mdp.tr_begin[k]; e < mdp.tr_begin[k + 1]; ++e)
          q += gamma * mdp.tr_prob[static_cast<std::size_t>(e)] *
               v[static_cast<std::size_t>(mdp.tr_state[e])];
        best = std::min(best, q);
      }
      w[static_cast<std::size_t>(s)] = best;
      change = std::max(change, std::abs(best - v[static_cast<std::size_t>(s)]));
    }
    v.swap(w);
    if (change < 1e-10) break;
  }
  return (1.0 - gamma) * v[probe];
}

}  // namespace

TEST_CASE("state indexing covers the full box") {
  EbsiSpace sp;
  sp.battery_capacity = 3;
  sp.max_aocsi = 5;
  CHECK(sp.size() == 2 * 4 * 5);
  std::vector<char> hit(static_cast<std::size_t>(sp.size()), 0);
  for (int r = 0; r < 2; ++r)
    for (int b = 0; b <= 3; ++b)
      for (int delta = 1; delta <= 5; ++delta) {
        const std::int32_t i = sp.index_of(r, b, delta);
        REQUIRE(i >= 0);
        REQUIRE(i < sp.size());
        hit[static_cast<std::size_t>(i)] = 1;
      }
  for (char c : hit) CHECK(c == 1);
}

TEST_CASE("built chain is structurally valid") {
  const FiniteMdp mdp = build_ebsi_mdp(small_params(0.6, 0.7, 0.4));
  mdp.validate();
  CHECK(mdp.num_states == 2 * 3 * 3);

  // Transmitting from an empty battery is a no-op: both action slots of
  // (r=1, b=0, delta) carry the same cost and transition row.
  const EbsiSpace sp{2, 3};
  const std::int32_t s = sp.index_of(1, 0, 2);
  REQUIRE(mdp.sa_begin[s + 1] - mdp.sa_begin[s] == 2);
  const std::int64_t hold = mdp.sa_begin[s], tx = hold + 1;
  CHECK(mdp.cost[static_cast<std::size_t>(hold)] ==
        mdp.cost[static_cast<std::size_t>(tx)]);
  const std::int64_t n = mdp.tr_begin[hold + 1] - mdp.tr_begin[hold];
  REQUIRE(mdp.tr_begin[tx + 1] - mdp.tr_begin[tx] == n);
  for (std::int64_t i = 0; i < n; ++i) {
    CHECK(mdp.tr_state[static_cast<std::size_t>(mdp.tr_begin[hold] + i)] ==
          mdp.tr_state[static_cast<std::size_t>(mdp.tr_begin[tx] + i)]);
    CHECK(mdp.tr_prob[static_cast<std::size_t>(mdp.tr_begin[hold] + i)] ==
          mdp.tr_prob[static_cast<std::size_t>(mdp.tr_begin[tx] + i)]);
  }
}

TEST_CASE("discounted sandwich brackets the solved gain") {
  const SensorParams p = small_params(0.6, 0.7, 0.4);
  const FiniteMdp mdp = build_ebsi_mdp(p);
  const EbsiPolicy solved = solve_ebsi_policy(p);
  CHECK(solved.gain ==
        doctest::Approx(discounted_gain(mdp, 0.9999, 0)).epsilon(0.01));
}

TEST_CASE("degenerate full-rate instance costs exactly 1") {
  // eta = xi = 1 and one unit of charge per slot: transmit every slot,
  // every update lands, the age is pinned at 1.
  SensorParams p = small_params(1.0, 1.0, 0.5);
  p.energy = EnergyModel::table({1}, {1.0});
  const EbsiPolicy solved = solve_ebsi_policy(p);
  CHECK(solved.gain == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("observing the true battery cannot hurt") {
  // At xi = 1 failed commands reveal the battery exactly, so the
  // inferred-state controller ties; the true-battery controller can only
  // match or beat it.
  for (double lambda : {0.2, 0.5}) {
    SensorParams p = small_params(0.7, 1.0, lambda);
    const EbsiPolicy ebsi = solve_ebsi_policy(p);
    const NoPolicy no = solve_no_policy(p);
    CHECK(ebsi.gain <= no.gain + 1e-5);
  }
}

TEST_CASE("gain weakly improves with channel quality and charge rate") {
  double prev = 1e300;
  for (double xi : {0.4, 0.7, 1.0}) {
    const EbsiPolicy solved = solve_ebsi_policy(small_params(0.6, xi, 0.3));
    CHECK(solved.gain <= prev + 1e-9);
    prev = solved.gain;
  }
  prev = 1e300;
  for (double lambda : {0.1, 0.3, 0.6}) {
    const EbsiPolicy solved = solve_ebsi_policy(small_params(0.6, 0.7, lambda));
    CHECK(solved.gain <= prev + 1e-9);
    prev = solved.gain;
  }
}

TEST_CASE("reference instance regression pin") {
  SensorParams p;
  p.request_prob = 0.7;
  p.channel_success = 1.0;
  p.energy = EnergyModel::bernoulli(0.12);
  const EbsiPolicy solved = solve_ebsi_policy(p);
  CHECK(solved.space.size() == 1536);
  // Pinned from the converged solver at tol 1e-6; guards against silent
  // drift in the transition builder.
  CHECK(solved.gain == doctest::Approx(3.068089).epsilon(1e-4));
}
