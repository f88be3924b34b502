#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "pbsi/energy.hpp"
#include "pbsi/rng.hpp"

using namespace pbsi;

namespace {

// Survival-sum identity: E[min(E, c)] = sum_{k=0}^{c-1} P{E > k}.  Evaluated
// here directly from the clipped pmf's complementary sums as an independent
// route to the mean.
double mean_by_survival(const std::vector<double>& pmf) {
  double mean = 0.0, below = 0.0;
  for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
    below += pmf[k];
    mean += 1.0 - below;
  }
  return mean;
}

}  // namespace

TEST_CASE("bernoulli clipped pmf is exact") {
  const EnergyModel m = EnergyModel::bernoulli(0.12);
  const std::vector<double> pmf = clipped_pmf(m, 15);
  REQUIRE(pmf.size() == 16);
  CHECK(pmf[0] == doctest::Approx(0.88).epsilon(1e-12));
  CHECK(pmf[1] == doctest::Approx(0.12).epsilon(1e-12));
  for (std::size_t k = 2; k < pmf.size(); ++k) CHECK(pmf[k] == 0.0);
  CHECK(clipped_mean(m, 15) == doctest::Approx(0.12).epsilon(1e-12));
  // Var = p(1-p) for an indicator.
  CHECK(clipped_std(m, 15) ==
        doctest::Approx(std::sqrt(0.12 * 0.88)).epsilon(1e-12));
  CHECK(m.positive_prob() == doctest::Approx(0.12).epsilon(1e-12));
}

TEST_CASE("poisson clipped pmf sums to one and matches closed forms") {
  const double mu = 0.25;
  const EnergyModel m = EnergyModel::poisson(mu);
  const std::vector<double> pmf = clipped_pmf(m, 15);
  REQUIRE(pmf.size() == 16);
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Interior points are plain Poisson masses.
  double fact = 1.0;
  for (int k = 0; k < 15; ++k) {
    if (k > 0) fact *= k;
    CHECK(pmf[static_cast<std::size_t>(k)] ==
          doctest::Approx(std::exp(-mu) * std::pow(mu, k) / fact).epsilon(1e-12));
  }
  CHECK(m.positive_prob() == doctest::Approx(1.0 - std::exp(-mu)).epsilon(1e-12));
  // Clipping at 15 removes ~1e-18 of mass, so the clipped mean is mu to
  // double precision here.
  CHECK(clipped_mean(m, 15) == doctest::Approx(mu).epsilon(1e-12));
}

TEST_CASE("poisson clipping at a tight capacity lumps the tail") {
  const EnergyModel m = EnergyModel::poisson(2.0);
  const std::vector<double> pmf = clipped_pmf(m, 2);
  REQUIRE(pmf.size() == 3);
  const double p0 = std::exp(-2.0), p1 = 2.0 * std::exp(-2.0);
  CHECK(pmf[0] == doctest::Approx(p0).epsilon(1e-12));
  CHECK(pmf[1] == doctest::Approx(p1).epsilon(1e-12));
  CHECK(pmf[2] == doctest::Approx(1.0 - p0 - p1).epsilon(1e-12));
  CHECK(clipped_mean(m, 2) ==
        doctest::Approx(mean_by_survival(pmf)).epsilon(1e-12));
}

TEST_CASE("table model round-trips and validates") {
  const EnergyModel m = EnergyModel::table({0, 1, 3}, {0.5, 0.3, 0.2});
  const std::vector<double> pmf = clipped_pmf(m, 2);
  REQUIRE(pmf.size() == 3);
  CHECK(pmf[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pmf[1] == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(pmf[2] == doctest::Approx(0.2).epsilon(1e-12));  // 3 clips to 2
  CHECK(clipped_mean(m, 2) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(m.positive_prob() == doctest::Approx(0.5).epsilon(1e-12));

  CHECK_THROWS_AS(EnergyModel::table({0, 1}, {0.5, 0.6}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel::table({-1, 1}, {0.5, 0.5}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel::table({0, 1}, {0.5}).validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel::bernoulli(1.2).validate(), std::invalid_argument);
  CHECK_THROWS_AS(EnergyModel::poisson(-1.0).validate(), std::invalid_argument);
}

TEST_CASE("clipped mean equals survival-sum oracle across models") {
  const EnergyModel models[] = {
      EnergyModel::bernoulli(0.3), EnergyModel::poisson(1.7),
      EnergyModel::table({0, 2, 5}, {0.2, 0.5, 0.3})};
  for (const EnergyModel& m : models)
    for (int cap : {1, 2, 3, 7}) {
      const std::vector<double> pmf = clipped_pmf(m, cap);
      CHECK(clipped_mean(m, cap) ==
            doctest::Approx(mean_by_survival(pmf)).epsilon(1e-12));
      CHECK(std::accumulate(pmf.begin(), pmf.end(), 0.0) ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampling frequencies match the pmf") {
  const EnergyModel m = EnergyModel::poisson(0.8);
  RngStream rng(derive_substream(11, 0, 0, StreamKind::Energy));
  const int n = 200000;
  std::vector<long> counts(12, 0);
  for (int i = 0; i < n; ++i) {
    const int e = sample_energy(m, rng);
    REQUIRE(e >= 0);
    if (e < static_cast<int>(counts.size())) ++counts[static_cast<std::size_t>(e)];
  }
  const std::vector<double> pmf = clipped_pmf(m, 11);
  for (int k = 0; k <= 4; ++k) {
    const double expect = pmf[static_cast<std::size_t>(k)] * n;
    CHECK(std::abs(counts[static_cast<std::size_t>(k)] - expect) <
          5.0 * std::sqrt(expect) + 5.0);
  }
}

TEST_CASE("sampling a table model hits only support points") {
  const EnergyModel m = EnergyModel::table({1, 4}, {0.25, 0.75});
  RngStream rng(3);
  long ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const int e = sample_energy(m, rng);
    REQUIRE((e == 1 || e == 4));
    ones += e == 1;
  }
  CHECK(std::abs(ones / double(n) - 0.25) < 0.01);
}
