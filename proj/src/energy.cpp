#include "pbsi/energy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pbsi {

namespace {

constexpr double kProbSumTol = 1e-9;
constexpr double kTailResidual = 1e-12;

}  // namespace

EnergyModel EnergyModel::bernoulli(double p) {
  EnergyModel m;
  m.kind = EnergyKind::Bernoulli;
  m.param = p;
  m.validate();
  return m;
}

EnergyModel EnergyModel::poisson(double mean) {
  EnergyModel m;
  m.kind = EnergyKind::Poisson;
  m.param = mean;
  m.validate();
  return m;
}

EnergyModel EnergyModel::table(std::vector<int> support, std::vector<double> probs) {
  EnergyModel m;
  m.kind = EnergyKind::Table;
  m.support = std::move(support);
  m.probs = std::move(probs);
  m.validate();
  return m;
}

void EnergyModel::validate() const {
  switch (kind) {
    case EnergyKind::Bernoulli:
      if (!(param >= 0.0 && param <= 1.0))
        throw std::invalid_argument("bernoulli energy probability must lie in [0, 1]");
      break;
    case EnergyKind::Poisson:
      if (!(param > 0.0) || !std::isfinite(param))
        throw std::invalid_argument("poisson energy mean must be positive and finite");
      break;
    case EnergyKind::Table: {
      if (support.empty() || support.size() != probs.size())
        throw std::invalid_argument("table energy model needs matching nonempty support and probs");
      for (int v : support)
        if (v < 0) throw std::invalid_argument("table energy support must be nonnegative");
      double sum = 0.0;
      for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("table energy probs must be nonnegative");
        sum += p;
      }
      if (std::abs(sum - 1.0) > kProbSumTol)
        throw std::invalid_argument("table energy probs must sum to 1");
      break;
    }
  }
}

double EnergyModel::positive_prob() const {
  switch (kind) {
    case EnergyKind::Bernoulli:
      return param;
    case EnergyKind::Poisson:
      return 1.0 - std::exp(-param);
    case EnergyKind::Table: {
      double p0 = 0.0;
      for (std::size_t i = 0; i < support.size(); ++i)
        if (support[i] == 0) p0 += probs[i];
      return 1.0 - p0;
    }
  }
  return 0.0;
}

std::vector<double> clipped_pmf(const EnergyModel& model, int capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
  model.validate();
  std::vector<double> pmf(static_cast<std::size_t>(capacity) + 1, 0.0);
  switch (model.kind) {
    case EnergyKind::Bernoulli:
      pmf[0] = 1.0 - model.param;
      pmf[1] += model.param;
      break;
    case EnergyKind::Poisson: {
      // Exact: every arrival >= capacity lands on the capacity point, so the
      // sum below the cap is finite; the remainder (tail beyond the point
      // where the residual falls under kTailResidual, and everything at or
      // above the cap) is lumped at the cap.
      double p = std::exp(-model.param);
      double cum = 0.0;
      for (int e = 0; e < capacity; ++e) {
        pmf[static_cast<std::size_t>(e)] = p;
        cum += p;
        p *= model.param / static_cast<double>(e + 1);
        if (1.0 - cum < kTailResidual) break;
      }
      pmf[static_cast<std::size_t>(capacity)] = 1.0 - cum;
      break;
    }
    case EnergyKind::Table:
      for (std::size_t i = 0; i < model.support.size(); ++i) {
        int v = model.support[i] < capacity ? model.support[i] : capacity;
        pmf[static_cast<std::size_t>(v)] += model.probs[i];
      }
      break;
  }
  return pmf;
}

double clipped_mean(const EnergyModel& model, int capacity) {
  const std::vector<double> pmf = clipped_pmf(model, capacity);
  double mean = 0.0;
  for (std::size_t e = 0; e < pmf.size(); ++e) mean += static_cast<double>(e) * pmf[e];
  return mean;
}

double clipped_std(const EnergyModel& model, int capacity) {
  const std::vector<double> pmf = clipped_pmf(model, capacity);
  double mean = 0.0, second = 0.0;
  for (std::size_t e = 0; e < pmf.size(); ++e) {
    mean += static_cast<double>(e) * pmf[e];
    second += static_cast<double>(e) * static_cast<double>(e) * pmf[e];
  }
  double var = second - mean * mean;
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

int sample_energy(const EnergyModel& model, RngStream& rng) {
  switch (model.kind) {
    case EnergyKind::Bernoulli:
      return rng.bernoulli(model.param);
    case EnergyKind::Poisson: {
      const double u = rng.uniform();
      double p = std::exp(-model.param);
      double cum = p;
      int k = 0;
      while (u >= cum && k < 1024) {
        ++k;
        p *= model.param / static_cast<double>(k);
        cum += p;
      }
      return k;
    }
    case EnergyKind::Table: {
      const double u = rng.uniform();
      double cum = 0.0;
      for (std::size_t i = 0; i < model.support.size(); ++i) {
        cum += model.probs[i];
        if (u < cum) return model.support[i];
      }
      return model.support.back();
    }
  }
  return 0;
}

}  // namespace pbsi
