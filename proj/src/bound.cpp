#include "pbsi/bound.hpp"

#include <cmath>
#include <stdexcept>

namespace pbsi {

namespace {

void check_cap(int max_aocsi) {
  if (max_aocsi < 2) throw std::domain_error("max_aocsi must be at least 2");
}

void check_rates(double eta, double xi, int max_aocsi) {
  check_cap(max_aocsi);
  if (!(eta > 0.0 && eta <= 1.0)) throw std::domain_error("eta must lie in (0, 1]");
  if (!(xi > 0.0 && xi <= 1.0)) throw std::domain_error("xi must lie in (0, 1]");
  if (xi * (static_cast<double>(max_aocsi) - 0.5) < 1.0)
    throw std::domain_error("xi below the admissible range 1 / (max_aocsi - 1/2)");
}

}  // namespace

double chi0(double x, int max_aocsi) {
  check_cap(max_aocsi);
  if (!(x >= 1.0)) throw std::domain_error("chi0 requires x >= 1");
  const double cap = static_cast<double>(max_aocsi);
  if (x <= cap) return x * x + x - 2.0;
  return 2.0 * cap * x - cap * cap + cap - 2.0;
}

double chi1(double x, int max_aocsi) {
  check_cap(max_aocsi);
  if (!(x >= 0.0)) throw std::domain_error("chi1 requires x >= 0");
  const double cap = static_cast<double>(max_aocsi);
  if (x <= cap - 0.5) return x * x + x - 2.0;
  return 2.0 * cap * x - cap * cap + cap - 2.25;
}

double lambda0(double eta, double xi, int max_aocsi) {
  check_rates(eta, xi, max_aocsi);
  const double cap = static_cast<double>(max_aocsi);
  return 1.0 / ((cap - 0.5) * xi + 1.0 / eta - 1.0);
}

double theta_lower_bound(double lambda, double eta, double xi, int max_aocsi) {
  check_rates(eta, xi, max_aocsi);
  if (!(lambda >= 0.0)) throw std::domain_error("lambda must be nonnegative");
  const double cap = static_cast<double>(max_aocsi);
  if (lambda >= lambda0(eta, xi, max_aocsi)) {
    const double y = std::min(lambda, eta);
    return eta / 2.0 + eta / (2.0 * xi * y) -
           (1.0 - eta) / xi * (1.0 - y / (2.0 * eta));
  }
  return eta * (cap - lambda * xi / 2.0 * (cap - 0.5) * (cap - 0.5)) -
         lambda * (1.0 - eta) * (cap - 1.0 / (2.0 * xi) - 0.5);
}

}  // namespace pbsi
