#pragma once

namespace pbsi {

// Closed-form lower bound on the long-run average on-demand age cost of a
// single sensor, together with its helper curves.  All functions take the
// age cap max_aocsi >= 2 and throw std::domain_error outside their domains.

// Cumulative truncated-age curve 2 * sum_{t=2..x} min(t, cap), extended to
// real x >= 1.
double chi0(double x, int max_aocsi);

// Convex C^1 relaxation of chi0, defined for x >= 0 with the knee moved to
// cap - 1/2.
double chi1(double x, int max_aocsi);

// Charging-rate threshold between the energy-limited and request-limited
// branches of the bound.  Requires eta, xi in (0, 1] and
// xi >= 1 / (max_aocsi - 1/2).
double lambda0(double eta, double xi, int max_aocsi);

// The bound itself; lambda is the clipped mean charging rate, >= 0.
double theta_lower_bound(double lambda, double eta, double xi, int max_aocsi);

}  // namespace pbsi
