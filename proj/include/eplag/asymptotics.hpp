#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "eplag/profiles.hpp"

namespace eplag {

/// Constant density height on the width-2 interval omega_inf.
struct AsymptoticProfile {
  double gamma_cap = 0.0;
  Interval omega_inf;
  double height = 0.0;
};

AsymptoticProfile limit_profile(const InitialData& data);

/// Limit of the characteristic starting at x; maps [a0, b0] onto
/// [gamma - 1, gamma + 1].
double eta_infinity(const InitialData& data, double x);

struct L1Distance {
  double t = 0.0;
  double to_tilde = 0.0;      // rho(t) against M0/2 on the current support
  double tilde_to_inf = 0.0;  // current support against the limit support
  double total_bound = 0.0;   // upper bound on the distance to the limit
};

/// Throws SupercriticalData unless the data is classified Global.
L1Distance l1_distance(const InitialData& data, double t);

/// Same, classifying once for the whole series.
std::vector<L1Distance> l1_series(const InitialData& data, const std::vector<double>& times);

/// Guaranteed exponential rate of the L1 bound.
double decay_rate(double m0);

/// Width removed from 1/2 in the critically damped case.
inline constexpr double kCriticalRateEpsilon = 1e-3;

struct RateReport {
  std::optional<double> lambda_theory;
  double lambda_fit = 0.0;  // minus the fitted slope of ln(value)
  std::pair<double, double> fit_window{0.0, 0.0};
  double residual = 0.0;  // rms of ln residuals
};

using TimeSeries = std::vector<std::pair<double, double>>;

/// Least-squares line through (t, ln value) for t in the window (the whole
/// series when empty). Needs at least eight samples in the window.
RateReport fit_rate(const TimeSeries& series, std::optional<std::pair<double, double>> window = std::nullopt);

/// Density along a characteristic of the aggregation limit,
/// M0 rho0 / ((M0 - 2 rho0) exp(-M0 t) + 2 rho0).
double aggregation_density(double m0, double rho0_at_x, double t);

}  // namespace eplag
