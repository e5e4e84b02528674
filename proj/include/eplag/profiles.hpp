#pragma once

#include <array>
#include <cstddef>
#include <variant>
#include <vector>

#include <boost/math/special_functions/fpclassify.hpp>  // pchip.hpp needs isnan in scope
#include <boost/math/interpolators/pchip.hpp>

namespace eplag {

/// Bounded open interval (a0, b0) carrying the initial support.
struct Interval {
  double a0 = 0.0;
  double b0 = 0.0;

  double width() const { return b0 - a0; }
  double center() const { return 0.5 * (a0 + b0); }
  bool contains_closed(double x) const { return x >= a0 && x <= b0; }
};

/// Throws DegenerateDomain unless a0 < b0 and both are finite.
Interval make_interval(double a0, double b0);

/// Piecewise-cubic monotone (PCHIP) interpolant of tabulated samples. The
/// interpolant never leaves the range of neighbouring samples, so positive
/// samples give a positive density.
class Tabulated {
 public:
  Tabulated(std::vector<double> grid, std::vector<double> values);

  double operator()(double x) const;
  double prime(double x) const;
  /// Integral from grid.front() to x; exact for the cubic pieces.
  double integral_to(double x) const;
  /// Integral of y * f(y) over the whole grid; exact for the cubic pieces.
  double first_moment() const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  Tabulated scaled(double factor) const;

 private:
  double segment_integral(std::size_t k, double x) const;

  std::vector<double> grid_;
  std::vector<double> values_;
  boost::math::interpolators::pchip<std::vector<double>> interp_;
  std::vector<double> prefix_;
};

/// rho(x) = cos(pi (x - center) / width) / gamma_norm, vanishing at both ends.
struct CosineDensity {
  double gamma_norm = 1.0;
};

struct UniformDensity {
  double height = 1.0;
};

using DensityProfile = std::variant<CosineDensity, UniformDensity, Tabulated>;

/// u(x) = intercept + slope * x
struct LinearVelocity {
  double intercept = 0.0;
  double slope = 0.0;
};

struct ZeroVelocity {};

using VelocityProfile = std::variant<LinearVelocity, ZeroVelocity, Tabulated>;

double density_value(const DensityProfile& rho, const Interval& domain, double x);
/// Value and first two x-derivatives (second derivative by differencing for
/// tabulated data).
std::array<double, 3> density_jet(const DensityProfile& rho, const Interval& domain, double x);
double velocity_value(const VelocityProfile& u, double x);
double velocity_slope(const VelocityProfile& u, double x);

/// Exact total mass of a profile over the domain.
double profile_mass(const DensityProfile& rho, const Interval& domain);

/// Rescales rho so that it integrates to target_mass.
DensityProfile normalize_mass(const Interval& domain, const DensityProfile& rho, double target_mass);

struct InitialData {
  Interval domain;
  DensityProfile rho0;
  VelocityProfile u0;
  double m0 = 0.0;            // total mass
  double m1 = 0.0;            // initial momentum
  double first_moment = 0.0;  // int x rho0
  double gamma_cap = 0.0;     // (first_moment + m1) / m0
  std::size_t quadrature_n = 0;

  double rho(double x) const { return density_value(rho0, domain, x); }
  double u(double x) const { return velocity_value(u0, x); }
  double du(double x) const { return velocity_slope(u0, x); }
};

InitialData build_initial_data(const Interval& domain, const DensityProfile& rho,
                               const VelocityProfile& u, std::size_t quadrature_n = 4096);

/// int_{a0}^{x} rho0; throws OutOfDomain outside [a0, b0].
double cumulative_mass(const InitialData& data, double x);

/// Initial acceleration along characteristics,
/// -u0(x) - (x + 1) M0 + int y rho0 + 2 F(x).
double v0_prime(const InitialData& data, double x);

/// Stationary state: height m0/2 on (center - 1, center + 1), zero velocity.
InitialData steady_state(double m0, double center = 0.0);

/// Cosine bump on (-0.75, 0.75) normalized to mass m0 with u0 = intercept - c x.
InitialData cosine_data(double m0, double c, double intercept = 0.0, std::size_t quadrature_n = 4096);

}  // namespace eplag
