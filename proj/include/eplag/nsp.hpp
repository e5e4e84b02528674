#pragma once

#include <utility>

#include "eplag/profiles.hpp"

namespace eplag {

/// Boundary Riccati dynamics d' = -(d^2 + d + m0) of the viscous system at a
/// vacuum endpoint. Exponents must lie in {2} or [3, inf).
struct RiccatiSetup {
  double m0 = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  double gamma_adiabatic = 2.0;
  double alpha_viscosity = 2.0;
};

/// Real roots (d_plus, d_minus) of d^2 + d + m0, d_minus < d_plus < 0.
/// Throws ComplexRoots for m0 >= 1/4.
std::pair<double, double> d_roots(double m0);

RiccatiSetup make_riccati(double m0, double gamma_adiabatic = 2.0, double alpha_viscosity = 2.0);

struct BoundReport {
  double d0 = 0.0;
  double bound = 0.0;  // 1 / (d_minus - d0)
  double exact_blowup = 0.0;
  double numeric_blowup = 0.0;
};

/// Exact blow-up time of the Riccati solution started at d0 < d_minus.
/// Throws HypothesisViolated otherwise.
double exact_blowup(const RiccatiSetup& setup, double d0);

inline constexpr double kDefaultRiccatiDt = 1e-4;
inline constexpr double kDefaultBlowThreshold = -1e4;

BoundReport blowup_bound(const RiccatiSetup& setup, double d0, double dt = kDefaultRiccatiDt,
                         double blow_threshold = kDefaultBlowThreshold);

/// RK4 on the Riccati ODE until d <= blow_threshold (<= -1e3), then adds the
/// remaining time of the d' = -d^2 tail. The step is capped at 0.05/|d| so
/// the steep tail stays resolved.
double riccati_run(const RiccatiSetup& setup, double d0, double dt, double blow_threshold = kDefaultBlowThreshold);

/// Whether rho0 and its first two derivatives vanish at each endpoint.
struct VacuumBoundary {
  bool at_a0 = false;
  bool at_b0 = false;
  double du_a0 = 0.0;
  double du_b0 = 0.0;
};

VacuumBoundary vacuum_boundary(const InitialData& data, double tol = 1e-10);

}  // namespace eplag
