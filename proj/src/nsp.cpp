#include "eplag/nsp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eplag/error.hpp"

namespace eplag {

namespace {

bool admissible_exponent(double e) { return e == 2.0 || (e >= 3.0 && std::isfinite(e)); }

double rhs(const RiccatiSetup& s, double d) { return -(d - s.d_plus) * (d - s.d_minus); }

void require_hypothesis(const RiccatiSetup& s, double d0) {
  if (!std::isfinite(d0) || !(d0 < s.d_minus)) {
    throw Error(Errc::HypothesisViolated,
                "need d0 < d_minus = " + std::to_string(s.d_minus) + ", got " + std::to_string(d0));
  }
}

}  // namespace

std::pair<double, double> d_roots(double m0) {
  if (!(m0 > 0.0)) throw Error(Errc::NonPositiveMass, "m0 must be positive");
  const double xi = 1.0 - 4.0 * m0;
  if (!(xi > 0.0)) throw Error(Errc::ComplexRoots, "d^2 + d + m0 has no distinct real roots for m0 >= 1/4");
  const double d_minus = -0.5 * (1.0 + std::sqrt(xi));
  return {m0 / d_minus, d_minus};
}

RiccatiSetup make_riccati(double m0, double gamma_adiabatic, double alpha_viscosity) {
  if (!admissible_exponent(gamma_adiabatic) || !admissible_exponent(alpha_viscosity)) {
    throw Error(Errc::InvalidArgument, "exponents must be 2 or at least 3");
  }
  const auto [dp, dm] = d_roots(m0);
  return {m0, dp, dm, gamma_adiabatic, alpha_viscosity};
}

double exact_blowup(const RiccatiSetup& setup, double d0) {
  require_hypothesis(setup, d0);
  const double root_gap = setup.d_plus - setup.d_minus;
  // w = (d - d_plus)/(d - d_minus) decays like exp(-gap t) and blow-up is w = 1
  return std::log1p(root_gap / (setup.d_minus - d0)) / root_gap;
}

BoundReport blowup_bound(const RiccatiSetup& setup, double d0, double dt, double blow_threshold) {
  BoundReport r;
  r.d0 = d0;
  r.exact_blowup = exact_blowup(setup, d0);
  r.bound = 1.0 / (setup.d_minus - d0);
  r.numeric_blowup = riccati_run(setup, d0, dt, blow_threshold);
  return r;
}

double riccati_run(const RiccatiSetup& setup, double d0, double dt, double blow_threshold) {
  require_hypothesis(setup, d0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(Errc::InvalidArgument, "dt must be positive");
  if (!(blow_threshold <= -1e3)) throw Error(Errc::InvalidArgument, "blow-up threshold must be <= -1e3");

  double t = 0.0, d = d0;
  while (d > blow_threshold) {
    const double h = std::min(dt, 0.05 / std::abs(d));
    const double k1 = rhs(setup, d);
    const double k2 = rhs(setup, d + 0.5 * h * k1);
    const double k3 = rhs(setup, d + 0.5 * h * k2);
    const double k4 = rhs(setup, d + h * k3);
    d += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += h;
    if (!std::isfinite(d) || !std::isfinite(t)) {
      throw Error(Errc::NonFiniteState, "Riccati state overflowed after t = " + std::to_string(t));
    }
  }
  return t - 1.0 / d;
}

VacuumBoundary vacuum_boundary(const InitialData& data, double tol) {
  auto vanishes = [&](double x) {
    const auto jet = density_jet(data.rho0, data.domain, x);
    return std::all_of(jet.begin(), jet.end(), [&](double v) { return std::abs(v) <= tol; });
  };
  return {vanishes(data.domain.a0), vanishes(data.domain.b0), data.du(data.domain.a0), data.du(data.domain.b0)};
}

}  // namespace eplag
