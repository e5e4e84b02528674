#include "eplag/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eplag/closed_form.hpp"
#include "eplag/error.hpp"
#include "eplag/quadrature.hpp"
#include "eplag/thresholds.hpp"

namespace eplag {

namespace {

L1Distance distance_at(const InitialData& data, const AsymptoticProfile& lim, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidArgument, "time must be finite and >= 0");
  const Interval& dom = data.domain;
  const double half = 0.5 * data.m0;
  L1Distance d;
  d.t = t;
  d.to_tilde = quad::simpson(
      [&](double x) { return std::abs(data.rho(x) - half * evaluate(data, x, t).etax); }, dom.a0, dom.b0,
      data.quadrature_n);
  const double lo = evaluate(data, dom.a0, t).eta;
  const double hi = evaluate(data, dom.b0, t).eta;
  const double overlap = std::max(0.0, std::min(hi, lim.omega_inf.b0) - std::max(lo, lim.omega_inf.a0));
  d.tilde_to_inf = half * ((hi - lo) + lim.omega_inf.width() - 2.0 * overlap);
  d.total_bound = d.to_tilde + d.tilde_to_inf;
  return d;
}

void require_global(const InitialData& data) {
  const Verdict v = classify(data);
  if (!v.is_global()) {
    throw Error(Errc::SupercriticalData,
                "data blows up at t = " + std::to_string(v.blowup->t_first_zero) + "; no long-time limit");
  }
}

}  // namespace

AsymptoticProfile limit_profile(const InitialData& data) {
  return {data.gamma_cap, make_interval(data.gamma_cap - 1.0, data.gamma_cap + 1.0), 0.5 * data.m0};
}

double eta_infinity(const InitialData& data, double x) {
  return (data.first_moment + data.m1 + 2.0 * cumulative_mass(data, x) - data.m0) / data.m0;
}

L1Distance l1_distance(const InitialData& data, double t) {
  require_global(data);
  return distance_at(data, limit_profile(data), t);
}

std::vector<L1Distance> l1_series(const InitialData& data, const std::vector<double>& times) {
  require_global(data);
  const AsymptoticProfile lim = limit_profile(data);
  std::vector<L1Distance> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(distance_at(data, lim, t));
  return out;
}

double decay_rate(double m0) {
  const MassRegime r = regime(m0);
  switch (r.variant) {
    case Regime::A:
      return 0.5 * (1.0 - r.sqrt_abs);
    case Regime::B:
      return 0.5 - kCriticalRateEpsilon;
    case Regime::C:
      break;
  }
  return 0.5;
}

RateReport fit_rate(const TimeSeries& series, std::optional<std::pair<double, double>> window) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, y] : series) {
    if (window && (t < window->first || t > window->second)) continue;
    if (!(y > 0.0)) throw Error(Errc::NonPositiveValues, "value " + std::to_string(y) + " at t = " + std::to_string(t));
    pts.emplace_back(t, std::log(y));
  }
  if (pts.size() < 8) throw Error(Errc::InvalidArgument, "rate fit needs at least eight samples in the window");

  const double n = static_cast<double>(pts.size());
  double mt = 0.0, my = 0.0;
  for (const auto& [t, y] : pts) {
    mt += t;
    my += y;
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0;
  for (const auto& [t, y] : pts) {
    stt += (t - mt) * (t - mt);
    sty += (t - mt) * (y - my);
  }
  if (!(stt > 0.0)) throw Error(Errc::InvalidArgument, "rate fit needs distinct times");
  const double slope = sty / stt;
  double ss = 0.0;
  for (const auto& [t, y] : pts) {
    const double r = y - (my + slope * (t - mt));
    ss += r * r;
  }

  RateReport rep;
  rep.lambda_fit = -slope;
  rep.fit_window = {pts.front().first, pts.back().first};
  rep.residual = std::sqrt(ss / n);
  return rep;
}

double aggregation_density(double m0, double rho0_at_x, double t) {
  if (!(m0 > 0.0)) throw Error(Errc::NonPositiveMass, "m0 must be positive");
  if (!(rho0_at_x > 0.0)) throw Error(Errc::NonPositiveDensity, "aggregation limit needs rho0 > 0");
  const double two_rho = 2.0 * rho0_at_x;
  return m0 * rho0_at_x / ((m0 - two_rho) * std::exp(-m0 * t) + two_rho);
}

}  // namespace eplag
