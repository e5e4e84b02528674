#include "eplag/closed_form.hpp"

#include <cmath>
#include <string>

#include "eplag/error.hpp"

namespace eplag {

namespace {

void check_domain(const InitialData& data, double x) {
  if (!data.domain.contains_closed(x)) {
    throw Error(Errc::OutOfDomain, "x = " + std::to_string(x) + " outside the initial support");
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(Errc::InvalidArgument, "time must be finite and >= 0");
}

// int_0^t e^{-s/2} cos(w s) ds and int_0^t e^{-s/2} sin(w s) ds, with 1/4 + w^2 = M0.
struct DampedTrig {
  double ic, is;
};

DampedTrig damped_trig(double omega, double m0, double t) {
  const double h = std::exp(-0.5 * t);
  const double cs = std::cos(omega * t);
  const double sn = std::sin(omega * t);
  return {(h * (-0.5 * cs + omega * sn) + 0.5) / m0, (h * (-0.5 * sn - omega * cs) + omega) / m0};
}

}  // namespace

char regime_letter(Regime r) {
  switch (r) {
    case Regime::A: return 'A';
    case Regime::B: return 'B';
    case Regime::C: return 'C';
  }
  return '?';
}

MassRegime regime(double m0) {
  if (!(m0 > 0.0) || !std::isfinite(m0)) throw Error(Errc::NonPositiveMass, "m0 must be positive");
  MassRegime r;
  r.xi = 1.0 - 4.0 * m0;
  if (r.xi > kRegimeTolerance) {
    r.variant = Regime::A;
    r.sqrt_abs = std::sqrt(r.xi);
  } else if (r.xi < -kRegimeTolerance) {
    r.variant = Regime::C;
    r.sqrt_abs = std::sqrt(-r.xi);
  } else {
    r.variant = Regime::B;
    r.sqrt_abs = 0.0;
  }
  return r;
}

Coefficients coefficients_at(const InitialData& data, double x) {
  check_domain(data, x);
  Coefficients k;
  k.regime = regime(data.m0);
  k.x = x;
  k.m0 = data.m0;
  k.drift = data.m1 / data.m0;
  k.rho0 = data.rho(x);
  k.du0 = data.du(x);

  const double m0 = data.m0;
  const double v0 = data.u(x);
  const double w0 = v0_prime(data, x);
  const double r = k.drift;
  const double rho = k.rho0;
  const double du = k.du0;
  const double sq = k.regime.sqrt_abs;

  switch (k.regime.variant) {
    case Regime::A: {
      CoefficientsA a;
      a.lambda1 = 0.5 * (-1.0 + sq);
      a.lambda2 = 0.5 * (-1.0 - sq);
      a.c1 = (a.lambda2 * v0 - w0 + a.lambda1 * r) / (a.lambda2 - a.lambda1);
      a.c2 = (-a.lambda1 * v0 + w0 - a.lambda2 * r) / (a.lambda2 - a.lambda1);
      a.dc1 = (a.lambda1 * du - m0 + 2.0 * rho) / sq;
      a.dc2 = (m0 - 2.0 * rho - a.lambda2 * du) / sq;
      k.c = a;
      break;
    }
    case Regime::B: {
      // general M0 keeps the branch continuous inside the tolerance band
      k.c = CoefficientsB{v0 - r, 0.5 * v0 + w0 + 0.5 * r, du, -0.5 * du - m0 + 2.0 * rho};
      break;
    }
    case Regime::C: {
      k.c = CoefficientsC{v0 - r, 2.0 / sq * (w0 + 0.5 * v0 + 0.5 * r), du,
                          2.0 / sq * (-0.5 * du - m0 + 2.0 * rho)};
      break;
    }
  }
  return k;
}

FlowState evaluate(const Coefficients& k, double t) {
  check_time(t);
  FlowState s;
  const double em = std::exp(-t);
  const double drift_int = k.drift * -std::expm1(-t);

  if (auto* a = std::get_if<CoefficientsA>(&k.c)) {
    const double e1 = std::exp(a->lambda1 * t);
    const double e2 = std::exp(a->lambda2 * t);
    const double g1 = std::expm1(a->lambda1 * t) / a->lambda1;
    const double g2 = std::expm1(a->lambda2 * t) / a->lambda2;
    s.v = a->c1 * e1 + a->c2 * e2 + k.drift * em;
    s.vx = a->dc1 * e1 + a->dc2 * e2;
    s.eta = k.x + a->c1 * g1 + a->c2 * g2 + drift_int;
    s.etax = 1.0 + a->dc1 * g1 + a->dc2 * g2;
  } else if (auto* b = std::get_if<CoefficientsB>(&k.c)) {
    const double h = std::exp(-0.5 * t);
    const double one_minus_h = -std::expm1(-0.5 * t);
    const double i1 = 2.0 * one_minus_h;                // int_0^t e^{-s/2}
    const double it = 4.0 * one_minus_h - 2.0 * t * h;  // int_0^t s e^{-s/2}
    s.v = b->c3 * h + b->c4 * t * h + k.drift * em;
    s.vx = b->dc3 * h + b->dc4 * t * h;
    s.eta = k.x + b->c3 * i1 + b->c4 * it + drift_int;
    s.etax = 1.0 + b->dc3 * i1 + b->dc4 * it;
  } else {
    const auto& c = std::get<CoefficientsC>(k.c);
    const double omega = 0.5 * k.regime.sqrt_abs;
    const double h = std::exp(-0.5 * t);
    const double cs = std::cos(omega * t);
    const double sn = std::sin(omega * t);
    const DampedTrig ints = damped_trig(omega, k.m0, t);
    s.v = h * (c.c5 * cs + c.c6 * sn) + k.drift * em;
    s.vx = h * (c.dc5 * cs + c.dc6 * sn);
    s.eta = k.x + c.c5 * ints.ic + c.c6 * ints.is + drift_int;
    s.etax = 1.0 + c.dc5 * ints.ic + c.dc6 * ints.is;
  }
  if (s.etax > 0.0) s.f = k.rho0 / s.etax;
  return s;
}

double etax_at(const Coefficients& k, double t) {
  if (auto* a = std::get_if<CoefficientsA>(&k.c)) {
    return 1.0 + a->dc1 * std::expm1(a->lambda1 * t) / a->lambda1 + a->dc2 * std::expm1(a->lambda2 * t) / a->lambda2;
  }
  if (auto* b = std::get_if<CoefficientsB>(&k.c)) {
    const double one_minus_h = -std::expm1(-0.5 * t);
    return 1.0 + b->dc3 * 2.0 * one_minus_h + b->dc4 * (4.0 * one_minus_h - 2.0 * t * std::exp(-0.5 * t));
  }
  const auto& c = std::get<CoefficientsC>(k.c);
  const DampedTrig ints = damped_trig(0.5 * k.regime.sqrt_abs, k.m0, t);
  return 1.0 + c.dc5 * ints.ic + c.dc6 * ints.is;
}

FlowState evaluate(const InitialData& data, double x, double t) { return evaluate(coefficients_at(data, x), t); }

double momentum(const InitialData& data, double t) {
  check_time(t);
  return data.m1 * std::exp(-t);
}

}  // namespace eplag
