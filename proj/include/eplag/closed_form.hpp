#pragma once

#include <optional>
#include <variant>

#include "eplag/profiles.hpp"

namespace eplag {

/// Overdamped (A), critically damped (B) and oscillatory (C) branches of
/// v'' + v' + M0 v = M1 exp(-t).
enum class Regime { A, B, C };

char regime_letter(Regime r);

/// |1 - 4 M0| <= this is treated as the critically damped case.
inline constexpr double kRegimeTolerance = 1e-10;

struct MassRegime {
  Regime variant = Regime::A;
  double xi = 0.0;        // 1 - 4 M0
  double sqrt_abs = 0.0;  // sqrt(|xi|), zero in regime B
};

MassRegime regime(double m0);

struct CoefficientsA {
  double lambda1, lambda2;  // roots of l^2 + l + M0, lambda2 < lambda1 < 0
  double c1, c2, dc1, dc2;
};

struct CoefficientsB {
  double c3, c4, dc3, dc4;
};

struct CoefficientsC {
  double c5, c6, dc5, dc6;
};

/// Per-point coefficients of the explicit Lagrangian solution. Only the
/// active regime's coefficients exist.
struct Coefficients {
  MassRegime regime;
  double x = 0.0;
  double m0 = 0.0;
  double drift = 0.0;  // M1 / M0
  double rho0 = 0.0;
  double du0 = 0.0;
  std::variant<CoefficientsA, CoefficientsB, CoefficientsC> c;
};

Coefficients coefficients_at(const InitialData& data, double x);

struct FlowState {
  double v = 0.0;
  double vx = 0.0;
  double eta = 0.0;
  double etax = 0.0;
  /// Lagrangian density rho0 / etax; empty once characteristics touch.
  std::optional<double> f;

  bool degenerate() const { return !f.has_value(); }
};

FlowState evaluate(const Coefficients& coeffs, double t);
FlowState evaluate(const InitialData& data, double x, double t);

/// Only the deformation gradient; cheaper inner loop for scans.
double etax_at(const Coefficients& coeffs, double t);

/// Total momentum M1 exp(-t).
double momentum(const InitialData& data, double t);

}  // namespace eplag
