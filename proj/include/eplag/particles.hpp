#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "eplag/profiles.hpp"

namespace eplag {

/// Lagrangian particles: sorted positions, velocities and fixed masses.
struct ParticleSystem {
  std::vector<double> positions;
  std::vector<double> velocities;
  std::vector<double> masses;
  double time = 0.0;

  std::size_t size() const { return positions.size(); }
  double total_mass() const;
  double momentum() const;
  double min_spacing() const;
};

/// Uniform nodes a0 + (b0 - a0) i / (n - 1), velocities u0 at the nodes, and
/// masses equal to the exact mass of each node's midpoint cell.
ParticleSystem discretize(const InitialData& data, std::size_t n);

/// Discrete stationary state: n equal masses m0 / n spaced 2 / n around center.
ParticleSystem equilibrium_system(std::size_t n, double m0, double center = 0.0);

/// a_i = -v_i - sum_j m_j W'(x_i - x_j) with W'(x) = -sgn(x) + x, sgn(0) = 0.
/// O(n) using the ordering; throws UnsortedPositions if positions decrease.
std::vector<double> total_force(const ParticleSystem& system);

enum class Scheme { RK4, SemiImplicitEuler };

struct SimConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  Scheme scheme = Scheme::RK4;
  double crossing_tol = 0.0;
  std::size_t record_every = 1000;
};

struct Observables {
  double t = 0.0;
  double momentum = 0.0;
  double left = 0.0;   // leftmost particle
  double right = 0.0;  // rightmost particle
  double l1_to_limit = 0.0;
  double min_spacing = 0.0;
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> positions;
  std::vector<double> velocities;
};

struct Crossing {
  double t_cross = 0.0;
  std::size_t index = 0;  // particles index and index + 1 met
};

struct SimOutcome {
  std::optional<Crossing> crossed;
  std::vector<Snapshot> trajectory;
  std::vector<Observables> observables;
  ParticleSystem final_state;

  bool completed() const { return !crossed.has_value(); }
};

/// Fixed-step integration until t_end or the first crossing. Throws
/// NonFiniteState when the state overflows.
SimOutcome run(ParticleSystem system, const SimConfig& config);

struct DensitySample {
  double position = 0.0;  // cell midpoint
  double density = 0.0;
};

/// Piecewise-constant density on the n - 1 cells between neighbours, each
/// holding half the mass of both bounding particles.
std::vector<DensitySample> reconstruct_density(const ParticleSystem& system);

/// L1 distance between the reconstructed density and (M/2) on (G - 1, G + 1),
/// where G = (sum m x + sum m v) / M is conserved by the dynamics.
double l1_distance_to_limit(const ParticleSystem& system);

}  // namespace eplag
