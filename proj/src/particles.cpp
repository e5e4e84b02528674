#include "eplag/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "eplag/error.hpp"

namespace eplag {

namespace {

// Label-ordered interaction: sgn(x_i - x_j) = sgn(i - j), valid while no
// characteristics have crossed.
void accelerations(std::span<const double> x, std::span<const double> v, std::span<const double> m,
                   std::span<double> out) {
  const std::size_t n = x.size();
  double total = 0.0, first = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    total += m[j];
    first += m[j] * x[j];
  }
  double below = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double above = total - below - m[i];
    out[i] = -v[i] + (below - above) - (total * x[i] - first);
    below += m[i];
  }
}

bool all_finite(const std::vector<double>& a) {
  return std::all_of(a.begin(), a.end(), [](double y) { return std::isfinite(y); });
}

std::size_t argmin_spacing(const std::vector<double>& x) {
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    if (x[i + 1] - x[i] < x[best + 1] - x[best]) best = i;
  }
  return best;
}

Observables observe(const ParticleSystem& s) {
  Observables o;
  o.t = s.time;
  o.momentum = s.momentum();
  o.left = s.positions.front();
  o.right = s.positions.back();
  o.min_spacing = s.min_spacing();
  o.l1_to_limit = o.min_spacing > 0.0 ? l1_distance_to_limit(s) : std::numeric_limits<double>::quiet_NaN();
  return o;
}

void check_system(const ParticleSystem& s) {
  if (s.positions.size() < 2) throw Error(Errc::TooFewParticles, "need at least two particles");
  if (s.velocities.size() != s.size() || s.masses.size() != s.size()) {
    throw Error(Errc::InvalidArgument, "positions, velocities and masses differ in length");
  }
  for (double m : s.masses) {
    if (!(m > 0.0)) throw Error(Errc::NonPositiveMass, "particle masses must be positive");
  }
}

}  // namespace

double ParticleSystem::total_mass() const { return std::accumulate(masses.begin(), masses.end(), 0.0); }

double ParticleSystem::momentum() const {
  return std::inner_product(masses.begin(), masses.end(), velocities.begin(), 0.0);
}

double ParticleSystem::min_spacing() const {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < positions.size(); ++i) s = std::min(s, positions[i + 1] - positions[i]);
  return s;
}

ParticleSystem discretize(const InitialData& data, std::size_t n) {
  if (n < 2) throw Error(Errc::TooFewParticles, "need at least two particles");
  const Interval& dom = data.domain;
  const double h = dom.width() / static_cast<double>(n - 1);
  ParticleSystem s;
  s.positions.resize(n);
  s.velocities.resize(n);
  s.masses.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.positions[i] = i + 1 == n ? dom.b0 : dom.a0 + h * static_cast<double>(i);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = s.positions[i];
    s.velocities[i] = data.u(x);
    const double lo = i == 0 ? dom.a0 : std::max(dom.a0, x - 0.5 * h);
    const double hi = i + 1 == n ? dom.b0 : std::min(dom.b0, x + 0.5 * h);
    s.masses[i] = cumulative_mass(data, hi) - cumulative_mass(data, lo);
    if (!(s.masses[i] > 0.0)) {
      throw Error(Errc::NonPositiveDensity, "empty mass cell at particle " + std::to_string(i));
    }
    sum += s.masses[i];
  }
  const double scale = data.m0 / sum;
  for (double& m : s.masses) m *= scale;
  return s;
}

ParticleSystem equilibrium_system(std::size_t n, double m0, double center) {
  if (n < 2) throw Error(Errc::TooFewParticles, "need at least two particles");
  if (!(m0 > 0.0)) throw Error(Errc::NonPositiveMass, "m0 must be positive");
  ParticleSystem s;
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    s.positions.push_back(center + (2.0 * static_cast<double>(i) - dn + 1.0) / dn);
    s.velocities.push_back(0.0);
    s.masses.push_back(m0 / dn);
  }
  return s;
}

std::vector<double> total_force(const ParticleSystem& s) {
  check_system(s);
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s.positions[i + 1] < s.positions[i]) {
      throw Error(Errc::UnsortedPositions, "positions must be nondecreasing");
    }
  }
  std::vector<double> a(s.size());
  accelerations(s.positions, s.velocities, s.masses, a);
  return a;
}

SimOutcome run(ParticleSystem s, const SimConfig& cfg) {
  check_system(s);
  if (!(cfg.dt > 0.0) || !(cfg.t_end > 0.0) || cfg.dt > cfg.t_end) {
    throw Error(Errc::InvalidArgument, "need 0 < dt <= t_end");
  }
  if (cfg.record_every == 0 || !(cfg.crossing_tol >= 0.0)) {
    throw Error(Errc::InvalidArgument, "record_every must be positive and crossing_tol nonnegative");
  }
  const std::size_t n = s.size();
  const std::size_t steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  const double t0 = s.time;

  SimOutcome out;
  auto record = [&] {
    out.trajectory.push_back({s.time, s.positions, s.velocities});
    out.observables.push_back(observe(s));
  };
  record();

  std::vector<double> x1(n), v1(n), a1(n), a2(n), a3(n), a4(n), x2(n), v2(n), x3(n), v3(n), x4(n), v4(n);
  const double dt = cfg.dt;

  for (std::size_t step = 1; step <= steps; ++step) {
    const std::vector<double> x_prev = s.positions;
    const double t_prev = s.time;

    if (cfg.scheme == Scheme::RK4) {
      accelerations(s.positions, s.velocities, s.masses, a1);
      for (std::size_t i = 0; i < n; ++i) {
        x2[i] = s.positions[i] + 0.5 * dt * s.velocities[i];
        v2[i] = s.velocities[i] + 0.5 * dt * a1[i];
      }
      accelerations(x2, v2, s.masses, a2);
      for (std::size_t i = 0; i < n; ++i) {
        x3[i] = s.positions[i] + 0.5 * dt * v2[i];
        v3[i] = s.velocities[i] + 0.5 * dt * a2[i];
      }
      accelerations(x3, v3, s.masses, a3);
      for (std::size_t i = 0; i < n; ++i) {
        x4[i] = s.positions[i] + dt * v3[i];
        v4[i] = s.velocities[i] + dt * a3[i];
      }
      accelerations(x4, v4, s.masses, a4);
      for (std::size_t i = 0; i < n; ++i) {
        s.positions[i] += dt / 6.0 * (s.velocities[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i]);
        s.velocities[i] += dt / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
      }
    } else {
      accelerations(s.positions, s.velocities, s.masses, a1);
      for (std::size_t i = 0; i < n; ++i) {
        s.velocities[i] += dt * a1[i];
        s.positions[i] += dt * s.velocities[i];
      }
    }
    s.time = t0 + dt * static_cast<double>(step);

    if (!all_finite(s.positions) || !all_finite(s.velocities)) {
      throw Error(Errc::NonFiniteState, "non-finite particle state after t = " + std::to_string(t_prev));
    }

    const std::size_t k = argmin_spacing(s.positions);
    const double gap = s.positions[k + 1] - s.positions[k];
    if (gap <= cfg.crossing_tol) {
      const double gap_prev = x_prev[k + 1] - x_prev[k];
      const double frac = gap_prev > gap ? (gap_prev - cfg.crossing_tol) / (gap_prev - gap) : 1.0;
      out.crossed = Crossing{t_prev + dt * std::clamp(frac, 0.0, 1.0), k};
      out.trajectory.push_back({s.time, s.positions, s.velocities});
      Observables o;
      o.t = s.time;
      o.momentum = s.momentum();
      o.left = s.positions.front();
      o.right = s.positions.back();
      o.min_spacing = gap;
      o.l1_to_limit = std::numeric_limits<double>::quiet_NaN();
      out.observables.push_back(o);
      break;
    }
    if (step % cfg.record_every == 0) record();
  }
  out.final_state = std::move(s);
  return out;
}

std::vector<DensitySample> reconstruct_density(const ParticleSystem& s) {
  check_system(s);
  const std::size_t n = s.size();
  std::vector<DensitySample> out;
  out.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double width = s.positions[i + 1] - s.positions[i];
    if (!(width > 0.0)) throw Error(Errc::DegenerateSpacing, "cell " + std::to_string(i) + " has no width");
    out.push_back({0.5 * (s.positions[i] + s.positions[i + 1]), 0.5 * (s.masses[i] + s.masses[i + 1]) / width});
  }
  return out;
}

double l1_distance_to_limit(const ParticleSystem& s) {
  const auto cells = reconstruct_density(s);
  const double mass = s.total_mass();
  double first = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) first += s.masses[i] * (s.positions[i] + s.velocities[i]);
  const double center = first / mass;
  const double lo = center - 1.0, hi = center + 1.0, height = 0.5 * mass;

  double dist = 0.0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double a = s.positions[i], b = s.positions[i + 1];
    const double overlap = std::max(0.0, std::min(b, hi) - std::max(a, lo));
    dist += std::abs(cells[i].density - height) * overlap + cells[i].density * ((b - a) - overlap);
  }
  // parts of the limit support not covered by particles
  const double covered = std::max(0.0, std::min(s.positions.back(), hi) - std::max(s.positions.front(), lo));
  dist += height * ((hi - lo) - covered);
  return dist;
}

}  // namespace eplag
