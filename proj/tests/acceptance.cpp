#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eplag/asymptotics.hpp"
#include "eplag/cli/commands.hpp"
#include "eplag/cli/config.hpp"
#include "eplag/closed_form.hpp"
#include "eplag/error.hpp"
#include "eplag/nsp.hpp"
#include "eplag/particles.hpp"
#include "eplag/picard.hpp"
#include "eplag/profiles.hpp"
#include "eplag/thresholds.hpp"

using namespace eplag;
using namespace eplag::cli;

namespace {

// first zero of the compression at the right endpoint, unit slope, mass 0.2
constexpr double kFirstZero = 2.1520447048;
// decay rate for mass 0.2
constexpr double kRateMass02 = 0.2763932022500210;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

InitialData uniform_data(double m0, double slope, double intercept) {
  const Interval dom = make_interval(-0.75, 0.75);
  return build_initial_data(dom, normalize_mass(dom, UniformDensity{1.0}, m0), LinearVelocity{intercept, -slope});
}

Outcome global_reproduction() {
  const auto start = Clock::now();
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 30.0;
  cfg.record_every = 30000;
  const SimOutcome out = run(discretize(cosine_data(0.2, 0.6), 800), cfg);
  const double elapsed = seconds_since(start);
  if (!out.completed()) return {false, "run crossed"};

  double worst = 0.0;
  for (const auto& s : reconstruct_density(out.final_state)) {
    if (std::abs(s.position) <= 0.8) worst = std::max(worst, std::abs(s.density - 0.1) / 0.1);
  }
  const double left = out.final_state.positions.front(), right = out.final_state.positions.back();
  const double edge = std::max(std::abs(left + 1.0), std::abs(right - 1.0));
  const bool ok = worst <= 0.05 && edge <= 0.02 && elapsed <= 60.0;
  return {ok, fmt("max rel density dev %.2e (<= 0.05), support [%.5f, %.5f] edge err %.2e (<= 0.02), %.2f s (<= 60)",
                  worst, left, right, edge, elapsed)};
}

Outcome blowup_reproduction() {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 5.0;
  cfg.record_every = 5000;
  const InitialData d = cosine_data(0.2, 1.0);
  std::vector<double> crossings;
  for (std::size_t n : {200, 400, 800, 1600}) {
    const SimOutcome out = run(discretize(d, n), cfg);
    if (!out.crossed) return {false, fmt("n = %zu did not cross", n)};
    crossings.push_back(out.crossed->t_cross);
  }
  const Verdict v = classify(d);
  if (v.is_global()) return {false, "classifier returned Global"};
  const double tz = v.blowup->t_first_zero;

  bool approaching = true;
  for (std::size_t k = 1; k < crossings.size(); ++k) {
    approaching = approaching && std::abs(crossings[k] - tz) < std::abs(crossings[k - 1] - tz);
  }
  const double t800 = crossings[2];
  const bool ok = t800 >= 2.10 && t800 <= 2.25 && std::abs(tz - kFirstZero) <= 1e-4 && approaching;
  return {ok, fmt("t_cross(800) = %.5f in [2.10, 2.25], t_first_zero = %.7f (target %.7f), "
                  "t_cross(200..1600) = %.5f %.5f %.5f %.5f monotone toward it: %s",
                  t800, tz, kFirstZero, crossings[0], crossings[1], crossings[2], crossings[3],
                  approaching ? "yes" : "no")};
}

Outcome classifier_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> slope(-0.5, 2.0), intercept(-0.5, 0.5);
  const double masses[] = {0.1, 0.25, 0.5};
  int hard = 0, banded = 0, blowups = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double m0 = masses[trial % 3];
    const double c = slope(rng), u = intercept(rng);
    const InitialData d = (trial / 3) % 2 == 0 ? cosine_data(m0, c, u) : uniform_data(m0, c, u);
    const bool predicted_blowup = !classify(d).is_global();
    const BruteMin ref = brute_min_etax(d, 60.0, 1201, 257);
    blowups += predicted_blowup;
    if (std::abs(ref.value) < 1e-6) {
      ++banded;
      continue;
    }
    if ((ref.value <= 0.0) != predicted_blowup) ++hard;
  }
  const double elapsed = seconds_since(start);
  return {hard == 0 && elapsed <= 120.0,
          fmt("%d hard disagreements, %d in the 1e-6 band, %d/100 blow-up verdicts, %.2f s (<= 120)", hard, banded,
              blowups, elapsed)};
}

Outcome ode_residual() {
  // second-order stencils in t; forward at t = 0
  const double h = 1e-3;
  double worst = 0.0;
  for (double m0 : {0.2, 0.25, 0.5}) {
    const InitialData d = cosine_data(m0, 0.6, 0.3);
    for (int ix = 0; ix < 21; ++ix) {
      const double x = d.domain.a0 + d.domain.width() * ix / 20.0;
      const Coefficients k = coefficients_at(d, x);
      auto v = [&](double t) { return evaluate(k, t).v; };
      for (int it = 0; it < 51; ++it) {
        const double t = 10.0 * it / 50.0;
        double v1, v2;
        if (it == 0) {
          v1 = (-3 * v(t) + 4 * v(t + h) - v(t + 2 * h)) / (2 * h);
          v2 = (2 * v(t) - 5 * v(t + h) + 4 * v(t + 2 * h) - v(t + 3 * h)) / (h * h);
        } else {
          v1 = (v(t + h) - v(t - h)) / (2 * h);
          v2 = (v(t + h) - 2 * v(t) + v(t - h)) / (h * h);
        }
        worst = std::max(worst, std::abs(v2 + v1 + m0 * v(t) - d.m1 * std::exp(-t)));
      }
    }
  }
  return {worst <= 1e-5, fmt("max residual %.2e over M0 in {0.2, 0.25, 0.5} (<= 1e-5)", worst)};
}

Outcome regime_continuity() {
  const InitialData below = cosine_data(0.25 - 1e-6, 0.6, 0.3);
  const InitialData at = cosine_data(0.25, 0.6, 0.3);
  const InitialData above = cosine_data(0.25 + 1e-6, 0.6, 0.3);
  double from_a = 0.0, from_c = 0.0;
  for (int ix = 0; ix < 21; ++ix) {
    const double x = at.domain.a0 + at.domain.width() * ix / 20.0;
    const Coefficients ka = coefficients_at(below, x), kb = coefficients_at(at, x), kc = coefficients_at(above, x);
    for (int it = 0; it <= 1000; ++it) {
      const double t = 10.0 * it / 1000.0;
      const double vb = evaluate(kb, t).v;
      from_a = std::max(from_a, std::abs(evaluate(ka, t).v - vb));
      from_c = std::max(from_c, std::abs(evaluate(kc, t).v - vb));
    }
  }
  return {from_a <= 1e-4 && from_c <= 1e-4,
          fmt("sup |vA - vB| = %.2e, sup |vC - vB| = %.2e (<= 1e-4)", from_a, from_c)};
}

Outcome momentum_law() {
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 10.0;
  cfg.record_every = 10;
  const InitialData d = cosine_data(0.2, 0.6, 0.3);
  const SimOutcome out = run(discretize(d, 800), cfg);
  double particle = 0.0, closed = 0.0;
  for (const auto& o : out.observables) particle = std::max(particle, std::abs(o.momentum - 0.06 * std::exp(-o.t)));
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    closed = std::max(closed, std::abs(momentum(d, t) - d.m1 * std::exp(-t)));
  }
  const bool ok = out.completed() && particle <= 1e-6 && std::abs(d.m1 - 0.06) <= 1e-15 && closed == 0.0;
  return {ok, fmt("particle sup error %.2e (<= 1e-6) over %zu samples, M1 = %.17g, closed-form error %.1e", particle,
                  out.observables.size(), d.m1, closed)};
}

Outcome asymptotic_rate() {
  const InitialData d = cosine_data(0.2, 0.6);
  std::vector<double> times;
  for (int k = 0; k <= 60; ++k) times.push_back(0.5 * k);
  TimeSeries series;
  for (const auto& l : l1_series(d, times)) series.emplace_back(l.t, l.total_bound);
  const RateReport r = fit_rate(series, std::make_pair(5.0, 25.0));
  const double rel = std::abs(r.lambda_fit - kRateMass02) / kRateMass02;
  const AsymptoticProfile p = limit_profile(d);
  const bool fields = std::abs(p.gamma_cap) <= 1e-15 && p.omega_inf.a0 == -1.0 && p.omega_inf.b0 == 1.0 &&
                      p.height == 0.1;
  return {rel <= 0.15 && fields, fmt("fitted rate %.5f vs %.5f (rel err %.3f <= 0.15); limit center %.1e, support "
                                     "(%g, %g), height %.17g",
                                     r.lambda_fit, kRateMass02, rel, p.gamma_cap, p.omega_inf.a0, p.omega_inf.b0,
                                     p.height)};
}

Outcome picard_oracle() {
  const InitialData d = cosine_data(0.2, 0.6);
  std::string study;
  bool contracting = true, refining = true;
  double previous = INFINITY, finest = INFINITY;
  for (std::size_t n : {26, 51, 101}) {
    const std::size_t nx = n % 2 ? n : n + 1;
    const PicardResult r = solve(d, 0.1, n, nx, 1e-13);
    for (std::size_t k = 2; k < r.reports.size(); ++k) {
      const double prev = r.reports[k - 1].sup_delta;
      // ratios past the roundoff floor carry no information
      if (prev > 1e-12) contracting = contracting && r.reports[k].sup_delta < prev;
    }
    double err = 0.0;
    for (std::size_t it = 0; it < r.v.nt(); ++it) {
      for (std::size_t ix = 0; ix < r.v.nx(); ++ix) {
        err = std::max(err, std::abs(r.v.at(it, ix) - evaluate(d, r.v.x_grid[ix], r.v.t_grid[it]).v));
      }
    }
    refining = refining && err <= previous;
    previous = finest = err;
    study += fmt(" %zux%zu: %zu iters, err %.1e;", n, nx, r.reports.size(), err);
  }
  return {contracting && refining && finest <= 1e-5,
          fmt("deltas contract: %s; errors nonincreasing: %s;%s finest <= 1e-5", contracting ? "yes" : "no",
              refining ? "yes" : "no", study.c_str())};
}

Outcome steady_state_check() {
  const InitialData d = steady_state(0.2);
  double v_err = 0.0, etax_err = 0.0;
  for (int ix = 0; ix <= 20; ++ix) {
    const double x = -1.0 + 0.1 * ix;
    for (int it = 0; it <= 50; ++it) {
      const FlowState s = evaluate(d, x, 0.2 * it);
      v_err = std::max(v_err, std::abs(s.v));
      etax_err = std::max(etax_err, std::abs(s.etax - 1.0));
    }
  }
  SimConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 10.0;
  cfg.record_every = 10000;
  const ParticleSystem start = equilibrium_system(200, 0.2);
  const SimOutcome out = run(start, cfg);
  double drift = 0.0;
  for (std::size_t i = 0; i < start.size(); ++i) {
    drift = std::max(drift, std::abs(out.final_state.positions[i] - start.positions[i]));
  }
  const double drift_rate = drift / cfg.t_end;
  const bool global = classify(d).is_global();
  double l1 = 0.0;
  for (double t : {0.0, 1.0, 10.0}) l1 = std::max(l1, l1_distance(d, t).total_bound);
  const double eps = 4 * std::numeric_limits<double>::epsilon();
  const bool ok = v_err <= eps && etax_err <= eps && drift_rate <= 1e-10 && global && l1 == 0.0;
  return {ok, fmt("sup|v| = %.1e, sup|etax - 1| = %.1e, particle drift %.1e per unit time (<= 1e-10), classifier %s, "
                  "l1 = %g",
                  v_err, etax_err, drift_rate, global ? "Global" : "BlowUp", l1)};
}

Outcome nsp_bound() {
  const BoundReport b = blowup_bound(make_riccati(0.2), -1.0);
  const bool pinned = std::abs(b.bound - 3.6180) <= 5e-5 && std::abs(b.exact_blowup - kFirstZero) <= 1e-6 &&
                      std::abs(b.numeric_blowup - b.exact_blowup) <= 1e-3;
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> mass(1e-3, 0.249), gap(1e-3, 10.0);
  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const double m0 = mass(rng);
    const RiccatiSetup s = make_riccati(m0);
    const double d0 = s.d_minus - gap(rng);
    if (exact_blowup(s, d0) > 1.0 / (s.d_minus - d0)) ++violations;
  }
  return {pinned && violations == 0,
          fmt("bound %.6f (3.6180), exact %.7f (%.7f), numeric %.7f (+-1e-3); %d/1000 random violations", b.bound,
              b.exact_blowup, kFirstZero, b.numeric_blowup, violations)};
}

Outcome two_body_relaxation() {
  std::string detail;
  bool ok = true;
  for (double m : {0.1, 0.25, 1.0}) {
    ParticleSystem s;
    s.positions = {-0.75, 0.75};
    s.velocities = {0.0, 0.0};
    s.masses = {m, m};
    SimConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 30.0;
    cfg.record_every = 30000;
    const SimOutcome out = run(s, cfg);
    const auto& f = out.final_state;
    const double sep_err = std::abs(f.positions[1] - f.positions[0] - 1.0);
    const double vel = std::max(std::abs(f.velocities[0]), std::abs(f.velocities[1]));
    ok = ok && out.completed() && sep_err <= 1e-6 && vel <= 1e-8;
    detail += fmt(" m = %g: |sep - 1| = %.1e, max|v| = %.1e;", m, sep_err, vel);
  }
  return {ok, "separation <= 1e-6 and velocity <= 1e-8 at t = 30 from separation 1.5:" + detail};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "eplag_acceptance_determinism";
  fs::remove_all(root);
  const fs::path configs(EPLAG_CONFIG_DIR);
  int files = 0, mismatches = 0;
  std::string failed;
  for (Command c : kAllCommands) {
    const ExperimentConfig cfg = load_config((configs / (c == Command::Nsp ? "nsp.json" : "cosine_global.yaml")).string());
    std::vector<std::vector<std::string>> runs;
    for (unsigned threads : {1u, 4u, 1u}) {
      const fs::path dir = root / fmt("%s_%u_%zu", std::string(to_string(c)).c_str(), threads, runs.size());
      const RunManifest m = run(cfg, c, RunOptions{dir.string(), threads});
      std::vector<std::string> blobs;
      for (const auto& o : m.outputs) blobs.push_back(slurp(o.path));
      runs.push_back(std::move(blobs));
    }
    for (std::size_t k = 1; k < runs.size(); ++k) {
      if (runs[k] != runs[0]) {
        ++mismatches;
        failed += " " + std::string(to_string(c));
      }
    }
    files += static_cast<int>(runs[0].size());
  }
  fs::remove_all(root);
  return {mismatches == 0 && files > 0, fmt("%d CSV files per pass over %zu commands, 3 passes (threads 1, 4, 1), "
                                            "%d mismatching reruns%s",
                                            files, std::size(kAllCommands), mismatches, failed.c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"global cosine run settles to the limit profile", global_reproduction},
      {"unit-slope cosine run crosses near the predicted time", blowup_reproduction},
      {"classifier agrees with the brute-force oracle", classifier_oracle},
      {"closed form satisfies the damped ODE", ode_residual},
      {"closed form is continuous across the critical mass", regime_continuity},
      {"particle momentum decays like exp(-t)", momentum_law},
      {"L1 distance decays at the predicted rate", asymptotic_rate},
      {"Picard iteration contracts and matches the closed form", picard_oracle},
      {"steady state is preserved", steady_state_check},
      {"Riccati bound dominates the exact blow-up time", nsp_bound},
      {"two particles relax to unit separation", two_body_relaxation},
      {"CLI output is byte-identical across reruns", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("[%s] criterion %zu: %s | %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
