#pragma once

#include <cstddef>
#include <vector>

#include "eplag/profiles.hpp"

namespace eplag {

/// Samples on a uniform tensor grid [0, T0] x [a0, b0], stored row by row
/// (one row per time level).
struct GridFunction {
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<double> values;

  std::size_t nt() const { return t_grid.size(); }
  std::size_t nx() const { return x_grid.size(); }
  double& at(std::size_t it, std::size_t ix) { return values[it * x_grid.size() + ix]; }
  double at(std::size_t it, std::size_t ix) const { return values[it * x_grid.size() + ix]; }
};

/// Uniform grid with every value set to `fill`. nt >= 3, nx odd and >= 3.
GridFunction make_grid(const Interval& domain, double t_end, std::size_t nt, std::size_t nx, double fill = 0.0);

/// v(t, x) = u0(x) on the grid; the iteration's starting point.
GridFunction initial_iterate(const InitialData& data, double t_end, std::size_t nt, std::size_t nx);

struct IterateReport {
  std::size_t n = 0;
  double sup_delta = 0.0;  // max |v_{n} - v_{n-1}|
  double l2_delta = 0.0;   // grid L2 norm of the same difference
};

struct PicardStep {
  GridFunction eta;
  GridFunction v;
};

/// One sweep of the fixed-point map: eta from the time integral of v_n, then
/// v from the damped linear ODE driven by that eta. Throws GridMismatch if
/// the grid does not cover [0, T] x domain.
PicardStep iterate_once(const InitialData& data, const GridFunction& v_n);

struct PicardResult {
  GridFunction eta;
  GridFunction v;
  std::vector<IterateReport> reports;
};

/// Iterates from v = u0 until sup_delta <= tol. Needs 0 < T0 <= 0.5; throws
/// NoConvergence after max_iter sweeps.
PicardResult solve(const InitialData& data, double t0, std::size_t nt, std::size_t nx, double tol,
                   std::size_t max_iter = 50);

/// x-derivative of a grid function: centered in the interior, second-order
/// one-sided at the ends.
GridFunction x_derivative(const GridFunction& g);

}  // namespace eplag
