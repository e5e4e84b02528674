#include "eplag/picard.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eplag/error.hpp"
#include "eplag/quadrature.hpp"

namespace eplag {

namespace {

std::vector<double> uniform(double lo, double hi, std::size_t n) {
  std::vector<double> g(n);
  const double h = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) g[k] = k + 1 == n ? hi : lo + h * static_cast<double>(k);
  return g;
}

void check_grid(const InitialData& data, const GridFunction& g) {
  const std::size_t nt = g.nt(), nx = g.nx();
  if (nt < 3 || nx < 3 || nx % 2 == 0 || g.values.size() != nt * nx) {
    throw Error(Errc::GridMismatch, "grid needs nt >= 3, odd nx >= 3 and nt * nx values");
  }
  if (g.t_grid.front() != 0.0 || !(g.t_grid.back() > 0.0)) {
    throw Error(Errc::GridMismatch, "time grid must start at 0 and increase");
  }
  const double rel = 1e-12 * data.domain.width();
  if (std::abs(g.x_grid.front() - data.domain.a0) > rel || std::abs(g.x_grid.back() - data.domain.b0) > rel) {
    throw Error(Errc::GridMismatch, "space grid must span the initial support");
  }
  auto is_uniform = [](const std::vector<double>& a) {
    const double h = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
    for (std::size_t k = 1; k < a.size(); ++k) {
      if (std::abs(a[k] - a[k - 1] - h) > 1e-9 * std::abs(h)) return false;
    }
    return h > 0.0;
  };
  if (!is_uniform(g.t_grid) || !is_uniform(g.x_grid)) throw Error(Errc::GridMismatch, "grids must be uniform");
}

}  // namespace

GridFunction make_grid(const Interval& domain, double t_end, std::size_t nt, std::size_t nx, double fill) {
  if (nt < 3 || nx < 3 || nx % 2 == 0) throw Error(Errc::GridMismatch, "need nt >= 3 and odd nx >= 3");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw Error(Errc::InvalidArgument, "time window must be positive");
  GridFunction g;
  g.t_grid = uniform(0.0, t_end, nt);
  g.x_grid = uniform(domain.a0, domain.b0, nx);
  g.values.assign(nt * nx, fill);
  return g;
}

GridFunction initial_iterate(const InitialData& data, double t_end, std::size_t nt, std::size_t nx) {
  GridFunction g = make_grid(data.domain, t_end, nt, nx);
  for (std::size_t it = 0; it < nt; ++it) {
    for (std::size_t ix = 0; ix < nx; ++ix) g.at(it, ix) = data.u(g.x_grid[ix]);
  }
  return g;
}

PicardStep iterate_once(const InitialData& data, const GridFunction& v_n) {
  check_grid(data, v_n);
  const std::size_t nt = v_n.nt(), nx = v_n.nx();
  const double ht = v_n.t_grid[1] - v_n.t_grid[0];
  const double hx = v_n.x_grid[1] - v_n.x_grid[0];

  PicardStep out{v_n, v_n};
  std::vector<double> column(nt);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t it = 0; it < nt; ++it) column[it] = v_n.at(it, ix);
    const auto disp = quad::cumulative_simpson(column, ht);
    for (std::size_t it = 0; it < nt; ++it) out.eta.at(it, ix) = v_n.x_grid[ix] + disp[it];
  }

  // weighted first moment of eta against rho0 at each time level
  const auto w = quad::simpson_weights(nx, hx);
  std::vector<double> rho(nx), mass_left(nx);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    rho[ix] = data.rho(v_n.x_grid[ix]);
    mass_left[ix] = cumulative_mass(data, v_n.x_grid[ix]);
  }
  std::vector<double> moment(nt, 0.0);
  for (std::size_t it = 0; it < nt; ++it) {
    double s = 0.0;
    for (std::size_t ix = 0; ix < nx; ++ix) s += w[ix] * rho[ix] * out.eta.at(it, ix);
    moment[it] = s;
  }

  // int_0^t e^{-(t-s)} g(s) ds = e^{-t} int_0^t e^{s} g(s) ds
  for (std::size_t ix = 0; ix < nx; ++ix) {
    for (std::size_t it = 0; it < nt; ++it) {
      column[it] = std::exp(v_n.t_grid[it]) * (moment[it] - data.m0 * out.eta.at(it, ix));
    }
    const auto forced = quad::cumulative_simpson(column, ht);
    const double x = v_n.x_grid[ix];
    const double u0 = data.u(x);
    const double sgn_term = 2.0 * mass_left[ix] - data.m0;
    for (std::size_t it = 0; it < nt; ++it) {
      const double t = v_n.t_grid[it];
      out.v.at(it, ix) = u0 * std::exp(-t) - std::expm1(-t) * sgn_term + std::exp(-t) * forced[it];
    }
  }
  return out;
}

PicardResult solve(const InitialData& data, double t0, std::size_t nt, std::size_t nx, double tol,
                   std::size_t max_iter) {
  if (!(t0 > 0.0) || t0 > 0.5) throw Error(Errc::InvalidArgument, "time window must lie in (0, 0.5]");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tolerance must be positive");
  if (max_iter == 0) throw Error(Errc::InvalidArgument, "max_iter must be positive");

  PicardResult res;
  res.v = initial_iterate(data, t0, nt, nx);
  const double cell = res.v.t_grid[1] * (res.v.x_grid[1] - res.v.x_grid[0]);
  for (std::size_t n = 1; n <= max_iter; ++n) {
    PicardStep step = iterate_once(data, res.v);
    IterateReport rep{n, 0.0, 0.0};
    double sq = 0.0;
    for (std::size_t k = 0; k < step.v.values.size(); ++k) {
      const double d = step.v.values[k] - res.v.values[k];
      if (!std::isfinite(d)) throw Error(Errc::NonFiniteState, "non-finite iterate at sweep " + std::to_string(n));
      rep.sup_delta = std::max(rep.sup_delta, std::abs(d));
      sq += d * d;
    }
    rep.l2_delta = std::sqrt(sq * cell);
    res.reports.push_back(rep);
    res.eta = std::move(step.eta);
    res.v = std::move(step.v);
    if (rep.sup_delta <= tol) return res;
  }
  throw Error(Errc::NoConvergence, "no convergence after " + std::to_string(max_iter) + " sweeps, last delta " +
                                       std::to_string(res.reports.back().sup_delta));
}

GridFunction x_derivative(const GridFunction& g) {
  const std::size_t nt = g.nt(), nx = g.nx();
  if (nx < 3) throw Error(Errc::GridMismatch, "need at least three x samples");
  const double hx = g.x_grid[1] - g.x_grid[0];
  GridFunction d = g;
  for (std::size_t it = 0; it < nt; ++it) {
    d.at(it, 0) = (-3.0 * g.at(it, 0) + 4.0 * g.at(it, 1) - g.at(it, 2)) / (2.0 * hx);
    for (std::size_t ix = 1; ix + 1 < nx; ++ix) d.at(it, ix) = (g.at(it, ix + 1) - g.at(it, ix - 1)) / (2.0 * hx);
    d.at(it, nx - 1) = (3.0 * g.at(it, nx - 1) - 4.0 * g.at(it, nx - 2) + g.at(it, nx - 3)) / (2.0 * hx);
  }
  return d;
}

}  // namespace eplag
