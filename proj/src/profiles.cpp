#include "eplag/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eplag/error.hpp"
#include "eplag/quadrature.hpp"

namespace eplag {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_tabulated(const std::vector<double>& grid, const std::vector<double>& values) {
  if (grid.size() != values.size()) {
    throw Error(Errc::InvalidProfile, "grid and values differ in length");
  }
  if (grid.size() < 4) {
    throw Error(Errc::InvalidProfile, "tabulated profile needs at least 4 samples");
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || !std::isfinite(values[k])) {
      throw Error(Errc::InvalidProfile, "non-finite tabulated sample");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw Error(Errc::InvalidProfile, "tabulated grid must be strictly increasing");
    }
  }
}

boost::math::interpolators::pchip<std::vector<double>> make_pchip(const std::vector<double>& grid,
                                                                  const std::vector<double>& values) {
  check_tabulated(grid, values);
  return {std::vector<double>(grid), std::vector<double>(values)};
}

double cosine_phase(const Interval& d, double x) { return kPi * (x - d.center()) / d.width(); }

void check_density(const DensityProfile& rho) {
  std::visit(overloaded{
                 [](const CosineDensity& c) {
                   if (!(c.gamma_norm > 0.0) || !std::isfinite(c.gamma_norm)) {
                     throw Error(Errc::NonPositiveDensity, "cosine normalizer must be positive");
                   }
                 },
                 [](const UniformDensity& u) {
                   if (!(u.height > 0.0) || !std::isfinite(u.height)) {
                     throw Error(Errc::NonPositiveDensity, "uniform height must be positive");
                   }
                 },
                 [](const Tabulated& t) {
                   const auto& v = t.values();
                   for (std::size_t k = 0; k < v.size(); ++k) {
                     const bool interior = k > 0 && k + 1 < v.size();
                     if (interior ? !(v[k] > 0.0) : v[k] < 0.0) {
                       throw Error(Errc::NonPositiveDensity,
                                   "tabulated density sample " + std::to_string(k) + " is not positive");
                     }
                   }
                 },
             },
             rho);
}

}  // namespace

Interval make_interval(double a0, double b0) {
  if (!std::isfinite(a0) || !std::isfinite(b0) || !(a0 < b0)) {
    throw Error(Errc::DegenerateDomain, "need finite a0 < b0");
  }
  return {a0, b0};
}

// ---------------------------------------------------------------------------

Tabulated::Tabulated(std::vector<double> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)), interp_(make_pchip(grid_, values_)) {
  prefix_.assign(grid_.size(), 0.0);
  for (std::size_t k = 1; k < grid_.size(); ++k) {
    prefix_[k] = prefix_[k - 1] + segment_integral(k - 1, grid_[k]);
  }
}

double Tabulated::operator()(double x) const {
  return interp_(std::clamp(x, grid_.front(), grid_.back()));
}

double Tabulated::prime(double x) const {
  return interp_.prime(std::clamp(x, grid_.front(), grid_.back()));
}

// Simpson is exact on each cubic Hermite piece.
double Tabulated::segment_integral(std::size_t k, double x) const {
  const double x0 = grid_[k];
  return (x - x0) / 6.0 * ((*this)(x0) + 4.0 * (*this)(0.5 * (x0 + x)) + (*this)(x));
}

double Tabulated::integral_to(double x) const {
  x = std::clamp(x, grid_.front(), grid_.back());
  auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
  const std::size_t k = static_cast<std::size_t>(std::distance(grid_.begin(), it)) - 1;
  if (k + 1 >= grid_.size()) return prefix_.back();
  return prefix_[k] + segment_integral(k, x);
}

double Tabulated::first_moment() const {
  // three-point Gauss-Legendre per piece, exact for the quartic y * f(y)
  static const double node = std::sqrt(0.6);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < grid_.size(); ++k) {
    const double mid = 0.5 * (grid_[k] + grid_[k + 1]);
    const double half = 0.5 * (grid_[k + 1] - grid_[k]);
    auto g = [&](double s) {
      const double y = mid + half * s;
      return y * (*this)(y);
    };
    sum += half * (5.0 * g(-node) + 8.0 * g(0.0) + 5.0 * g(node)) / 9.0;
  }
  return sum;
}

Tabulated Tabulated::scaled(double factor) const {
  std::vector<double> v(values_);
  for (auto& y : v) y *= factor;
  return {grid_, std::move(v)};
}

// ---------------------------------------------------------------------------

double density_value(const DensityProfile& rho, const Interval& domain, double x) {
  return std::visit(overloaded{
                        [&](const CosineDensity& c) {
                          // exact zero at (and beyond) the endpoints
                          if (std::abs(x - domain.center()) >= 0.5 * domain.width()) return 0.0;
                          return std::cos(cosine_phase(domain, x)) / c.gamma_norm;
                        },
                        [](const UniformDensity& u) { return u.height; },
                        [&](const Tabulated& t) { return t(x); },
                    },
                    rho);
}

std::array<double, 3> density_jet(const DensityProfile& rho, const Interval& domain, double x) {
  return std::visit(overloaded{
                        [&](const CosineDensity& c) -> std::array<double, 3> {
                          const double k = kPi / domain.width();
                          const double p = cosine_phase(domain, x);
                          return {std::cos(p) / c.gamma_norm, -k * std::sin(p) / c.gamma_norm,
                                  -k * k * std::cos(p) / c.gamma_norm};
                        },
                        [](const UniformDensity& u) -> std::array<double, 3> { return {u.height, 0.0, 0.0}; },
                        [&](const Tabulated& t) -> std::array<double, 3> {
                          const double h = 1e-5 * domain.width();
                          const double lo = std::max(domain.a0, x - h);
                          const double hi = std::min(domain.b0, x + h);
                          return {t(x), t.prime(x), (t.prime(hi) - t.prime(lo)) / (hi - lo)};
                        },
                    },
                    rho);
}

double velocity_value(const VelocityProfile& u, double x) {
  return std::visit(overloaded{
                        [&](const LinearVelocity& l) { return l.intercept + l.slope * x; },
                        [](const ZeroVelocity&) { return 0.0; },
                        [&](const Tabulated& t) { return t(x); },
                    },
                    u);
}

double velocity_slope(const VelocityProfile& u, double x) {
  return std::visit(overloaded{
                        [](const LinearVelocity& l) { return l.slope; },
                        [](const ZeroVelocity&) { return 0.0; },
                        [&](const Tabulated& t) { return t.prime(x); },
                    },
                    u);
}

double profile_mass(const DensityProfile& rho, const Interval& domain) {
  return std::visit(overloaded{
                        [&](const CosineDensity& c) { return 2.0 * domain.width() / kPi / c.gamma_norm; },
                        [&](const UniformDensity& u) { return u.height * domain.width(); },
                        [](const Tabulated& t) { return t.integral_to(t.grid().back()); },
                    },
                    rho);
}

DensityProfile normalize_mass(const Interval& domain, const DensityProfile& rho, double target_mass) {
  if (!(target_mass > 0.0) || !std::isfinite(target_mass)) {
    throw Error(Errc::NonPositiveMass, "target mass must be positive");
  }
  check_density(rho);
  return std::visit(overloaded{
                        [&](const CosineDensity&) -> DensityProfile {
                          return CosineDensity{2.0 * domain.width() / kPi / target_mass};
                        },
                        [&](const UniformDensity&) -> DensityProfile {
                          return UniformDensity{target_mass / domain.width()};
                        },
                        [&](const Tabulated& t) -> DensityProfile {
                          const double m = profile_mass(rho, domain);
                          if (m == target_mass) return t;
                          return t.scaled(target_mass / m);
                        },
                    },
                    rho);
}

InitialData build_initial_data(const Interval& domain_in, const DensityProfile& rho, const VelocityProfile& u,
                               std::size_t quadrature_n) {
  const Interval domain = make_interval(domain_in.a0, domain_in.b0);
  if (quadrature_n < 16) {
    throw Error(Errc::InvalidArgument, "quadrature_n must be at least 16");
  }
  check_density(rho);
  auto spans_domain = [&](const Tabulated& t, const char* what) {
    if (t.grid().front() != domain.a0 || t.grid().back() != domain.b0) {
      throw Error(Errc::InvalidProfile, std::string(what) + " grid must span exactly [a0, b0]");
    }
  };
  if (auto* t = std::get_if<Tabulated>(&rho)) spans_domain(*t, "density");
  if (auto* t = std::get_if<Tabulated>(&u)) spans_domain(*t, "velocity");

  InitialData d;
  d.domain = domain;
  d.rho0 = rho;
  d.u0 = u;
  d.quadrature_n = quadrature_n;
  d.m0 = profile_mass(rho, domain);
  if (!(d.m0 > 0.0)) throw Error(Errc::NonPositiveMass, "profile has no mass");

  d.first_moment = std::visit(
      overloaded{
          [&](const CosineDensity&) { return domain.center() * d.m0; },
          [&](const UniformDensity& un) { return 0.5 * un.height * (domain.b0 * domain.b0 - domain.a0 * domain.a0); },
          [](const Tabulated& t) { return t.first_moment(); },
      },
      rho);

  d.m1 = std::visit(overloaded{
                        [&](const LinearVelocity& l) { return l.intercept * d.m0 + l.slope * d.first_moment; },
                        [](const ZeroVelocity&) { return 0.0; },
                        [&](const Tabulated& t) {
                          return quad::simpson([&](double x) { return d.rho(x) * t(x); }, domain.a0, domain.b0,
                                               quadrature_n);
                        },
                    },
                    u);
  d.gamma_cap = (d.first_moment + d.m1) / d.m0;
  return d;
}

double cumulative_mass(const InitialData& data, double x) {
  const Interval& dom = data.domain;
  if (!dom.contains_closed(x)) {
    throw Error(Errc::OutOfDomain, "cumulative_mass at x = " + std::to_string(x));
  }
  return std::visit(overloaded{
                        [&](const CosineDensity& c) {
                          return dom.width() / kPi * (std::sin(cosine_phase(dom, x)) + 1.0) / c.gamma_norm;
                        },
                        [&](const UniformDensity& u) { return u.height * (x - dom.a0); },
                        [&](const Tabulated& t) { return t.integral_to(x); },
                    },
                    data.rho0);
}

double v0_prime(const InitialData& data, double x) {
  return -data.u(x) - (x + 1.0) * data.m0 + data.first_moment + 2.0 * cumulative_mass(data, x);
}

InitialData steady_state(double m0, double center) {
  if (!(m0 > 0.0)) throw Error(Errc::NonPositiveMass, "steady state needs m0 > 0");
  const Interval dom = make_interval(center - 1.0, center + 1.0);
  return build_initial_data(dom, UniformDensity{0.5 * m0}, ZeroVelocity{});
}

InitialData cosine_data(double m0, double c, double intercept, std::size_t quadrature_n) {
  const Interval dom = make_interval(-0.75, 0.75);
  return build_initial_data(dom, normalize_mass(dom, CosineDensity{}, m0), LinearVelocity{intercept, -c},
                            quadrature_n);
}

}  // namespace eplag
