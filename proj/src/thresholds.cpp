#include "eplag/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "eplag/error.hpp"

namespace eplag {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kXResolution = 1e-10;

struct Candidate {
  double value;
  std::optional<double> t;
};

// Keep the smaller of the running infimum and a new attained/limit value.
void consider(Candidate& best, double value, std::optional<double> t) {
  if (value < best.value) best = {value, t};
}

PointCondition classify_a(const Coefficients& k, const CoefficientsA& a) {
  PointCondition pc;
  pc.x = k.x;
  pc.case_tag = CaseTag::A;
  const double sq = k.regime.sqrt_abs;
  const double rho = k.rho0;
  const double du = k.du0;

  if (du < 0.0 && k.m0 - 2.0 * rho < a.lambda1 * du) {
    const double base1 = a.lambda1 * du - k.m0 + 2.0 * rho;
    const double base2 = a.lambda2 * du - k.m0 + 2.0 * rho;
    pc.triggers_blowup = 2.0 * rho <= std::pow(base1, -a.lambda2 / sq) * std::pow(base2, a.lambda1 / sq);
  }

  Candidate best{1.0, 0.0};
  consider(best, 2.0 * rho / k.m0, std::nullopt);
  if (a.dc1 > 0.0 && a.dc2 < 0.0 && du < 0.0) {
    const double t_star = -std::log(-a.dc1 / a.dc2) / sq;
    consider(best, etax_at(k, t_star), t_star);
  }
  pc.min_etax = best.value;
  pc.t_min = best.t;
  return pc;
}

PointCondition classify_b(const Coefficients& k, const CoefficientsB& b) {
  PointCondition pc;
  pc.x = k.x;
  pc.case_tag = CaseTag::B;
  // long-time limit 1 - 4 M0 + 8 rho0, which is 8 rho0 = 2 rho0 / M0 at M0 = 1/4
  const double limit = 1.0 - 4.0 * k.m0 + 8.0 * k.rho0;

  Candidate best{1.0, 0.0};
  consider(best, limit, std::nullopt);
  if (b.dc3 < 0.0 && b.dc4 > 0.0) {
    pc.triggers_blowup = limit <= 0.0 || std::log(limit / (4.0 * b.dc4)) <= b.dc3 / (2.0 * b.dc4);
    const double t_star = -b.dc3 / b.dc4;
    consider(best, etax_at(k, t_star), t_star);
  }
  pc.min_etax = best.value;
  pc.t_min = best.t;
  return pc;
}

// Direct minimisation over the first two oscillation periods; used only when
// dC5/dx or dC6/dx vanishes.
Candidate minimize_in_time(const Coefficients& k, double t_hi) {
  constexpr std::size_t samples = 4096;
  Candidate best{1.0, 0.0};
  std::size_t arg = 0;
  for (std::size_t j = 1; j <= samples; ++j) {
    const double t = t_hi * static_cast<double>(j) / samples;
    const double e = etax_at(k, t);
    if (e < best.value) {
      best = {e, t};
      arg = j;
    }
  }
  if (arg > 0) {
    const double lo = t_hi * static_cast<double>(arg - 1) / samples;
    const double hi = t_hi * static_cast<double>(std::min(arg + 1, samples)) / samples;
    auto r = boost::math::tools::brent_find_minima([&](double t) { return etax_at(k, t); }, lo, hi, 52);
    if (r.second < best.value) best = {r.second, r.first};
  }
  return best;
}

PointCondition classify_c(const Coefficients& k, const CoefficientsC& c) {
  PointCondition pc;
  pc.x = k.x;
  const double sq = k.regime.sqrt_abs;
  const double box = sq * sq;

  if (c.dc5 == 0.0 || c.dc6 == 0.0) {
    pc.case_tag = CaseTag::C0;
    const double t_hi = std::min(4.0 * kPi / sq + 1.0, 1e4);
    Candidate best = minimize_in_time(k, t_hi);
    consider(best, 2.0 * k.rho0 / k.m0, std::nullopt);
    pc.min_etax = best.value;
    pc.t_min = best.t;
    pc.triggers_blowup = best.t.has_value() && best.value <= 0.0;
    return pc;
  }

  const double c7 = 2.0 * sq / (1.0 + box) * std::hypot(c.dc5, c.dc6);
  const double c8 = std::atan(c.dc5 / c.dc6);
  double shift = 0.0;
  if (c.dc5 < 0.0 && c.dc6 > 0.0) {
    pc.case_tag = CaseTag::C1i;
    shift = 0.0;
  } else if (c.dc5 > 0.0 && c.dc6 < 0.0) {
    pc.case_tag = CaseTag::C1ii;
    shift = -kPi;
  } else if (c.dc5 < 0.0 && c.dc6 < 0.0) {
    pc.case_tag = CaseTag::C2i;
    shift = -kPi;
  } else {
    pc.case_tag = CaseTag::C2ii;
    shift = -2.0 * kPi;
  }
  const double stationary = 2.0 * k.rho0 / k.m0 - c7 * std::exp((c8 + shift) / sq);
  const double t_star = 2.0 * (-c8 - shift) / sq;
  pc.c7 = c7;
  pc.c8 = c8;
  pc.triggers_blowup = stationary <= 0.0;

  Candidate best{1.0, 0.0};
  consider(best, stationary, t_star);
  pc.min_etax = best.value;
  pc.t_min = best.t;
  return pc;
}

PointCondition classify_coefficients(const Coefficients& k) {
  if (auto* a = std::get_if<CoefficientsA>(&k.c)) return classify_a(k, *a);
  if (auto* b = std::get_if<CoefficientsB>(&k.c)) return classify_b(k, *b);
  return classify_c(k, std::get<CoefficientsC>(k.c));
}

double witness_time(const InitialData& data, double x) {
  const Coefficients k = coefficients_at(data, x);
  const PointCondition pc = classify_coefficients(k);
  if (!pc.triggers_blowup || !pc.t_min) return kInf;
  // grazing minima can round to a tiny positive value
  if (etax_at(k, *pc.t_min) > 0.0) return *pc.t_min;
  return first_zero_time(k, *pc.t_min);
}

}  // namespace

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::A: return "A";
    case CaseTag::B: return "B";
    case CaseTag::C1i: return "C1i";
    case CaseTag::C1ii: return "C1ii";
    case CaseTag::C2i: return "C2i";
    case CaseTag::C2ii: return "C2ii";
    case CaseTag::C0: return "C0";
  }
  return "?";
}

PointCondition classify_point(const InitialData& data, double x) {
  return classify_coefficients(coefficients_at(data, x));
}

double first_zero_time(const Coefficients& k, double t_hi) {
  const double end = etax_at(k, t_hi);
  if (end > 0.0) throw Error(Errc::InvalidArgument, "etax does not reach zero on the bracket");
  if (end == 0.0) return t_hi;
  std::uintmax_t iters = 200;
  auto tol = [](double lo, double hi) { return std::abs(hi - lo) <= 1e-14 * std::max(1.0, std::abs(hi)); };
  auto r = boost::math::tools::toms748_solve([&](double t) { return etax_at(k, t); }, 0.0, t_hi, 1.0, end, tol,
                                             iters);
  return 0.5 * (r.first + r.second);
}

Verdict classify(const InitialData& data, std::size_t scan_n) {
  if (scan_n < 64) throw Error(Errc::InvalidArgument, "scan_n must be at least 64");
  const Interval& dom = data.domain;
  const std::size_t npts = scan_n + 2;
  const double h = dom.width() / static_cast<double>(scan_n + 1);
  auto grid_x = [&](std::size_t k) {
    if (k == 0) return dom.a0;
    if (k + 1 == npts) return dom.b0;
    return dom.a0 + h * static_cast<double>(k);
  };

  std::vector<PointCondition> pcs(npts);
  for (std::size_t k = 0; k < npts; ++k) pcs[k] = classify_point(data, grid_x(k));

  Verdict verdict;
  verdict.boundary_vacuum = data.rho(dom.a0) == 0.0 || data.rho(dom.b0) == 0.0;

  std::vector<double> candidates;
  for (std::size_t k = 0; k < npts; ++k) {
    if (pcs[k].triggers_blowup) candidates.push_back(pcs[k].x);
  }

  // locate predicate switches
  std::vector<std::size_t> flips;
  for (std::size_t k = 0; k + 1 < npts; ++k) {
    if (pcs[k].triggers_blowup == pcs[k + 1].triggers_blowup) continue;
    flips.push_back(k);
    double lo = pcs[k].x, hi = pcs[k + 1].x;
    const bool lo_triggers = pcs[k].triggers_blowup;
    while (hi - lo > kXResolution) {
      const double mid = 0.5 * (lo + hi);
      (classify_point(data, mid).triggers_blowup == lo_triggers ? lo : hi) = mid;
    }
    verdict.predicate_boundaries.push_back(0.5 * (lo + hi));
    candidates.push_back(lo_triggers ? lo : hi);
  }
  for (std::size_t j = 1; j < flips.size(); ++j) {
    if (flips[j] - flips[j - 1] <= 1) verdict.scan_too_coarse = true;
  }

  // thin supercritical sets can hide between grid points: refine around
  // non-triggering local minima of the infimum
  for (std::size_t k = 1; k + 1 < npts; ++k) {
    if (pcs[k].triggers_blowup) continue;
    if (pcs[k].min_etax > pcs[k - 1].min_etax || pcs[k].min_etax > pcs[k + 1].min_etax) continue;
    if (pcs[k].min_etax >= 1.0) continue;
    auto r = boost::math::tools::brent_find_minima(
        [&](double x) { return classify_point(data, x).min_etax; }, pcs[k - 1].x, pcs[k + 1].x, 40);
    const PointCondition refined = classify_point(data, r.first);
    if (refined.triggers_blowup) {
      candidates.push_back(r.first);
      verdict.scan_too_coarse = true;
    }
  }

  if (candidates.empty()) return verdict;

  double best_x = candidates.front();
  double best_t = kInf;
  for (double x : candidates) {
    const double t = witness_time(data, x);
    if (t < best_t || (t == best_t && x < best_x)) {
      best_t = t;
      best_x = x;
    }
  }

  // polish the earliest blow-up location inside the neighbouring cells
  {
    const double lo = std::max(dom.a0, best_x - h);
    const double hi = std::min(dom.b0, best_x + h);
    auto r = boost::math::tools::brent_find_minima([&](double x) { return witness_time(data, x); }, lo, hi, 40);
    for (double x : {r.first, lo, hi}) {
      const double t = witness_time(data, x);
      if (t < best_t) {
        best_t = t;
        best_x = x;
      }
    }
  }

  BlowUp b;
  b.x_star = best_x;
  b.witness = classify_point(data, best_x);
  b.t_star_min = *b.witness.t_min;
  b.t_first_zero = best_t;
  verdict.blowup = b;
  return verdict;
}

BruteMin brute_min_etax(const InitialData& data, double t_max, std::size_t nt, std::size_t nx) {
  if (!(t_max > 0.0) || nt < 64 || nx < 64) {
    throw Error(Errc::InvalidArgument, "brute_min_etax needs t_max > 0 and nt, nx >= 64");
  }
  const Interval& dom = data.domain;
  const double hx = dom.width() / static_cast<double>(nx - 1);
  const double ht = t_max / static_cast<double>(nt - 1);
  auto xs = [&](std::size_t i) { return i + 1 == nx ? dom.b0 : dom.a0 + hx * static_cast<double>(i); };

  BruteMin best{kInf, 0.0, dom.a0};
  std::size_t bi = 0, bj = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    const Coefficients k = coefficients_at(data, xs(i));
    for (std::size_t j = 0; j < nt; ++j) {
      const double t = ht * static_cast<double>(j);
      const double e = etax_at(k, t);
      if (e < best.value) {
        best = {e, t, k.x};
        bi = i;
        bj = j;
      }
    }
  }

  // alternate one-dimensional refinements around the grid minimum
  double x_lo = xs(bi > 0 ? bi - 1 : 0), x_hi = xs(std::min(bi + 1, nx - 1));
  double t_lo = ht * static_cast<double>(bj > 0 ? bj - 1 : 0);
  double t_hi = ht * static_cast<double>(std::min(bj + 1, nt - 1));
  for (int round = 0; round < 4; ++round) {
    const Coefficients k = coefficients_at(data, best.x);
    auto rt = boost::math::tools::brent_find_minima([&](double t) { return etax_at(k, t); }, t_lo, t_hi, 52);
    if (rt.second < best.value) best = {rt.second, rt.first, best.x};
    const double t = best.t;
    auto rx = boost::math::tools::brent_find_minima(
        [&](double x) { return etax_at(coefficients_at(data, x), t); }, x_lo, x_hi, 52);
    if (rx.second < best.value) best = {rx.second, t, rx.first};
    // endpoints of the x bracket are not visited by Brent
    for (double x : {x_lo, x_hi}) {
      const double e = etax_at(coefficients_at(data, x), t);
      if (e < best.value) best = {e, t, x};
    }
  }
  return best;
}

CriticalParameter sweep_critical(const DataFamily& family, double param_lo, double param_hi, double tol,
                                 std::size_t scan_n) {
  if (!(tol > 0.0) || !(param_lo < param_hi)) {
    throw Error(Errc::InvalidArgument, "sweep needs lo < hi and tol > 0");
  }
  Verdict v_lo = classify(family(param_lo), scan_n);
  Verdict v_hi = classify(family(param_hi), scan_n);
  if (v_lo.is_global() == v_hi.is_global()) {
    throw Error(Errc::NotBracketed, std::string("both ends classify as ") + (v_lo.is_global() ? "Global" : "BlowUp"));
  }
  CriticalParameter out;
  const bool lo_global = v_lo.is_global();
  double g = lo_global ? param_lo : param_hi;
  double b = lo_global ? param_hi : param_lo;
  out.global_verdict = lo_global ? v_lo : v_hi;
  out.blowup_verdict = lo_global ? v_hi : v_lo;
  while (std::abs(b - g) > tol) {
    const double mid = 0.5 * (g + b);
    Verdict v = classify(family(mid), scan_n);
    if (v.is_global()) {
      g = mid;
      out.global_verdict = std::move(v);
    } else {
      b = mid;
      out.blowup_verdict = std::move(v);
    }
    ++out.iterations;
  }
  out.global_side = g;
  out.blowup_side = b;
  out.critical = 0.5 * (g + b);
  return out;
}

}  // namespace eplag
