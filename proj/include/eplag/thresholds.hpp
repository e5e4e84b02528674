#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "eplag/closed_form.hpp"

namespace eplag {

/// Which branch of the blow-up criterion applies at a point. The C tags
/// follow the sign pattern of (dC5/dx, dC6/dx):
///   C1i (-,+)  C1ii (+,-)  C2i (-,-)  C2ii (+,+)
/// and C0 marks the measure-zero case where either derivative vanishes.
enum class CaseTag { A, B, C1i, C1ii, C2i, C2ii, C0 };

std::string_view to_string(CaseTag tag);

struct PointCondition {
  double x = 0.0;
  CaseTag case_tag = CaseTag::A;
  bool triggers_blowup = false;
  /// Infimum of etax(., x) over t >= 0 (may be the t -> infinity limit).
  double min_etax = 1.0;
  /// Time at which min_etax is attained; empty when it is only the limit.
  std::optional<double> t_min;
  std::optional<double> c7;
  std::optional<double> c8;
};

PointCondition classify_point(const InitialData& data, double x);

struct BlowUp {
  double x_star = 0.0;
  double t_star_min = 0.0;    // where etax(., x_star) is smallest
  double t_first_zero = 0.0;  // first time etax(., x_star) reaches zero
  PointCondition witness;
};

struct Verdict {
  std::optional<BlowUp> blowup;
  /// Refined x positions where the blow-up predicate switches.
  std::vector<double> predicate_boundaries;
  /// Advisory: the predicate varies on the scale of one scan cell.
  bool scan_too_coarse = false;
  /// rho0 vanishes at an endpoint (allowed; classical theory wants rho0 > 0).
  bool boundary_vacuum = false;

  bool is_global() const { return !blowup.has_value(); }
};

inline constexpr std::size_t kDefaultScanN = 1024;

Verdict classify(const InitialData& data, std::size_t scan_n = kDefaultScanN);

/// Earliest zero of etax(., x) on (0, t_hi]; requires etax(t_hi, x) <= 0.
double first_zero_time(const Coefficients& coeffs, double t_hi);

struct BruteMin {
  double value = 0.0;
  double t = 0.0;
  double x = 0.0;
};

/// Dense scan of the closed-form etax over [0, t_max] x [a0, b0] followed by
/// local refinement. Independent of the blow-up predicates.
BruteMin brute_min_etax(const InitialData& data, double t_max, std::size_t nt, std::size_t nx);

using DataFamily = std::function<InitialData(double)>;

struct CriticalParameter {
  double critical = 0.0;
  double global_side = 0.0;  // last parameter classified Global
  double blowup_side = 0.0;  // last parameter classified BlowUp
  Verdict global_verdict;
  Verdict blowup_verdict;
  std::size_t iterations = 0;
};

/// Bisection on the verdict between a Global end and a BlowUp end (either
/// orientation) down to width tol. Throws NotBracketed when both ends agree.
CriticalParameter sweep_critical(const DataFamily& family, double param_lo, double param_hi, double tol,
                                 std::size_t scan_n = kDefaultScanN);

}  // namespace eplag
