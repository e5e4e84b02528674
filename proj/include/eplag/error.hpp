#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace eplag {

enum class Errc {
  DegenerateDomain,
  NonPositiveDensity,
  InvalidProfile,
  OutOfDomain,
  NonPositiveMass,
  InvalidArgument,
  TooFewParticles,
  UnsortedPositions,
  DegenerateSpacing,
  NonFiniteState,
  GridMismatch,
  NoConvergence,
  NotBracketed,
  SupercriticalData,
  NonPositiveValues,
  ComplexRoots,
  HypothesisViolated,
  ConfigInvalid,
  IoFailure,
};

std::string_view to_string(Errc code);

/// Numerical errors (the solver ran but could not produce a finite answer)
/// are distinguished from input validation errors by `is_numerical`.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

  Errc code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

  bool is_numerical() const noexcept {
    return code_ == Errc::NonFiniteState || code_ == Errc::NoConvergence;
  }

 private:
  Errc code_;
  std::string detail_;
};

}  // namespace eplag
