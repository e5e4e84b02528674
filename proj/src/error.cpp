#include "eplag/error.hpp"

namespace eplag {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::DegenerateDomain: return "DegenerateDomain";
    case Errc::NonPositiveDensity: return "NonPositiveDensity";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::NonPositiveMass: return "NonPositiveMass";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::TooFewParticles: return "TooFewParticles";
    case Errc::UnsortedPositions: return "UnsortedPositions";
    case Errc::DegenerateSpacing: return "DegenerateSpacing";
    case Errc::NonFiniteState: return "NonFiniteState";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotBracketed: return "NotBracketed";
    case Errc::SupercriticalData: return "SupercriticalData";
    case Errc::NonPositiveValues: return "NonPositiveValues";
    case Errc::ComplexRoots: return "ComplexRoots";
    case Errc::HypothesisViolated: return "HypothesisViolated";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace eplag
