#include "collapse/error.hpp"

namespace collapse {

std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::NonUnitNormal: return "NonUnitNormal";
    case Errc::NotInContact: return "NotInContact";
    case Errc::Overlapping: return "Overlapping";
    case Errc::NumericalOverlap: return "NumericalOverlap";
    case Errc::PatternMismatch: return "PatternMismatch";
    case Errc::ZeroNormalComponent: return "ZeroNormalComponent";
    case Errc::NoFutureCollision: return "NoFutureCollision";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::SqrtDomain: return "SqrtDomain";
    case Errc::SingularDenominator: return "SingularDenominator";
    case Errc::NotFound: return "NotFound";
    case Errc::BracketFailed: return "BracketFailed";
    case Errc::NoBracket: return "NoBracket";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace collapse
