#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace collapse {

enum class Errc {
  NonUnitNormal,
  NotInContact,
  Overlapping,
  NumericalOverlap,
  PatternMismatch,
  ZeroNormalComponent,
  NoFutureCollision,
  PreconditionViolated,
  SqrtDomain,
  SingularDenominator,
  NotFound,
  BracketFailed,
  NoBracket,
  InvalidArgument,
};

std::string_view to_string(Errc e) noexcept;

// Every library failure is an Error; code() tells callers which one.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace collapse
