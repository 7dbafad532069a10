#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace galdef {

enum class ErrorKind {
  NonPrimeModulus,
  Reducible,
  DenominatorNotInvertible,
  IndeterminateReduction,
  Schema,
  InvariantViolation,
  InsufficientPrecision,
  GalleryIncomplete,
  HypothesisViolated,
  CaseMismatch,
  Precondition,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library. `field()` names the offending input
/// location (a JSON path such as `an[3].den`) when there is one.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string field = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace galdef
