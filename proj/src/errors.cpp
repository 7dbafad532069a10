#include "galdef/errors.hpp"

namespace galdef {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::DenominatorNotInvertible: return "DenominatorNotInvertible";
    case ErrorKind::IndeterminateReduction: return "IndeterminateReduction";
    case ErrorKind::Schema: return "SchemaError";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::InsufficientPrecision: return "InsufficientPrecision";
    case ErrorKind::GalleryIncomplete: return "GalleryIncomplete";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::CaseMismatch: return "CaseMismatch";
    case ErrorKind::Precondition: return "PreconditionViolation";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorKind kind, const std::string& message, const std::string& field) {
  std::string out(to_string(kind));
  if (!field.empty()) out += " at " + field;
  out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message, std::string field)
    : std::runtime_error(compose(kind, message, field)), kind_(kind), field_(std::move(field)) {}

}  // namespace galdef
