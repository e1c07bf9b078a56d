#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wittforge {

enum class ErrorCode {
  ArchimedeanPlace,
  ZeroElement,
  NotAUnit,
  ResidueCharTwo,
  UnsupportedField,
  ZeroSlot,
  ZeroScalar,
  FieldMismatch,
  DegreeMismatch,
  DimensionMismatch,
  ExtensionMismatch,
  UndecidableAtPlace,
  UnsupportedDegree,
  NotInIdealPower,
  NoPfisterPresentation,
  NormalizationFailure,
  UnsupportedConfiguration,
  BadReductionInCatalog,
  InvariantUndecided,
  NotLocallyEquivalent,
  Undecided,
  ParseError,
  InvalidArgument,
  InternalInvariant,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ArchimedeanPlace: return "ArchimedeanPlace";
    case ErrorCode::ZeroElement: return "ZeroElement";
    case ErrorCode::NotAUnit: return "NotAUnit";
    case ErrorCode::ResidueCharTwo: return "ResidueCharTwo";
    case ErrorCode::UnsupportedField: return "UnsupportedField";
    case ErrorCode::ZeroSlot: return "ZeroSlot";
    case ErrorCode::ZeroScalar: return "ZeroScalar";
    case ErrorCode::FieldMismatch: return "FieldMismatch";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ExtensionMismatch: return "ExtensionMismatch";
    case ErrorCode::UndecidableAtPlace: return "UndecidableAtPlace";
    case ErrorCode::UnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::NotInIdealPower: return "NotInIdealPower";
    case ErrorCode::NoPfisterPresentation: return "NoPfisterPresentation";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::UnsupportedConfiguration: return "UnsupportedConfiguration";
    case ErrorCode::BadReductionInCatalog: return "BadReductionInCatalog";
    case ErrorCode::InvariantUndecided: return "InvariantUndecided";
    case ErrorCode::NotLocallyEquivalent: return "NotLocallyEquivalent";
    case ErrorCode::Undecided: return "Undecided";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace wittforge
