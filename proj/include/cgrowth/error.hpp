#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cgrowth {

enum class Errc {
  InvalidArgument,
  NonPrime,
  CapExceeded,
  DivisionByZero,
  FieldMismatch,
  NotMonic,
  ZeroPolynomial,
  UnsupportedFamily,
  GroupMismatch,
  SizeOutOfRange,
  NotEnumerated,
  NotFound,
  NotProperSubset,
  ExhaustedWitness,
  SubsetTooSmall,
  NotInClass,
  BadT,
  NoWitness,
  PreconditionFailed,
  NoProgress,
  BudgetExhausted,
  ClosureFailed,
  BadEncoding,
  ProductNotG,
  RatioMismatch,
  ParityViolation,
  TypeUnavailable,
  NoWitnessInBudget,
  InvariantViolated,
};

constexpr std::string_view errc_name(Errc c) noexcept {
  switch (c) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NonPrime: return "NonPrime";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::NotMonic: return "NotMonic";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::UnsupportedFamily: return "UnsupportedFamily";
    case Errc::GroupMismatch: return "GroupMismatch";
    case Errc::SizeOutOfRange: return "SizeOutOfRange";
    case Errc::NotEnumerated: return "NotEnumerated";
    case Errc::NotFound: return "NotFound";
    case Errc::NotProperSubset: return "NotProperSubset";
    case Errc::ExhaustedWitness: return "ExhaustedWitness";
    case Errc::SubsetTooSmall: return "SubsetTooSmall";
    case Errc::NotInClass: return "NotInClass";
    case Errc::BadT: return "BadT";
    case Errc::NoWitness: return "NoWitness";
    case Errc::PreconditionFailed: return "PreconditionFailed";
    case Errc::NoProgress: return "NoProgress";
    case Errc::BudgetExhausted: return "BudgetExhausted";
    case Errc::ClosureFailed: return "ClosureFailed";
    case Errc::BadEncoding: return "BadEncoding";
    case Errc::ProductNotG: return "ProductNotG";
    case Errc::RatioMismatch: return "RatioMismatch";
    case Errc::ParityViolation: return "ParityViolation";
    case Errc::TypeUnavailable: return "TypeUnavailable";
    case Errc::NoWitnessInBudget: return "NoWitnessInBudget";
    case Errc::InvariantViolated: return "InvariantViolated";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying an Errc.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string const& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, std::string const& what) { throw Error(code, what); }

}  // namespace cgrowth
