#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace peretz {

enum class ErrorCode {
  Syntax,
  UnknownCharacter,
  ZeroDenominator,
  DivisionByZero,
  FractionalPowerOfSum,
  NegativePowerOfSum,
  LimitSymbolClash,
  UnboundVariable,
  NonRealPower,
  NotUnivariate,
  NotBivariate,
  AllTrivial,
  NoBalance,
  Unclassifiable,
  NotLinearInC,
  ExponentDenominatorMismatch,
  NormalizationFailed,
  UnknownFixture,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::UnknownCharacter: return "UnknownCharacter";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::FractionalPowerOfSum: return "FractionalPowerOfSum";
    case ErrorCode::NegativePowerOfSum: return "NegativePowerOfSum";
    case ErrorCode::LimitSymbolClash: return "LimitSymbolClash";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::NonRealPower: return "NonRealPower";
    case ErrorCode::NotUnivariate: return "NotUnivariate";
    case ErrorCode::NotBivariate: return "NotBivariate";
    case ErrorCode::AllTrivial: return "AllTrivial";
    case ErrorCode::NoBalance: return "NoBalance";
    case ErrorCode::Unclassifiable: return "Unclassifiable";
    case ErrorCode::NotLinearInC: return "NotLinearInC";
    case ErrorCode::ExponentDenominatorMismatch: return "ExponentDenominatorMismatch";
    case ErrorCode::NormalizationFailed: return "NormalizationFailed";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure; `offset` is the byte offset into the input text.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t offset, const std::string& what)
      : Error(code, what + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace peretz
