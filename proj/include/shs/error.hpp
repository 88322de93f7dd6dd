#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shs {

enum class Errc {
  NotHermitian,
  NotPSD,
  NoConvergence,
  ZeroA,
  DimMismatch,
  NotABounded,
  NotAdjointable,
  NotAPositive,
  ZeroSeminorm,
  BadEpsilon,
  NumericalFailure,
  ParseError,
  ValidationError,
  BadSpec,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::ZeroA: return "ZeroA";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotABounded: return "NotABounded";
    case Errc::NotAdjointable: return "NotAdjointable";
    case Errc::NotAPositive: return "NotAPositive";
    case Errc::ZeroSeminorm: return "ZeroSeminorm";
    case Errc::BadEpsilon: return "BadEpsilon";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationError: return "ValidationError";
    case Errc::BadSpec: return "BadSpec";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace shs
