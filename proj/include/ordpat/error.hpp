#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ordpat {

enum class ErrorKind {
  InvalidInput,
  UnsupportedOrder,
  InvalidCode,
  InsufficientData,
  OrderMismatch,
  InputMismatch,
  DegenerateDenominator,
  DegenerateMarginal,
  InvalidBandwidth,
  SingularCovariance,
  InvalidCorrelation,
  InvalidCovariance,
  NonStationary,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ordpat
