#include "ordpat/error.hpp"

namespace ordpat {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::InvalidCode: return "InvalidCode";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::OrderMismatch: return "OrderMismatch";
    case ErrorKind::InputMismatch: return "InputMismatch";
    case ErrorKind::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorKind::DegenerateMarginal: return "DegenerateMarginal";
    case ErrorKind::InvalidBandwidth: return "InvalidBandwidth";
    case ErrorKind::SingularCovariance: return "SingularCovariance";
    case ErrorKind::InvalidCorrelation: return "InvalidCorrelation";
    case ErrorKind::InvalidCovariance: return "InvalidCovariance";
    case ErrorKind::NonStationary: return "NonStationary";
  }
  return "Unknown";
}

}  // namespace ordpat
