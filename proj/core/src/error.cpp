#include "goupillaud/error.hpp"

namespace goupillaud {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveDrift: return "NonPositiveDrift";
    case ErrorKind::BadParameter: return "BadParameter";
    case ErrorKind::BadWindow: return "BadWindow";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::OutOfWindow: return "OutOfWindow";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidGrid: return "InvalidGrid";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::BadExponent: return "BadExponent";
    case ErrorKind::BadBandwidth: return "BadBandwidth";
    case ErrorKind::BadSteps: return "BadSteps";
    case ErrorKind::InsufficientWindow: return "InsufficientWindow";
    case ErrorKind::NoIntegrableTransform: return "NoIntegrableTransform";
    case ErrorKind::BadFormat: return "BadFormat";
  }
  return "Unknown";
}

}  // namespace goupillaud
