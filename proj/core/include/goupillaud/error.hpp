#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace goupillaud {

enum class ErrorKind {
  NonPositiveDrift,
  BadParameter,
  BadWindow,
  BadLevel,
  OutOfWindow,
  OutOfRange,
  InvalidGrid,
  GridMismatch,
  BadExponent,
  BadBandwidth,
  BadSteps,
  InsufficientWindow,
  NoIntegrableTransform,
  BadFormat,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Domain failure raised by the library. The kind lets callers (the CLI in
/// particular) map failures onto exit codes without parsing messages.
class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace goupillaud
