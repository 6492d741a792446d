#pragma once

#include <string>

namespace goupillaud {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_real(double v);

/// Strict parse of a whole token; throws DomainError(BadFormat).
double parse_real(const std::string& token);

}  // namespace goupillaud
