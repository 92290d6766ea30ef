#include "pseudofrac/errors.hpp"

namespace pseudofrac {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::empty_grid: return "EmptyGrid";
    case ErrorKind::unsupported_dims: return "UnsupportedDims";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::zero_function: return "ZeroFunction";
    case ErrorKind::too_large: return "TooLarge";
    case ErrorKind::bad_exponents: return "BadExponents";
    case ErrorKind::unsupported_block: return "UnsupportedBlock";
    case ErrorKind::non_product_domain: return "NonProductDomain";
    case ErrorKind::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

ParseError::ParseError(std::size_t position, const std::string& message)
    : Error(ErrorKind::parse_error, message + " (at position " + std::to_string(position) + ")"),
      position_(position) {}

}  // namespace pseudofrac
