#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pseudofrac {

enum class ErrorKind {
  invalid_argument,
  empty_grid,
  unsupported_dims,
  grid_mismatch,
  zero_function,
  too_large,
  bad_exponents,
  unsupported_block,
  non_product_domain,
  parse_error,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind is stable
/// and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised by the domain-string parser; `position` is the 0-based offset of the
/// offending character.
class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message);

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace pseudofrac
