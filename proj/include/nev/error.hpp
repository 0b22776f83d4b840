#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nev {

using cplx = std::complex<double>;

enum class ErrorKind {
  syntax,
  non_integer_exponent,
  unknown_identifier,
  domain,
  coincidence,
  budget_exceeded,
  boundary_collision,
  not_catalogable,
  identically_zero,
  non_finite,
  precondition,
  zero_denominator,
  extrapolation,
  insufficient_range,
  degenerate,
  periodic,
  config,
  io,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library. The kind is stable and machine
// readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> offset = std::nullopt)
      : std::runtime_error(message), kind_(kind), offset_(offset) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Byte offset into the source text for parse errors.
  std::optional<std::size_t> offset() const noexcept { return offset_; }

 private:
  ErrorKind kind_;
  std::optional<std::size_t> offset_;
};

}  // namespace nev
