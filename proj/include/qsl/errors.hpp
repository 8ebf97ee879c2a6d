#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qsl {

enum class ErrorKind {
  NonHermitian,
  NegativeEigenvalue,
  InvalidState,
  DimMismatch,
  BadRank,
  BlochNormExceeded,
  FrozenState,
  BadGrid,
  BadAlpha,
  BadUnitVector,
  InvalidStateProduced,
  BasisMismatch,
  NotReached,
  ZeroShots,
  BadN,
  IllConditioned,
  NoConvergence,
  ParseError,
  ValidationError,
  IoError,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` carries the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace qsl
