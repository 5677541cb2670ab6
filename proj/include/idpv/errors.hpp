#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idpv {

enum class Errc {
  CharDivision,
  DivisionByZero,
  FieldMismatch,
  NotAUnit,
  OrderMismatch,
  RootObstruction,
  SingularAtOrigin,
  BadPoint,
  ZeroInput,
  SpanNotClosed,
  ShiftUnavailable,
  CharNotZero,
  BaseMismatch,
  InsufficientOrder,
  ReductionOverflow,
  NotDiagonal,
  NotSupported,
  ParseError,
  SemanticError,
};

std::string_view errc_name(Errc code) noexcept;

/// Single exception type for the library; the code distinguishes the contract
/// that was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace idpv
