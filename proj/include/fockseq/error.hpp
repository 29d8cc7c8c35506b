#pragma once

#include <stdexcept>
#include <string>

namespace fockseq {

enum class ErrorCode {
  InvalidArgument,
  ArithmeticOverflow,
  DomainTooLarge,
  InvalidExponent,
  InsufficientOrder,
  OutOfHorizon,
  IndexOutOfRange,
  SpaceMismatch,
  InsufficientLength,
  NotAMartingale,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

/// Single exception type for the library; `code()` distinguishes the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fockseq
