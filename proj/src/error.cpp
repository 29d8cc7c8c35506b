#include "fockseq/error.hpp"

namespace fockseq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::ArithmeticOverflow: return "arithmetic overflow";
    case ErrorCode::DomainTooLarge: return "domain too large";
    case ErrorCode::InvalidExponent: return "invalid exponent";
    case ErrorCode::InsufficientOrder: return "insufficient order";
    case ErrorCode::OutOfHorizon: return "out of horizon";
    case ErrorCode::IndexOutOfRange: return "index out of range";
    case ErrorCode::SpaceMismatch: return "sample space mismatch";
    case ErrorCode::InsufficientLength: return "insufficient length";
    case ErrorCode::NotAMartingale: return "not a generalized martingale";
    case ErrorCode::ParseError: return "parse error";
  }
  return "unknown error";
}

}  // namespace fockseq
