#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bintree {

// Every failure the library reports carries one of these codes. The C API
// maps them one-to-one onto bt_status values.
enum class ErrorCode {
  kSyntax = 1,
  kTrivialTree,
  kBadPath,
  kCapExceeded,
  kCyclicGrammar,
  kMalformedGrammar,
  kLengthMismatch,
  kTruncated,
  kMalformedB2,
  kMalformedB3,
  kIndexOutOfRange,
  kInconsistentFrequencies,
  kDeadEnd,
  kNotSigma2Star,
  kBadModel,
  kDomain,
  kSizeLimit,
  kIo,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bintree
