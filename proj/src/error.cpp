#include "bintree/error.hpp"

namespace bintree {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kSyntax: return "SyntaxError";
    case ErrorCode::kTrivialTree: return "TrivialTree";
    case ErrorCode::kBadPath: return "BadPath";
    case ErrorCode::kCapExceeded: return "CapExceeded";
    case ErrorCode::kCyclicGrammar: return "CyclicGrammar";
    case ErrorCode::kMalformedGrammar: return "MalformedGrammar";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kTruncated: return "Truncated";
    case ErrorCode::kMalformedB2: return "MalformedB2";
    case ErrorCode::kMalformedB3: return "MalformedB3";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kInconsistentFrequencies: return "InconsistentFrequencies";
    case ErrorCode::kDeadEnd: return "DeadEnd";
    case ErrorCode::kNotSigma2Star: return "NotSigma2Star";
    case ErrorCode::kBadModel: return "BadModel";
    case ErrorCode::kDomain: return "DomainError";
    case ErrorCode::kSizeLimit: return "SizeLimit";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bintree
