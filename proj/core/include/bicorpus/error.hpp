#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bicorpus {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kIo,
  kUndetectable,
  kShortfall,
  kEmpty,
  kBadMagic,
  kVersionMismatch,
  kVocabMismatch,
  kCorrupt,
};

std::string_view error_code_name(ErrorCode code);

// All recoverable failures in the library are reported with this type. The
// code lets callers branch (e.g. treat kUndetectable as a filter rejection)
// without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kUndetectable: return "undetectable";
    case ErrorCode::kShortfall: return "shortfall";
    case ErrorCode::kEmpty: return "empty";
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kVersionMismatch: return "version-mismatch";
    case ErrorCode::kVocabMismatch: return "vocab-mismatch";
    case ErrorCode::kCorrupt: return "corrupt";
  }
  return "unknown";
}

}  // namespace bicorpus
