#pragma once

#include <stdexcept>
#include <string>

namespace qosa {

// Numeric values are part of the C ABI (see qosa.h); do not renumber.
enum class ErrorCode : int {
  kDimensionMismatch = 1,
  kInvalidArgument = 2,
  kNotBalanced = 3,
  kHypothesisViolated = 4,
  kStructureDetection = 5,
  kNotOrthonormal = 6,
  kNotPrime = 7,
  kTooLarge = 8,
  kNotUnitary = 9,
  kSchemaError = 10,
  kInvariantViolation = 11,
  kUnknownPreset = 12,
  kIo = 13,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace qosa
