#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cliquechain {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kNotFound,
  kConflict,
  kNonConvergence,
  kInternal,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every engine failure is reported as an Error carrying a machine-readable
// code. The CLI maps codes onto exit statuses, the service onto HTTP statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cliquechain
