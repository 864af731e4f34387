#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdvb {

/// Machine-readable failure category. The CLI prints it as a fixed prefix.
enum class ErrorCode {
  Domain,
  Index,
  Convergence,
  Singular,
  NonFinite,
  Hypothesis,
  Config,
  Io,
  Usage,
  Containment,
  Verification,
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kdvb
