#pragma once

#include <stdexcept>
#include <string>

namespace mdc {

enum class ErrorCode {
  usage,
  io,
  disconnected_graph,
  degenerate_kernel,
  lambda2_unity,
  singular_complement,
  invalid_clustering,
  eigensolver_failure,
};

const char* error_code_name(ErrorCode code);

/// Error carrying a machine-parsable code; the CLI prints
/// "<CODE>: <message>" on a single line and exits nonzero.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace mdc
