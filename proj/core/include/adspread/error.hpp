#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace adspread {

enum class ErrorKind {
  Config,      // bad arguments, unknown ids, violated preconditions
  Io,          // filesystem failures
  Parse,       // malformed input files
  Validation,  // inputs parse but break model invariants
  Infeasible,  // budget constraints cannot be met
  Internal,    // engine failures (e.g. diffusion did not reach a fixed point)
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace adspread
