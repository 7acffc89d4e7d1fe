#pragma once

#include <stdexcept>
#include <string>

namespace frachj {

enum class ErrorKind {
  domain,
  configuration,
  length_mismatch,
  degenerate,
  missing_boundary,
  beyond_critical_time,
  cfl_violation,
  cfl_infeasible,
  numerical,
  oracle_unavailable,
};

const char* to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Process exit codes used by the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitCfl = 3;
inline constexpr int kExitNumerical = 4;
inline constexpr int kExitPropertyFailure = 5;

int exit_code(ErrorKind kind) noexcept;

}  // namespace frachj
