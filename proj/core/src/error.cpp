#include "frachj/error.hpp"

namespace frachj {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::length_mismatch: return "length_mismatch";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::missing_boundary: return "missing_boundary";
    case ErrorKind::beyond_critical_time: return "beyond_critical_time";
    case ErrorKind::cfl_violation: return "cfl_violation";
    case ErrorKind::cfl_infeasible: return "cfl_infeasible";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::oracle_unavailable: return "oracle_unavailable";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::cfl_violation:
    case ErrorKind::cfl_infeasible:
      return kExitCfl;
    case ErrorKind::numerical:
      return kExitNumerical;
    default:
      return kExitConfig;
  }
}

}  // namespace frachj
