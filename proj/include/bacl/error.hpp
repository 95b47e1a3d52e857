#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bacl {

enum class ErrorKind {
  parameter,
  dimension,
  capacity,
  degeneracy,
  domain,
  contract,
  non_convergence,
  config,
  io,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::domain: return "domain";
    case ErrorKind::contract: return "contract";
    case ErrorKind::non_convergence: return "non_convergence";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace bacl
