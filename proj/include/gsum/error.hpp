#pragma once

#include <stdexcept>
#include <string>

namespace gsum {

/// Failure categories. The CLI maps them onto process exit codes.
enum class ErrorKind {
  domain,              // argument outside the documented domain
  precision_exhausted, // extended-precision range exceeded
  quadrature_failure,  // tolerance not reached within the node budget
  depth_limit,         // renormalization cascade deeper than configured
  budget_exhausted,
  series_truncation,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::domain: return "domain-error";
    case ErrorKind::precision_exhausted: return "precision-exhausted";
    case ErrorKind::quadrature_failure: return "quadrature-failure";
    case ErrorKind::depth_limit: return "depth-limit";
    case ErrorKind::budget_exhausted: return "budget-exhausted";
    case ErrorKind::series_truncation: return "series-truncation-insufficient";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Error(k, msg);
}

}  // namespace gsum
