#pragma once

#include <stdexcept>
#include <string>

namespace rewardlab {

// Failure taxonomy shared by all modules. CLI maps kinds onto exit codes.
enum class ErrorKind {
  dimension,           // mismatched vector lengths
  domain,              // value outside the mathematical domain (negative sigma, zero gap, ...)
  constraint,          // structural constraint violated (weights off the simplex, cov rows not summing to 0)
  insufficient_data,   // fewer records than the estimator needs
  missing_data,        // a required group/field is absent
  not_applicable,      // operation undefined for this input shape (n=2 order families, version shortage)
  unsupported_family,  // declared but not implemented here (LLM rewrite families without a plugged rewriter)
  validation,          // malformed config or document
  parse,               // unreadable input
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::domain: return "domain";
    case ErrorKind::constraint: return "constraint";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::missing_data: return "missing_data";
    case ErrorKind::not_applicable: return "not_applicable";
    case ErrorKind::unsupported_family: return "unsupported_family";
    case ErrorKind::validation: return "validation";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

}  // namespace rewardlab
