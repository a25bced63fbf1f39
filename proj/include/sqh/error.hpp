#pragma once

#include <stdexcept>
#include <string>

namespace sqh {

enum class ErrorKind {
  InvalidParameter,
  ActionInvalid,
  GroupTooLarge,
  NeedsSubdivision,
  SnfTooLarge,
  CorruptComplex,
  ParseError,
  ResourceCap,
  BoundViolation,
  Inconsistency,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::ActionInvalid: return "action-invalid";
    case ErrorKind::GroupTooLarge: return "group-too-large";
    case ErrorKind::NeedsSubdivision: return "needs-subdivision";
    case ErrorKind::SnfTooLarge: return "snf-too-large";
    case ErrorKind::CorruptComplex: return "corrupt-complex";
    case ErrorKind::ParseError: return "parse-error";
    case ErrorKind::ResourceCap: return "resource-cap";
    case ErrorKind::BoundViolation: return "bound-violation";
    case ErrorKind::Inconsistency: return "inconsistency";
  }
  return "unknown";
}

}  // namespace sqh
