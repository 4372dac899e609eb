#pragma once

#include <stdexcept>
#include <string>

namespace hvp {

enum class ErrorKind {
  BadExtent,
  BudgetExceeded,
  DomainError,
  SingularPoint,
  NonFiniteForce,
  NonFinite,
  BlowUp,
  NoContraction,
  GridMismatch,
  ParseError,
  ValidationError,
  IoError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  // Numerical failures map to exit code 2, everything else to 1.
  bool numerical() const noexcept {
    return kind_ == ErrorKind::BlowUp || kind_ == ErrorKind::NoContraction ||
           kind_ == ErrorKind::NonFinite || kind_ == ErrorKind::NonFiniteForce;
  }

private:
  ErrorKind kind_;
};

}  // namespace hvp
