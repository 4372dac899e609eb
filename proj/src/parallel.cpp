#include "hvp/parallel.hpp"

#include <cstdlib>
#include <string>

#include "hvp/error.hpp"

namespace hvp {

namespace {
int g_threads = default_threads();
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::BadExtent: return "BadExtent";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::NonFiniteForce: return "NonFiniteForce";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::BlowUp: return "BlowUp";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

void set_threads(int n) { g_threads = n < 1 ? 1 : n; }

int threads() { return g_threads; }

int default_threads() {
  const char* env = std::getenv("HVP_THREADS");
  if (!env) return 1;
  try {
    const int n = std::stoi(env);
    return n >= 1 ? n : 1;
  } catch (...) {
    return 1;
  }
}

}  // namespace hvp
