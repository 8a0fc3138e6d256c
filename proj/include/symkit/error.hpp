#pragma once

#include <stdexcept>
#include <string>

namespace symkit {

enum class ErrorKind {
  EvaluationBudget,
  Undefined,
  NoSupportCertificate,
  NoCertificate,
  ConvergenceViolated,
  Parse,
  UnsupportedMetric,
  NotUncrowded,
  InsufficientSet,
  ProfileViolation,
  NotIsomorphic,
  Precondition,
  HypothesisFailure,
  IllFormedTree,
  Budget,
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

// Answers to questions about infinite objects that finite probing may not settle.
enum class Tri { Yes, No, Unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::Yes: return "yes";
    case Tri::No: return "no";
    default: return "unknown";
  }
}

}  // namespace symkit
