#pragma once

#include <stdexcept>
#include <string>

namespace orbit_isom {

/// Classes of failure. Validation and Internal map to CLI exit code 1,
/// Ambiguous (a numerical decision fell inside a guard band) maps to 2.
enum class ErrorKind { Validation, Ambiguous, Internal };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), kind_(kind), stage_(std::move(stage)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& stage() const noexcept { return stage_; }

 private:
  ErrorKind kind_;
  std::string stage_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& stage, const std::string& message) {
  throw Error(kind, stage, message);
}

}  // namespace orbit_isom
