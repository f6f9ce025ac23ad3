#pragma once

#include <stdexcept>
#include <string>

namespace rsgraph {

// Malformed instance, policy or argument.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Root bracketing or quadrature failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Broken invariant inside the solver (stale arcs, unreachable sink).
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Repetitive augmentation hit its iteration cap.
class NonTerminationError : public std::runtime_error {
 public:
  NonTerminationError(const std::string& what, std::string trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}

  const std::string& trace() const noexcept { return trace_; }

 private:
  std::string trace_;
};

}  // namespace rsgraph
