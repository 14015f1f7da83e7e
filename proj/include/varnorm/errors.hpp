#pragma once

#include <stdexcept>
#include <string>

namespace varnorm {

// Invalid data or a violated precondition. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numeric procedure exhausted its budget before reaching tolerance.
// Carries the last observed gap so callers can report it. CLI exit code 3.
class convergence_error : public std::runtime_error {
 public:
  convergence_error(const std::string& what, double gap)
      : std::runtime_error(what), gap_(gap) {}
  double gap() const noexcept { return gap_; }

 private:
  double gap_;
};

}  // namespace varnorm
