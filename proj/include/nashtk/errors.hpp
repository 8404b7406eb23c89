#pragma once

#include <stdexcept>
#include <string>

namespace nashtk {

// Malformed or out-of-contract input (bad file, bad dimensions, violated
// precondition). CLI exit code 2.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A check that was asked for failed (a claimed solution does not verify).
// CLI exit code 1.
struct VerifyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An explicit work budget (pivot count, point budget, iteration cap) ran out
// before an answer was reached. CLI exit code 3.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nashtk
