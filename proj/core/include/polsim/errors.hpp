#pragma once

#include <stdexcept>
#include <string>

namespace polsim {

// Invalid or inconsistent input: bad parameters, malformed config,
// mismatched grids.  The command line tool maps this to exit code 2.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An algorithm failed: no convergence, non-finite state, instability.
// Exit code 3.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pulse support reached the edge of the computational domain.  Exit code 4.
struct domain_overflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A field/control ratio was requested with the control below its floor.
struct degenerate_control : numerical_error {
  using numerical_error::numerical_error;
};

// The requested operation is outside the regime the implementation covers
// (for example boundary injection with a time-varying control).
struct unsupported_regime : config_error {
  using config_error::config_error;
};

}  // namespace polsim
