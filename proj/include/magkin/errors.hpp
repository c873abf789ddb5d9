#pragma once

#include <stdexcept>
#include <string>

namespace magkin {

/// Raised when a field configuration is outside what a routine supports
/// (e.g. b1 != 0 where the normal form (0, b2, b3) is required).
struct unsupported_configuration : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when a filling is asked to place more mass than the supplied
/// levels can hold.
struct capacity_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised by iterative routines that stop without meeting their tolerance.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace magkin
