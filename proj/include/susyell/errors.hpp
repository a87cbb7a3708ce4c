#pragma once

#include <stdexcept>

namespace susyell {

/// Base class for solver failures, so callers can catch the whole family.
struct solver_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Supplied wavefunction has a node (zero or sign change) on the interior.
struct nodeful_wavefunction : solver_error {
    using solver_error::solver_error;
};

/// The requested state does not exist for these parameters.
struct no_bound_state : solver_error {
    using solver_error::solver_error;
};

/// A solution-family denominator vanished at an evaluation point.
struct singular_solution : solver_error {
    using solver_error::solver_error;
};

/// Integrand has not decayed at r_max; the grid truncates the integral.
struct truncation_error : solver_error {
    using solver_error::solver_error;
};

/// Supplied first-order energy is inconsistent with the ground solution.
struct inconsistent_eps1 : solver_error {
    using solver_error::solver_error;
};

} // namespace susyell
