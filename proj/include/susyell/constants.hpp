#pragma once

#include <cmath>
#include <stdexcept>

namespace susyell {

/// Unit system of the radial problem. kappa = hbar/sqrt(2m) is cached because
/// every factorization identity is written in terms of it.
struct constants {
    double hbar;
    double mass;
    double kappa;

    constants() : constants(1.0, 1.0) {}

    constants(double hbar_, double mass_) : hbar(hbar_), mass(mass_) {
        if (!(hbar > 0.0) || !(mass > 0.0))
            throw std::invalid_argument("constants: hbar and mass must be positive");
        kappa = hbar / std::sqrt(2.0 * mass);
    }
};

} // namespace susyell
