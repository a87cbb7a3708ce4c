#pragma once

#include <algorithm>
#include <cmath>

#include "catalog.hpp"
#include "eigensolver.hpp"

namespace susyell {

struct verify_report {
    double closed_form = 0.0;
    double oracle = 0.0;
    double abs_diff = 0.0;
    bool pass = false;
};

/// The h = 0.005 boxes resolve the oscillator to ~4e-6; the singular-origin
/// families carry a larger budget.
inline double tol_oracle_default(family_kind k) {
    return k == family_kind::harmonic_oscillator ? 5e-6 : 5e-5;
}

/// Box sizes that hold the exact state's weight at the wall below the
/// solver's warning threshold, scaled to the family's own length unit, with
/// node spacing 0.005 of that unit.
inline radial_grid oracle_grid_for(const potential_family& fam, int ell, const constants& c) {
    double unit = 1.0, span = 20.0;
    switch (fam.kind) {
    case family_kind::harmonic_oscillator:
        unit = std::sqrt(c.hbar / (c.mass * fam.w));
        span = 20.0;
        break;
    case family_kind::coulomb:
        unit = c.hbar * c.hbar / (c.mass * fam.e2);
        span = 60.0 * std::max(1.0, 0.5 * (ell + 1));
        break;
    default:
        unit = c.hbar * c.hbar / (c.mass * fam.e2);
        span = 35.0 / fam.beta(c);
        break;
    }
    const int n = static_cast<int>(std::lround(span / 0.005));
    return {span * unit, n};
}

/// Lowest eigenvalue of the independently discretized Hamiltonian.
inline double oracle_energy(const potential_family& fam, int ell, const radial_grid& g,
                            const constants& c) {
    return lowest_eigenvalues(build_hamiltonian(fam, ell, g, c), 1)[0];
}

inline verify_report verify_record(const spectral_record& rec, const radial_grid& g,
                                   const constants& c, double tol) {
    verify_report rep;
    rep.closed_form = rec.energy;
    rep.oracle = oracle_energy(rec.family, rec.ell, g, c);
    rep.abs_diff = std::abs(rep.closed_form - rep.oracle);
    rep.pass = rep.abs_diff < tol;
    return rep;
}

inline verify_report verify_record(const spectral_record& rec, const radial_grid& g,
                                   const constants& c) {
    return verify_record(rec, g, c, tol_oracle_default(rec.family.kind));
}

} // namespace susyell
