#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "constants.hpp"
#include "radial_function.hpp"

namespace susyell {

enum class family_kind {
    harmonic_oscillator,
    coulomb,
    hulthen,
    greene_aldrich_effective,
};

/// alpha * e^{-alpha r} / (1 - e^{-alpha r}), stable for small alpha*r.
inline double screened_u(double alpha, double r) { return alpha / std::expm1(alpha * r); }

/// A potential family and its parameters: w is the oscillator frequency, e2
/// the Coulomb strength, alpha the screening rate of the exponential families.
/// Unused parameters keep their defaults and are ignored.
struct potential_family {
    family_kind kind = family_kind::harmonic_oscillator;
    double w = 1.0;
    double e2 = 1.0;
    double alpha = 1.0;

    static potential_family harmonic(double w) {
        if (!(w > 0.0)) throw std::invalid_argument("potential_family: w must be positive");
        return {family_kind::harmonic_oscillator, w, 1.0, 1.0};
    }
    static potential_family coulomb(double e2) {
        if (!(e2 > 0.0)) throw std::invalid_argument("potential_family: e2 must be positive");
        return {family_kind::coulomb, 1.0, e2, 1.0};
    }
    static potential_family hulthen(double alpha, double e2) {
        if (!(alpha > 0.0) || !(e2 > 0.0))
            throw std::invalid_argument("potential_family: alpha and e2 must be positive");
        return {family_kind::hulthen, 1.0, e2, alpha};
    }
    static potential_family greene_aldrich(double alpha, double e2) {
        potential_family f = hulthen(alpha, e2);
        f.kind = family_kind::greene_aldrich_effective;
        return f;
    }

    bool screened() const {
        return kind == family_kind::hulthen || kind == family_kind::greene_aldrich_effective;
    }

    /// Dimensionless screening strength alpha*hbar^2/(m*e2).
    double beta(const constants& c) const { return alpha * c.hbar * c.hbar / (c.mass * e2); }
};

inline const char* family_name(family_kind k) {
    switch (k) {
    case family_kind::harmonic_oscillator: return "ho";
    case family_kind::coulomb: return "coulomb";
    case family_kind::hulthen: return "hulthen";
    case family_kind::greene_aldrich_effective: return "greene-aldrich";
    }
    return "?";
}

inline std::optional<family_kind> family_from_name(const std::string& s) {
    if (s == "ho") return family_kind::harmonic_oscillator;
    if (s == "coulomb") return family_kind::coulomb;
    if (s == "hulthen") return family_kind::hulthen;
    if (s == "greene-aldrich") return family_kind::greene_aldrich_effective;
    return std::nullopt;
}

/// The ell = 0 part of the potential.
inline double potential_v0(const potential_family& fam, double r, const constants& c) {
    switch (fam.kind) {
    case family_kind::harmonic_oscillator: return 0.5 * c.mass * fam.w * fam.w * r * r;
    case family_kind::coulomb: return -fam.e2 / r;
    default: return -fam.e2 * screened_u(fam.alpha, r);
    }
}

/// Coefficient of ell*(ell+1) in the barrier. The screened families use the
/// exponential barrier u*(u+alpha), which tends to 1/r^2 as alpha -> 0 and is
/// the shape their closed-form solutions are exact for.
inline double barrier_shape(const potential_family& fam, double r, const constants& c) {
    const double k2 = c.kappa * c.kappa;
    if (!fam.screened()) return k2 / (r * r);
    const double u = screened_u(fam.alpha, r);
    return k2 * u * (u + fam.alpha);
}

inline double barrier_term(const potential_family& fam, int ell, double r, const constants& c) {
    if (ell == 0) return 0.0;
    return static_cast<double>(ell) * (ell + 1) * barrier_shape(fam, r, c);
}

/// Full potential V = V0 + barrier. The greene_aldrich_effective tag evaluates
/// its own published arrangement; it equals the hulthen arrangement
/// identically once beta = alpha*hbar^2/(m*e2) is substituted.
inline double full_potential(const potential_family& fam, int ell, double r, const constants& c) {
    if (fam.kind == family_kind::greene_aldrich_effective) {
        const double u = screened_u(fam.alpha, r);
        const double ll1 = static_cast<double>(ell) * (ell + 1);
        return c.kappa * c.kappa * ll1 * u * u - fam.e2 * u * (1.0 - 0.5 * ll1 * fam.beta(c));
    }
    return potential_v0(fam, r, c) + barrier_term(fam, ell, r, c);
}

inline radial_function full_potential_fn(const potential_family& fam, int ell,
                                         const constants& c) {
    return radial_function::closed_form(
        [fam, ell, c](double r) { return full_potential(fam, ell, r, c); });
}

inline radial_function barrier_fn(const potential_family& fam, int ell, const constants& c) {
    return radial_function::closed_form(
        [fam, ell, c](double r) { return barrier_term(fam, ell, r, c); });
}

} // namespace susyell
