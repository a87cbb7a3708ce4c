#pragma once

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "radial_function.hpp"
#include "superpotential.hpp"

namespace susyell {

/// Ground (lowest, nodeless) solution of a family at ell = 0: superpotential,
/// unnormalized reduced wavefunction, and its energy.
struct family_ground_solution {
    potential_family family;
    superpotential w0;
    radial_function chi0;
    double eps0 = 0.0;
};

namespace detail {

/// m e2^2 / (2 hbar^2): the natural energy unit of the 1/r families.
inline double coulomb_energy_scale(const potential_family& fam, const constants& c) {
    return 0.5 * c.mass * fam.e2 * fam.e2 / (c.hbar * c.hbar);
}

/// 1/(l+1) - (l+1) beta / 2: the screened families quantize on this factor.
inline double screened_level_factor(int ell, double beta) {
    const double lp = ell + 1.0;
    return 1.0 / lp - 0.5 * lp * beta;
}

inline void require_screened_bound(const potential_family& fam, int ell, const constants& c) {
    const double lp = ell + 1.0;
    if (!(fam.beta(c) * lp * lp < 2.0))
        throw no_bound_state("screened family: no bound level at this ell (screening too strong)");
}

} // namespace detail

inline family_ground_solution ground_solution(const potential_family& fam, const constants& c) {
    const double kappa = c.kappa;
    switch (fam.kind) {
    case family_kind::harmonic_oscillator: {
        const double slope = c.mass * kappa * fam.w / c.hbar;
        const double decay = 0.5 * c.mass * fam.w / c.hbar;
        return {fam,
                make_superpotential([slope, kappa](double r) { return slope * r - kappa / r; },
                                    [slope, kappa](double r) { return slope + kappa / (r * r); },
                                    superpotential_source::closed_form_catalog),
                radial_function::closed_form(
                    [decay](double r) { return r * std::exp(-decay * r * r); }),
                1.5 * c.hbar * fam.w};
    }
    case family_kind::coulomb: {
        const double decay = c.mass * fam.e2 / (c.hbar * c.hbar);
        const double plateau = kappa * decay;
        return {fam,
                make_superpotential([plateau, kappa](double r) { return plateau - kappa / r; },
                                    [kappa](double r) { return kappa / (r * r); },
                                    superpotential_source::closed_form_catalog),
                radial_function::closed_form([decay](double r) { return r * std::exp(-decay * r); }),
                -detail::coulomb_energy_scale(fam, c)};
    }
    case family_kind::hulthen:
    case family_kind::greene_aldrich_effective: {
        detail::require_screened_bound(fam, 0, c);
        const double beta = fam.beta(c);
        const double alpha = fam.alpha;
        const double g0 = detail::screened_level_factor(0, beta);
        const double decay = c.mass * fam.e2 / (c.hbar * c.hbar) * g0;
        const double plateau = kappa * decay;
        return {fam,
                make_superpotential(
                    [plateau, kappa, alpha](double r) {
                        return plateau - kappa * screened_u(alpha, r);
                    },
                    [kappa, alpha](double r) {
                        const double u = screened_u(alpha, r);
                        return kappa * u * (u + alpha);
                    },
                    superpotential_source::closed_form_catalog),
                radial_function::closed_form([decay, alpha](double r) {
                    return -std::expm1(-alpha * r) * std::exp(-decay * r);
                }),
                -detail::coulomb_energy_scale(fam, c) * g0 * g0};
    }
    }
    throw std::logic_error("ground_solution: unreachable");
}

/// Superpotential correction dW that carries the barrier for angular momentum
/// ell on top of the family ground superpotential. ell = 0 gives zero.
inline superpotential barrier_superpotential(const potential_family& fam, int ell,
                                             const constants& c) {
    if (ell < 0) throw std::invalid_argument("barrier_superpotential: ell must be non-negative");
    if (fam.screened()) detail::require_screened_bound(fam, ell, c);
    if (ell == 0) return zero_superpotential();
    const double kappa = c.kappa;
    const double l = ell;
    switch (fam.kind) {
    case family_kind::harmonic_oscillator:
        return make_superpotential([l, kappa](double r) { return -l * kappa / r; },
                                   [l, kappa](double r) { return l * kappa / (r * r); },
                                   superpotential_source::closed_form_catalog);
    case family_kind::coulomb: {
        const double shift = c.mass * kappa * fam.e2 / (c.hbar * c.hbar) * l / (l + 1.0);
        return make_superpotential(
            [l, kappa, shift](double r) { return -l * kappa / r - shift; },
            [l, kappa](double r) { return l * kappa / (r * r); },
            superpotential_source::closed_form_catalog);
    }
    case family_kind::hulthen:
    case family_kind::greene_aldrich_effective: {
        const double beta = fam.beta(c);
        const double alpha = fam.alpha;
        const double shift =
            c.mass * kappa * fam.e2 / (c.hbar * c.hbar) * l * (1.0 / (l + 1.0) + 0.5 * beta);
        return make_superpotential(
            [l, kappa, shift, alpha](double r) {
                return -shift - l * kappa * screened_u(alpha, r);
            },
            [l, kappa, alpha](double r) {
                const double u = screened_u(alpha, r);
                return l * kappa * u * (u + alpha);
            },
            superpotential_source::closed_form_catalog);
    }
    }
    throw std::logic_error("barrier_superpotential: unreachable");
}

/// Energy shift delta_eps of the lowest ell-wave level relative to eps0.
inline double energy_correction(const potential_family& fam, int ell, const constants& c) {
    if (ell < 0) throw std::invalid_argument("energy_correction: ell must be non-negative");
    switch (fam.kind) {
    case family_kind::harmonic_oscillator:
        return ell * c.hbar * fam.w;
    case family_kind::coulomb: {
        const double lp = ell + 1.0;
        return -detail::coulomb_energy_scale(fam, c) * (1.0 / (lp * lp) - 1.0);
    }
    case family_kind::hulthen:
    case family_kind::greene_aldrich_effective: {
        detail::require_screened_bound(fam, ell, c);
        const double beta = fam.beta(c);
        const double g0 = detail::screened_level_factor(0, beta);
        const double gl = detail::screened_level_factor(ell, beta);
        return detail::coulomb_energy_scale(fam, c) * (g0 * g0 - gl * gl);
    }
    }
    throw std::logic_error("energy_correction: unreachable");
}

/// phi(r) = exp(-(1/kappa) * integral_{r_ref}^{r} dW), sampled on the grid.
/// Each panel is integrated adaptively: dW typically has an A/r piece whose
/// fixed-stencil quadrature error near r_min would be O(1), not O(h^4).
inline radial_function moderating_function(const superpotential& dw, const radial_grid& g,
                                           double r_ref, const constants& c) {
    if (!(r_ref >= g.r_min() && r_ref <= g.r_max()))
        throw std::invalid_argument("moderating_function: r_ref outside grid");
    const int n = g.n_points();
    auto f = [&dw](double r) { return dw.value(r); };
    std::vector<double> cum(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double a = g.r(i), b = g.r(i + 1);
        const double est = (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        cum[i + 1] = cum[i] + adaptive_simpson(f, a, b, 1e-13 + 1e-12 * std::abs(est));
    }
    int j = static_cast<int>((r_ref - g.r_min()) / g.h());
    j = std::clamp(j, 0, n - 1);
    double cref = cum[j];
    if (r_ref > g.r(j)) cref += adaptive_simpson(f, g.r(j), r_ref, 1e-13);
    std::vector<double> phi(n);
    for (int i = 0; i < n; ++i) {
        const double e = std::clamp(-(cum[i] - cref) / c.kappa, -700.0, 700.0);
        phi[i] = std::exp(e);
    }
    return radial_function::sampled(g, std::move(phi));
}

/// One solved bound state: energies, normalized wavefunction factors, and the
/// identity residuals measured on the solve grid.
struct spectral_record {
    potential_family family;
    int ell = 0;
    double eps0 = 0.0;
    double delta_eps = 0.0;
    double energy = 0.0;
    radial_function chi;
    radial_function phi;
    radial_function psi;
    double norm_constant = 1.0;
    double residual_eq6_max = 0.0;
    double residual_eq7_max = 0.0;
    radial_grid grid{1.0, 3};
};

/// Solve the lowest ell-wave state of a family on a grid. psi = chi * phi
/// holds node-by-node as a literal product of the stored factors, and
/// quadrature(psi^2) = 1.
inline spectral_record solve_state(const potential_family& fam, int ell, const radial_grid& g,
                                   const constants& c) {
    family_ground_solution ground = ground_solution(fam, c);
    superpotential dw = barrier_superpotential(fam, ell, c);
    const double de = energy_correction(fam, ell, c);
    const double r_ref = std::clamp(1.0, g.r_min(), g.r_max());
    radial_function phi_raw = moderating_function(dw, g, r_ref, c);

    const int n = g.n_points();
    std::vector<double> chi_raw(n), psi_raw(n);
    for (int i = 0; i < n; ++i) {
        chi_raw[i] = ground.chi0(g.r(i));
        psi_raw[i] = chi_raw[i] * phi_raw.values()[i];
    }
    auto squares = [](const std::vector<double>& v) {
        std::vector<double> s(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) s[i] = v[i] * v[i];
        return s;
    };
    const double chi_norm2 = quadrature(squares(chi_raw), g);
    const double psi_norm2 = quadrature(squares(psi_raw), g);
    if (!(chi_norm2 > 0.0) || !(psi_norm2 > 0.0))
        throw no_bound_state("solve_state: wavefunction has zero norm on this grid");
    // Fraction of the norm sitting in the last grid cell; dimensionless, so one
    // threshold serves every box size. 1e-12 keeps the warning quiet for boxes
    // whose truncation error is far below the energy tolerances.
    const double tail = psi_raw[n - 1] * psi_raw[n - 1] * g.h() / psi_norm2;
    if (tail > 1e-12)
        std::cerr << "susyell: warning: " << tail
                  << " of the wavefunction norm sits in the last grid cell;"
                  << " enlarge r_max to avoid truncation\n";

    const double n_chi = 1.0 / std::sqrt(chi_norm2);
    const double n_psi = 1.0 / std::sqrt(psi_norm2);
    const double phi_scale = n_psi / n_chi;
    std::vector<double> chi_s(n), phi_s(n), psi_s(n);
    for (int i = 0; i < n; ++i) {
        chi_s[i] = n_chi * chi_raw[i];
        phi_s[i] = phi_scale * phi_raw.values()[i];
        psi_s[i] = chi_s[i] * phi_s[i];
    }
    // Nodeless check: negatives are nodes; an interior zero between positive
    // samples is a node; zeros past the last representable tail value are
    // underflow and benign.
    int last_positive = -1;
    for (int i = 0; i < n; ++i) {
        if (psi_s[i] < 0.0) throw nodeful_wavefunction("solve_state: psi changes sign");
        if (psi_s[i] > 0.0) last_positive = i;
    }
    if (last_positive < 0) throw no_bound_state("solve_state: psi vanishes everywhere");
    for (int i = 1; i < last_positive; ++i)
        if (psi_s[i] == 0.0) throw nodeful_wavefunction("solve_state: psi has an interior node");

    spectral_record rec;
    rec.family = fam;
    rec.ell = ell;
    rec.eps0 = ground.eps0;
    rec.delta_eps = de;
    rec.energy = ground.eps0 + de;
    rec.chi = radial_function::sampled(g, std::move(chi_s));
    rec.phi = radial_function::sampled(g, std::move(phi_s));
    rec.psi = radial_function::sampled(g, std::move(psi_s));
    rec.norm_constant = n_psi;
    rec.residual_eq6_max = riccati_residual_eq6(ground.w0, dw, fam, ell, de, g, c);
    rec.residual_eq7_max =
        riccati_residual_eq7(ground.w0, dw, full_potential_fn(fam, ell, c), rec.energy, g, c);
    rec.grid = g;
    return rec;
}

} // namespace susyell
