#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "catalog.hpp"
#include "constants.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "potential.hpp"
#include "quadrature.hpp"
#include "radial_function.hpp"
#include "superpotential.hpp"

namespace susyell {

/// Data of the correction equation: kappa dW' = dW^2 + 2 W0 dW + delta_eps - delta_v.
struct riccati_problem {
    superpotential w0;
    radial_function delta_v;
    double delta_eps = 0.0;
};

/// The correction problem whose solution is the barrier superpotential.
inline riccati_problem barrier_problem(const potential_family& fam, int ell, const constants& c) {
    return {ground_solution(fam, c).w0, barrier_fn(fam, ell, c), energy_correction(fam, ell, c)};
}

/// Max interior |dW' - (1/kappa)(dW^2 + 2 W0 dW + delta_eps - delta_v)|.
inline double residual_A1(const superpotential& dw, const riccati_problem& prob,
                          const radial_grid& g, const constants& c) {
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n_points(); ++i) {
        const double r = g.r(i);
        const double dv = dw.value(r);
        const double rhs =
            (dv * dv + 2.0 * prob.w0.value(r) * dv + prob.delta_eps - prob.delta_v(r)) / c.kappa;
        worst = std::max(worst, std::abs(dw.derivative(r) - rhs));
    }
    return worst;
}

namespace detail {

inline double clamped_exp(double x) { return std::exp(std::clamp(x, -700.0, 700.0)); }

/// Node data of the one-parameter solution family built on a special solution:
/// s, s', W0, log mu with mu = exp((2/kappa) int_{r_ref}^{r} (W0 + s)), and the
/// denominator D = c + int_{r_ref}^{r} mu.
struct riccati_tableau {
    std::vector<double> s, sp, w0v, logmu, denom;
};

inline riccati_tableau build_tableau(const superpotential& dw_sp, const superpotential& w0,
                                     const radial_grid& g, double c, const constants& cst) {
    const int n = g.n_points();
    const double r_ref = std::clamp(1.0, g.r_min(), g.r_max());
    auto f = [&](double z) { return 2.0 * (w0.value(z) + dw_sp.value(z)) / cst.kappa; };
    auto panel = [&](double a, double b) {
        const double est = (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
        return adaptive_simpson(f, a, b, 1e-13 + 1e-12 * std::abs(est));
    };

    // log mu cumulative, with half-panel resolution for the mu quadrature below
    std::vector<double> big(n, 0.0), mid(n - 1, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double a = g.r(i), b = g.r(i + 1), m = 0.5 * (a + b);
        mid[i] = big[i] + panel(a, m);
        big[i + 1] = mid[i] + panel(m, b);
    }
    int j = std::clamp(static_cast<int>((r_ref - g.r_min()) / g.h()), 0, n - 1);
    double lref = big[j];
    if (r_ref > g.r(j)) lref += panel(g.r(j), r_ref);

    riccati_tableau t;
    t.s.resize(n);
    t.sp.resize(n);
    t.w0v.resize(n);
    t.logmu.resize(n);
    t.denom.resize(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.r(i);
        t.s[i] = dw_sp.value(r);
        t.sp[i] = dw_sp.derivative(r);
        t.w0v[i] = w0.value(r);
        t.logmu[i] = big[i] - lref;
    }

    // int mu by Simpson on each panel, using the true half-panel value of log mu
    std::vector<double> cum(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) {
        const double w = g.r(i + 1) - g.r(i);
        cum[i + 1] = cum[i] + w / 6.0 *
                                  (clamped_exp(t.logmu[i]) + 4.0 * clamped_exp(mid[i] - lref) +
                                   clamped_exp(t.logmu[i + 1]));
    }
    // partial panel from the anchor node to r_ref itself
    double iref = cum[j];
    if (r_ref > g.r(j)) {
        const double lj = big[j];
        auto mu_partial = [&](double z) {
            return clamped_exp(lj + panel(g.r(j), z) - lref);
        };
        iref += adaptive_simpson(mu_partial, g.r(j), r_ref, 1e-12);
    }
    for (int i = 0; i < n; ++i) t.denom[i] = c + (cum[i] - iref);
    return t;
}

inline superpotential assemble_family_member(const riccati_tableau& t, const radial_grid& g,
                                             const constants& cst, bool log_form) {
    const int n = g.n_points();
    std::vector<double> val(n), der(n);
    for (int i = 0; i < n; ++i) {
        double q;
        if (log_form) {
            const double d = t.denom[i];
            q = (d > 0.0 ? 1.0 : -1.0) * clamped_exp(t.logmu[i] - std::log(std::abs(d)));
        } else {
            q = clamped_exp(t.logmu[i]) / t.denom[i];
        }
        val[i] = t.s[i] - cst.kappa * q;
        der[i] = t.sp[i] - q * (2.0 * (t.w0v[i] + t.s[i]) - cst.kappa * q);
        if (!std::isfinite(val[i]) || !std::isfinite(der[i]))
            throw singular_solution("general_solution: denominator vanishes at a grid node");
    }
    return {radial_function::sampled(g, std::move(val)), radial_function::sampled(g, std::move(der)),
            superpotential_source::riccati_general};
}

} // namespace detail

/// Member of the one-parameter solution family through the special solution
/// dW_sp: dW = dW_sp - kappa * mu / (c + int_{r_ref}^{r} mu), where
/// mu = exp((2/kappa) int_{r_ref}^{r} (W0 + dW_sp)) and r_ref = 1. The
/// derivative is assembled from the same quotient analytically, never by
/// differencing. c = +infinity returns the special solution itself.
inline superpotential general_solution(const superpotential& dw_sp, const superpotential& w0,
                                       const radial_grid& g, double c, const constants& cst) {
    if (std::isinf(c))
        return {dw_sp.value, dw_sp.derivative, superpotential_source::riccati_general};
    if (c == 0.0)
        throw std::invalid_argument("general_solution: c must be nonzero (c = 0 pins the pole "
                                    "to the anchor point)");
    return detail::assemble_family_member(detail::build_tableau(dw_sp, w0, g, c, cst), g, cst,
                                          false);
}

/// Same family member evaluated through the log-derivative arrangement
/// dW = dW_sp - kappa * sgn(D) * exp(log mu - log |D|); cross-check partner of
/// general_solution.
inline superpotential general_solution_log_form(const superpotential& dw_sp,
                                                const superpotential& w0, const radial_grid& g,
                                                double c, const constants& cst) {
    if (std::isinf(c))
        return {dw_sp.value, dw_sp.derivative, superpotential_source::riccati_general};
    if (c == 0.0)
        throw std::invalid_argument("general_solution_log_form: c must be nonzero");
    return detail::assemble_family_member(detail::build_tableau(dw_sp, w0, g, c, cst), g, cst,
                                          true);
}

} // namespace susyell
