#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "potential.hpp"
#include "radial_function.hpp"

namespace susyell {

enum class superpotential_source {
    closed_form_catalog,
    from_wavefunction,
    riccati_general,
    perturbation_series,
};

/// W(r) together with W'(r). The derivative travels with the function because
/// every identity below consumes both, and because the accuracy of W' depends
/// on where W came from (analytic for catalog entries, differenced otherwise).
struct superpotential {
    radial_function value;
    radial_function derivative;
    superpotential_source source = superpotential_source::closed_form_catalog;
};

inline superpotential make_superpotential(std::function<double(double)> w,
                                          std::function<double(double)> wprime,
                                          superpotential_source src) {
    return {radial_function::closed_form(std::move(w)),
            radial_function::closed_form(std::move(wprime)), src};
}

inline superpotential zero_superpotential() {
    return make_superpotential([](double) { return 0.0; }, [](double) { return 0.0; },
                               superpotential_source::closed_form_catalog);
}

namespace detail {

/// Node derivatives of w via central differences of u = r*w. Differencing u
/// instead of w is exact for the A/r + B + C*r shapes every family produces
/// near the origin, where plain differences of w lose all accuracy.
inline std::vector<double> differentiate_nodes(const std::vector<double>& w,
                                               const radial_grid& g) {
    const int n = g.n_points();
    const double h = g.h();
    std::vector<double> u(n), d(n);
    for (int i = 0; i < n; ++i) u[i] = g.r(i) * w[i];
    auto back = [&](int i, double uprime) { return (uprime - w[i]) / g.r(i); };
    d[0] = back(0, (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h));
    for (int i = 1; i + 1 < n; ++i) d[i] = back(i, (u[i + 1] - u[i - 1]) / (2.0 * h));
    d[n - 1] = back(n - 1, (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * h));
    return d;
}

} // namespace detail

/// Sampled superpotential; the derivative comes from the node values.
inline superpotential make_superpotential_sampled(const radial_grid& g, std::vector<double> w,
                                                  superpotential_source src) {
    std::vector<double> d = detail::differentiate_nodes(w, g);
    return {radial_function::sampled(g, std::move(w)), radial_function::sampled(g, std::move(d)),
            src};
}

/// W = -kappa * chi'/chi for a nodeless chi. A sampled chi is checked for
/// positivity up front; a closed form is checked at each evaluation.
inline superpotential superpotential_from_wavefunction(const radial_function& chi,
                                                       const radial_function& chi_prime,
                                                       const constants& c) {
    if (chi.is_sampled()) {
        for (double v : chi.values())
            if (!(v > 0.0))
                throw nodeful_wavefunction(
                    "superpotential_from_wavefunction: chi must be strictly positive");
    }
    const double kappa = c.kappa;
    auto w = [chi, chi_prime, kappa](double r) {
        const double cv = chi(r);
        if (!(cv > 0.0))
            throw nodeful_wavefunction(
                "superpotential_from_wavefunction: chi not positive at evaluation point");
        return -kappa * chi_prime(r) / cv;
    };
    if (chi.is_sampled()) {
        const radial_grid& g = chi.grid();
        std::vector<double> wv(g.n_points());
        for (int i = 0; i < g.n_points(); ++i) wv[i] = w(g.r(i));
        std::vector<double> dv = detail::differentiate_nodes(wv, g);
        return {radial_function::closed_form(w), radial_function::sampled(g, std::move(dv)),
                superpotential_source::from_wavefunction};
    }
    auto wprime = [w](double r) {
        double delta = 2.0e-5 * std::max(1.0, r);
        if (delta > 0.5 * r) delta = 0.5 * r;
        const double up = (r + delta) * w(r + delta);
        const double um = (r - delta) * w(r - delta);
        return ((up - um) / (2.0 * delta) - w(r)) / r;
    };
    return {radial_function::closed_form(w), radial_function::closed_form(wprime),
            superpotential_source::from_wavefunction};
}

/// Ground identity: W^2 - kappa W' = V0 - eps. Max |residual| over interior
/// nodes r in [r_min + h, r_max - h].
inline double riccati_residual_eq5(const superpotential& w, const radial_function& v0, double eps,
                                   const radial_grid& g, const constants& c) {
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n_points(); ++i) {
        const double r = g.r(i);
        const double wv = w.value(r);
        const double res = wv * wv - c.kappa * w.derivative(r) - (v0(r) - eps);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

/// Barrier identity: dW^2 - kappa dW' + 2 W dW = barrier - delta_eps.
inline double riccati_residual_eq6(const superpotential& w0, const superpotential& dw,
                                   const radial_function& barrier, double delta_eps,
                                   const radial_grid& g, const constants& c) {
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n_points(); ++i) {
        const double r = g.r(i);
        const double dv = dw.value(r);
        const double res = dv * dv - c.kappa * dw.derivative(r) + 2.0 * w0.value(r) * dv -
                           (barrier(r) - delta_eps);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

inline double riccati_residual_eq6(const superpotential& w0, const superpotential& dw,
                                   const potential_family& fam, int ell, double delta_eps,
                                   const radial_grid& g, const constants& c) {
    return riccati_residual_eq6(w0, dw, barrier_fn(fam, ell, c), delta_eps, g, c);
}

/// Full identity: (W + dW)^2 - kappa (W + dW)' = V - E.
inline double riccati_residual_eq7(const superpotential& w0, const superpotential& dw,
                                   const radial_function& v_full, double energy,
                                   const radial_grid& g, const constants& c) {
    double worst = 0.0;
    for (int i = 1; i + 1 < g.n_points(); ++i) {
        const double r = g.r(i);
        const double s = w0.value(r) + dw.value(r);
        const double sp = w0.derivative(r) + dw.derivative(r);
        const double res = s * s - c.kappa * sp - (v_full(r) - energy);
        worst = std::max(worst, std::abs(res));
    }
    return worst;
}

} // namespace susyell
