#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>
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

/// One power of ell in the expansion of the barrier problem: coefficient
/// functions are stored per unit ell^k; eps and dw stay empty (0, invalid)
/// until computed.
struct expansion_order {
    int k = 1;
    radial_function v;
    double eps = 0.0;
    radial_function dw;
};

struct order_expansion {
    std::vector<expansion_order> orders;

    /// Sum of ell^k V_k(r); equals the full barrier ell(ell+1) f(r).
    double reconstruct_barrier(int ell, double r) const {
        double sum = 0.0;
        for (const auto& o : orders) sum += std::pow(static_cast<double>(ell), o.k) * o.v(r);
        return sum;
    }
};

/// The barrier ell(ell+1) f(r) split into powers of ell: V1 = V2 = f, nothing
/// beyond (the barrier is exactly quadratic in ell).
inline order_expansion expand_barrier(const potential_family& fam, const constants& c) {
    auto f = radial_function::closed_form([fam, c](double r) { return barrier_shape(fam, r, c); });
    order_expansion ex;
    ex.orders.push_back({1, f, 0.0, {}});
    ex.orders.push_back({2, f, 0.0, {}});
    return ex;
}

namespace detail {

/// Quadratic extrapolation of the first three node values, integrated over
/// [0, r_min]; the boundary estimate when the integrand has no closed form.
inline double strip_extrapolated(double f1, double f2, double f3, double h) {
    return h * (23.0 * f1 - 16.0 * f2 + 5.0 * f3) / 12.0;
}

/// chi0^2-weighted data of one expansion integrand, with the [0, r_min] strip
/// carried separately for both the weight and the weighted factor. weight_fn
/// and factor_fn are kept when the inputs have closed forms so the [r_max,
/// inf) remainder can be integrated directly.
struct expectation_table {
    std::vector<double> c0sq, fnode;
    double den_grid = 0.0, den_strip = 0.0;
    double num_grid = 0.0, num_strip = 0.0;
    int peak = 0;
    std::function<double(double)> weight_fn, factor_fn;
    double den() const { return den_grid + den_strip; }
    double num() const { return num_grid + num_strip; }
};

inline expectation_table build_expectation(const radial_function& chi0,
                                           const std::function<double(double)>& factor,
                                           const std::function<double(double)>& factor_closed,
                                           const radial_grid& g) {
    const int n = g.n_points();
    const double h = g.r_min();
    expectation_table t;
    t.c0sq.resize(n);
    t.fnode.resize(n);
    std::vector<double> num(n);
    for (int i = 0; i < n; ++i) {
        const double r = g.r(i);
        const double c0 = chi0(r);
        t.c0sq[i] = c0 * c0;
        t.fnode[i] = factor(r);
        num[i] = t.c0sq[i] * t.fnode[i];
        if (t.c0sq[i] > t.c0sq[t.peak]) t.peak = i;
    }
    t.den_grid = quadrature(t.c0sq, g);
    t.num_grid = quadrature(num, g);
    if (!chi0.is_sampled()) {
        t.weight_fn = [chi0](double z) {
            const double v = chi0(z);
            return v * v;
        };
        t.factor_fn = factor_closed;
        t.den_strip = adaptive_simpson(t.weight_fn, 1e-12, h, 1e-14);
        if (factor_closed)
            t.num_strip = adaptive_simpson(
                [&](double z) { return t.weight_fn(z) * factor_closed(z); }, 1e-12, h, 1e-13);
        else
            t.num_strip = strip_extrapolated(num[0], num[1], num[2], h);
    } else {
        // chi0 ~ c*r below the first node
        const double c = chi0.values()[0] / h;
        t.den_strip = c * c * h * h * h / 3.0;
        t.num_strip = strip_extrapolated(num[0], num[1], num[2], h);
    }
    return t;
}

/// Remainder of int c0sq * (eps - factor) over [r_max, inf). The backward
/// cumulative stops at the box edge, but within a decay length of r_max the
/// true integral to infinity is what 1/chi0^2 amplifies; the difference must
/// come from outside the grid. Closed-form inputs are integrated directly in
/// chunks of a few decay lengths; a sampled factor is extended linearly from
/// its last two nodes; a sampled weight falls back to an exponential model of
/// the last integrand values.
inline double tail_remainder(const expectation_table& t, double eps, const radial_grid& g) {
    const int n = g.n_points();
    const double h = g.h();
    if (t.weight_fn) {
        std::function<double(double)> factor;
        if (t.factor_fn) {
            factor = t.factor_fn;
        } else {
            const double f_last = t.fnode[n - 1];
            const double slope = (t.fnode[n - 1] - t.fnode[n - 2]) / h;
            const double edge = g.r_max();
            factor = [f_last, slope, edge](double z) { return f_last + slope * (z - edge); };
        }
        auto f = [&](double z) { return t.weight_fn(z) * (eps - factor(z)); };
        // chunk width from the weight's decay rate at the edge
        double width = 0.25 * (g.r_max() - g.r_min());
        if (t.c0sq[n - 1] > 0.0 && t.c0sq[n - 3] > t.c0sq[n - 1]) {
            const double rate = std::log(t.c0sq[n - 3] / t.c0sq[n - 1]) / (2.0 * h);
            width = std::clamp(4.0 / rate, 4.0 * h, width);
        }
        double total = 0.0, a = g.r_max();
        for (int k = 0; k < 80; ++k) {
            const double b = a + width;
            const double scale =
                (std::abs(f(a)) + std::abs(f(0.5 * (a + b))) + std::abs(f(b))) * width;
            if (scale == 0.0) break;
            const double chunk = adaptive_simpson(f, a, b, 1e-13 * scale + 1e-300);
            total += chunk;
            if (std::abs(chunk) <= 1e-13 * std::abs(total) + 1e-300) break;
            a = b;
        }
        return total;
    }
    // exponential model of the last integrand values
    const double g1 = t.c0sq[n - 1] * (eps - t.fnode[n - 1]);
    const double g3 = t.c0sq[n - 3] * (eps - t.fnode[n - 3]);
    if (g1 == 0.0 || g3 * g1 <= 0.0 || std::abs(g3) <= std::abs(g1)) return 0.0;
    const double rate = std::log(g3 / g1) / (2.0 * h);
    return g1 / rate;
}

inline void require_contained(const expectation_table& t, const radial_grid& g) {
    const int n = g.n_points();
    const double tail = t.c0sq[n - 1] * (1.0 + std::abs(t.fnode[n - 1])) / t.den();
    if (tail > 1e-10)
        throw truncation_error("perturbation: integrand weight at r_max exceeds 1e-10 of the "
                               "norm; enlarge the grid");
}

/// dW = int_0^r c0sq * (eps - fnode) / (kappa * c0sq), with the cumulative run
/// forward up to the weight peak and backward from r_max past it; the
/// backward branch keeps the quadrature error proportional to the local
/// weight instead of amplifying a fixed error by 1/chi0^2. Closed-form inputs
/// are integrated panel by panel adaptively, which holds the error near the
/// local integrand scale even where 1/chi0^2 amplification is severe (first
/// nodes, last decay length); sampled inputs use the node stencils.
inline superpotential ratio_superpotential(const expectation_table& t, double eps,
                                           const radial_grid& g, const constants& c) {
    const int n = g.n_points();
    std::vector<double> gvec(n);
    for (int i = 0; i < n; ++i) gvec[i] = t.c0sq[i] * (eps - t.fnode[i]);
    const double strip = eps * t.den_strip - t.num_strip;
    const double tail = tail_remainder(t, eps, g);
    std::vector<double> r_at(n);
    if (t.weight_fn && t.factor_fn) {
        auto gfun = [&](double z) { return t.weight_fn(z) * (eps - t.factor_fn(z)); };
        auto ptol = [&](int i) {
            return 1e-14 * g.h() * (std::abs(gvec[i]) + std::abs(gvec[i + 1])) + 1e-300;
        };
        r_at[0] = strip;
        for (int i = 1; i <= t.peak; ++i)
            r_at[i] = r_at[i - 1] + adaptive_simpson(gfun, g.r(i - 1), g.r(i), ptol(i - 1));
        double behind = tail;
        r_at[n - 1] = -behind;
        for (int i = n - 2; i > t.peak; --i) {
            behind += adaptive_simpson(gfun, g.r(i), g.r(i + 1), ptol(i));
            r_at[i] = -behind;
        }
    } else {
        const std::vector<double> fwd = cumulative_simpson(gvec, g);
        const std::vector<double> bwd = cumulative_simpson_backward(gvec, g);
        for (int i = 0; i < n; ++i) r_at[i] = i <= t.peak ? strip + fwd[i] : -(bwd[i] + tail);
    }
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i)
        w[i] = t.c0sq[i] > 0.0 ? r_at[i] / (c.kappa * t.c0sq[i]) : 0.0;
    return make_superpotential_sampled(g, std::move(w), superpotential_source::perturbation_series);
}

inline std::function<double(double)> closed_or_null(const radial_function& f) {
    if (!f.valid() || f.is_sampled()) return nullptr;
    return [f](double z) { return f(z); };
}

inline std::function<double(double)> closed_second_order_factor(const radial_function& v2,
                                                                const superpotential& dw1) {
    if (!v2.valid() || v2.is_sampled() || !dw1.value.valid() || dw1.value.is_sampled())
        return nullptr;
    radial_function d = dw1.value;
    return [v2, d](double z) {
        const double w = d(z);
        return v2(z) - w * w;
    };
}

} // namespace detail

/// eps1 = N^2 int chi0^2 V1: the first-order energy coefficient.
inline double first_order_energy(const radial_function& chi0, const radial_function& v1,
                                 const radial_grid& g) {
    auto t = detail::build_expectation(
        chi0, [&v1](double r) { return v1(r); }, detail::closed_or_null(v1), g);
    detail::require_contained(t, g);
    return t.num() / t.den();
}

/// dW1(r) = (1/kappa) chi0^-2 int_0^r chi0^2 (eps1 - V1). eps1 must agree with
/// first_order_energy on this grid, else the cumulative picks up the growing
/// 1/chi0^2 mode.
inline superpotential first_order_superpotential(const radial_function& chi0,
                                                 const radial_function& v1, double eps1,
                                                 const radial_grid& g, const constants& c) {
    auto t = detail::build_expectation(
        chi0, [&v1](double r) { return v1(r); }, detail::closed_or_null(v1), g);
    detail::require_contained(t, g);
    const double self = t.num() / t.den();
    if (std::abs(eps1 - self) > 1e-6 * std::max(1.0, std::abs(self)))
        throw inconsistent_eps1("first_order_superpotential: eps1 disagrees with the grid value "
                                "of the first-order energy");
    return detail::ratio_superpotential(t, eps1, g, c);
}

/// eps2 = N^2 int chi0^2 (V2 - dW1^2): the second-order energy coefficient.
inline double second_order_energy(const radial_function& chi0, const radial_function& v2,
                                  const superpotential& dw1, const radial_grid& g) {
    auto factor = [&](double r) {
        const double d = dw1.value(r);
        return v2(r) - d * d;
    };
    auto t = detail::build_expectation(chi0, factor, detail::closed_second_order_factor(v2, dw1), g);
    detail::require_contained(t, g);
    return t.num() / t.den();
}

/// dW2(r) = (1/kappa) chi0^-2 int_0^r chi0^2 (eps2 + dW1^2 - V2).
inline superpotential second_order_superpotential(const radial_function& chi0,
                                                  const radial_function& v2,
                                                  const superpotential& dw1, double eps2,
                                                  const radial_grid& g, const constants& c) {
    auto factor = [&](double r) {
        const double d = dw1.value(r);
        return v2(r) - d * d;
    };
    auto t = detail::build_expectation(chi0, factor, detail::closed_second_order_factor(v2, dw1), g);
    detail::require_contained(t, g);
    const double self = t.num() / t.den();
    if (std::abs(eps2 - self) > 1e-6 * std::max(1.0, std::abs(self)))
        throw inconsistent_eps1("second_order_superpotential: eps2 disagrees with the grid value "
                                "of the second-order energy");
    return detail::ratio_superpotential(t, eps2, g, c);
}

/// Expand the family barrier and fill in both orders' energies and
/// superpotential coefficients on the given grid.
inline order_expansion run_expansion(const potential_family& fam, const radial_grid& g,
                                     const constants& c) {
    order_expansion ex = expand_barrier(fam, c);
    const radial_function chi0 = ground_solution(fam, c).chi0;
    expansion_order& o1 = ex.orders[0];
    expansion_order& o2 = ex.orders[1];
    o1.eps = first_order_energy(chi0, o1.v, g);
    const superpotential dw1 = first_order_superpotential(chi0, o1.v, o1.eps, g, c);
    o1.dw = dw1.value;
    o2.eps = second_order_energy(chi0, o2.v, dw1, g);
    o2.dw = second_order_superpotential(chi0, o2.v, dw1, o2.eps, g, c).value;
    return ex;
}

} // namespace susyell
