#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "grid.hpp"
#include "radial_function.hpp"

namespace susyell {

/// Composite Simpson on the node values over [r_min, r_max]. When the
/// interval count is odd (n_points even) the final panel falls back to the
/// trapezoid rule.
inline double quadrature(const std::vector<double>& f, const radial_grid& g) {
    if (static_cast<int>(f.size()) != g.n_points())
        throw std::invalid_argument("quadrature: sample count != grid size");
    const int last = g.n_points() - 1;
    const double h = g.h();
    const int simpson_end = (last % 2 == 0) ? last : last - 1;
    double s = 0.0;
    for (int i = 0; i + 2 <= simpson_end; i += 2)
        s += (h / 3.0) * (f[i] + 4.0 * f[i + 1] + f[i + 2]);
    if (simpson_end != last) s += 0.5 * h * (f[last - 1] + f[last]);
    return s;
}

inline double quadrature(const radial_function& f, const radial_grid& g) {
    std::vector<double> v(g.n_points());
    for (int i = 0; i < g.n_points(); ++i) v[i] = f(g.r(i));
    return quadrature(v, g);
}

/// Cumulative integral at the nodes: C[i] = integral of f from r_0 to r_i.
/// Even strides use the Simpson panel; the off-parity panels use the
/// quadratic through the three nearest nodes. Needs smooth samples.
inline std::vector<double> cumulative_simpson(const std::vector<double>& f, const radial_grid& g) {
    const int n = g.n_points();
    if (static_cast<int>(f.size()) != n)
        throw std::invalid_argument("cumulative_simpson: sample count != grid size");
    const double h = g.h();
    std::vector<double> c(n, 0.0);
    for (int i = 1; i < n; ++i) {
        if (i % 2 == 0) {
            c[i] = c[i - 2] + (h / 3.0) * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
        } else if (i + 1 < n) {
            c[i] = c[i - 1] + (h / 12.0) * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]);
        } else {
            c[i] = c[i - 1] + (h / 12.0) * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]);
        }
    }
    return c;
}

/// Cumulative integral from the right: R[i] = integral from r_i to r_max.
inline std::vector<double> cumulative_simpson_backward(const std::vector<double>& f,
                                                       const radial_grid& g) {
    const int n = g.n_points();
    std::vector<double> rev(n);
    for (int i = 0; i < n; ++i) rev[i] = f[n - 1 - i];
    std::vector<double> c = cumulative_simpson(rev, g);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = c[n - 1 - i];
    return out;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double m,
                                   double b, double fa, double fm, double fb, double whole,
                                   double abs_tol, int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * abs_tol, depth - 1) +
           adaptive_simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * abs_tol, depth - 1);
}

} // namespace detail

/// Recursive Simpson to a fixed absolute tolerance. Used for panels whose
/// integrand varies too fast for the node spacing (1/r tails and the like).
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double abs_tol, int max_depth = 48) {
    if (a == b) return 0.0;
    if (b < a) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

} // namespace susyell
