#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "constants.hpp"
#include "grid.hpp"
#include "potential.hpp"

namespace susyell {

/// Symmetric tridiagonal discretization of the radial Hamiltonian. Unknowns
/// sit at grid nodes r_0 .. r_{n-2}; the wavefunction vanishes at r = 0 (the
/// node before r_0) and at r = r_max (the last grid node is the Dirichlet
/// wall), so the matrix order is n_points - 1.
struct discrete_hamiltonian {
    radial_grid grid{1.0, 3};
    std::vector<double> diagonal;
    double off_diagonal = 0.0;
};

inline discrete_hamiltonian build_hamiltonian(const potential_family& fam, int ell,
                                              const radial_grid& g, const constants& c) {
    if (ell < 0) throw std::invalid_argument("build_hamiltonian: ell must be >= 0");
    const double h = g.h();
    const double t = c.hbar * c.hbar / (c.mass * h * h);
    discrete_hamiltonian ham{g, {}, -0.5 * t};
    const int m = g.n_points() - 1;
    ham.diagonal.resize(m);
    for (int i = 0; i < m; ++i) ham.diagonal[i] = t + full_potential(fam, ell, g.r(i), c);
    return ham;
}

namespace detail {

/// Sturm count of eigenvalues below x, from the signs of the shifted LDL^T
/// pivots. A vanishing pivot is pushed to -pivmin and counted as negative, so
/// an exact tie counts as below and bisection converges from either side.
inline int count_below(const std::vector<double>& diag, double b2, double x) {
    constexpr double pivmin = 1e-290;
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < diag.size(); ++i) {
        q = diag[i] - x - (i ? b2 / q : 0.0);
        if (std::abs(q) < pivmin) q = -pivmin;
        if (q < 0.0) ++count;
    }
    return count;
}

} // namespace detail

/// k smallest eigenvalues, ascending, by Sturm-sequence bisection; each
/// converged to 1e-10 absolute (discretization error of the matrix itself is
/// separate and O(h^2)).
inline std::vector<double> lowest_eigenvalues(const discrete_hamiltonian& ham, int k) {
    const int m = static_cast<int>(ham.diagonal.size());
    if (k < 1 || k > m) throw std::invalid_argument("lowest_eigenvalues: k out of range");
    const double b = ham.off_diagonal;
    const double b2 = b * b;
    double lo = ham.diagonal[0], hi = ham.diagonal[0];
    for (double d : ham.diagonal) {
        lo = std::min(lo, d - 2.0 * std::abs(b));
        hi = std::max(hi, d + 2.0 * std::abs(b));
    }
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) {
        double a = lo, z = hi;
        for (int iter = 0; iter < 200 && z - a > 1e-10; ++iter) {
            const double mid = 0.5 * (a + z);
            if (detail::count_below(ham.diagonal, b2, mid) >= j + 1)
                z = mid;
            else
                a = mid;
        }
        out[j] = 0.5 * (a + z);
    }
    return out;
}

/// Eigenvector for a converged eigenvalue, by inverse iteration with the
/// pivot-floored Thomas solve. Normalized to unit Euclidean length with its
/// largest component positive.
inline std::vector<double> lowest_eigenvector(const discrete_hamiltonian& ham, double eigenvalue) {
    const int m = static_cast<int>(ham.diagonal.size());
    if (m < 1) throw std::invalid_argument("lowest_eigenvector: empty matrix");
    const double b = ham.off_diagonal;
    double scale = 2.0 * std::abs(b);
    for (double d : ham.diagonal) scale = std::max(scale, std::abs(d - eigenvalue));
    const double floor = std::max(scale, 1.0) * 1e-14;

    std::vector<double> x(m, 1.0 / std::sqrt(static_cast<double>(m)));
    std::vector<double> cp(m), y(m);
    for (int iter = 0; iter < 3; ++iter) {
        double denom = ham.diagonal[0] - eigenvalue;
        if (std::abs(denom) < floor) denom = std::copysign(floor, denom == 0.0 ? 1.0 : denom);
        cp[0] = b / denom;
        y[0] = x[0] / denom;
        for (int i = 1; i < m; ++i) {
            denom = ham.diagonal[i] - eigenvalue - b * cp[i - 1];
            if (std::abs(denom) < floor) denom = std::copysign(floor, denom == 0.0 ? 1.0 : denom);
            cp[i] = b / denom;
            y[i] = (x[i] - b * y[i - 1]) / denom;
        }
        for (int i = m - 2; i >= 0; --i) y[i] -= cp[i] * y[i + 1];
        double norm = 0.0;
        for (double v : y) norm += v * v;
        norm = std::sqrt(norm);
        for (int i = 0; i < m; ++i) x[i] = y[i] / norm;
    }
    int imax = 0;
    for (int i = 1; i < m; ++i)
        if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
    if (x[imax] < 0.0)
        for (double& v : x) v = -v;
    return x;
}

} // namespace susyell
