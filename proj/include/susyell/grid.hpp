#pragma once

#include <stdexcept>
#include <vector>

namespace susyell {

/// Uniform radial grid: nodes r_i = i*h for i = 1..n_points, h = r_max/n_points.
/// r = 0 is never a node; the grid is the interior of a Dirichlet box [0, r_max],
/// so the first node sits one spacing away from the wall.
class radial_grid {
public:
    radial_grid(double r_max, int n_points) {
        if (!(r_max > 0.0))
            throw std::invalid_argument("radial_grid: r_max must be positive");
        if (n_points < 3)
            throw std::invalid_argument("radial_grid: need at least 3 points");
        n_ = n_points;
        h_ = r_max / n_points;
        r_max_ = h_ * n_points;
    }

    int n_points() const { return n_; }
    double h() const { return h_; }
    double r_min() const { return h_; }
    double r_max() const { return r_max_; }

    /// Node position, 0-based index.
    double r(int i) const { return h_ * (i + 1); }

    std::vector<double> nodes() const {
        std::vector<double> v(n_);
        for (int i = 0; i < n_; ++i) v[i] = r(i);
        return v;
    }

    bool operator==(const radial_grid& o) const { return n_ == o.n_ && h_ == o.h_; }

private:
    int n_;
    double h_;
    double r_max_;
};

inline radial_grid make_grid(double r_max, int n_points) { return radial_grid(r_max, n_points); }

} // namespace susyell
