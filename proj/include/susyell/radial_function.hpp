#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace susyell {

/// Function of r > 0: either a closed form or node samples with linear
/// interpolation. Sampled functions refuse evaluation outside [r_min, r_max];
/// closed forms refuse r <= 0. Evaluation at a node reproduces the stored
/// sample exactly.
class radial_function {
public:
    radial_function() = default;

    static radial_function closed_form(std::function<double(double)> f) {
        radial_function rf;
        rf.fn_ = std::move(f);
        return rf;
    }

    static radial_function sampled(const radial_grid& g, std::vector<double> values) {
        if (static_cast<int>(values.size()) != g.n_points())
            throw std::invalid_argument("radial_function: sample count != grid size");
        radial_function rf;
        rf.grid_ = g;
        rf.values_ = std::make_shared<const std::vector<double>>(std::move(values));
        return rf;
    }

    /// Evaluate f at every node of g and keep the samples.
    static radial_function sample_on(const radial_grid& g, const radial_function& f) {
        std::vector<double> v(g.n_points());
        for (int i = 0; i < g.n_points(); ++i) v[i] = f(g.r(i));
        return sampled(g, std::move(v));
    }

    bool valid() const { return fn_ || values_; }
    bool is_sampled() const { return values_ != nullptr; }

    const radial_grid& grid() const {
        if (!grid_) throw std::logic_error("radial_function: closed form has no grid");
        return *grid_;
    }

    const std::vector<double>& values() const {
        if (!values_) throw std::logic_error("radial_function: closed form has no samples");
        return *values_;
    }

    double operator()(double r) const {
        if (values_) {
            const radial_grid& g = *grid_;
            const double fuzz = 1e-12 * g.r_max();
            if (r < g.r_min() - fuzz || r > g.r_max() + fuzz)
                throw std::domain_error("radial_function: evaluation outside sampled range");
            const double t = (r - g.r_min()) / g.h();
            const auto& v = *values_;
            const int nearest = static_cast<int>(std::lround(t));
            if (nearest >= 0 && nearest < g.n_points() && std::abs(t - nearest) < 1e-9)
                return v[nearest];
            int i = static_cast<int>(std::floor(t));
            if (i < 0) i = 0;
            if (i > g.n_points() - 2) i = g.n_points() - 2;
            return v[i] + (t - i) * (v[i + 1] - v[i]);
        }
        if (!fn_) throw std::logic_error("radial_function: empty");
        if (!(r > 0.0)) throw std::domain_error("radial_function: r must be positive");
        return fn_(r);
    }

private:
    std::function<double(double)> fn_;
    std::optional<radial_grid> grid_;
    std::shared_ptr<const std::vector<double>> values_;
};

} // namespace susyell
