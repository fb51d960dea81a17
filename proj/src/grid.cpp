#include "ergodic/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ergodic/error.hpp"

namespace ergodic {

Grid::Grid(double x_min, double x_max, std::size_t n_nodes, double core_fraction)
    : x_min_(x_min), x_max_(x_max), n_(n_nodes), core_fraction_(core_fraction) {
    if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
        throw ConfigError("domain requires finite x_min < x_max");
    }
    if (n_nodes < 3) {
        throw ConfigError("domain requires n_nodes >= 3, got " + std::to_string(n_nodes));
    }
    if (!(core_fraction > 0.0 && core_fraction <= 1.0)) {
        throw ConfigError("core_fraction must lie in (0, 1]");
    }
    h_ = (x_max - x_min) / static_cast<double>(n_nodes - 1);

    const double center = 0.5 * (x_min + x_max);
    const double half = 0.5 * core_fraction * (x_max - x_min);
    constexpr double kSlack = 1e-9;
    const double lo = std::ceil((center - half - x_min) / h_ - kSlack);
    const double hi = std::floor((center + half - x_min) / h_ + kSlack);
    core_first_ = static_cast<std::size_t>(std::clamp(lo, 0.0, static_cast<double>(n_ - 1)));
    core_last_ = static_cast<std::size_t>(std::clamp(hi, 0.0, static_cast<double>(n_ - 1)));
    if (core_first_ > core_last_) {
        core_first_ = core_last_ = nearest(center);
    }
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = x(i);
    }
    return out;
}

std::size_t Grid::nearest(double x) const noexcept {
    const double pos = std::round((x - x_min_) / h_);
    return static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(n_ - 1)));
}

Grid Grid::refined() const { return Grid(x_min_, x_max_, 2 * (n_ - 1) + 1, core_fraction_); }

GridFunction::GridFunction(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("grid function length " + std::to_string(values.size()) +
                                    " does not match grid size " + std::to_string(grid.size()));
    }
}

GridFunction cumulative_integral(const GridFunction& g, std::size_t anchor) {
    const std::size_t n = g.size();
    const double half_h = 0.5 * g.grid.spacing();
    GridFunction out(g.grid);
    for (std::size_t i = anchor + 1; i < n; ++i) {
        out[i] = out[i - 1] + half_h * (g[i - 1] + g[i]);
    }
    for (std::size_t i = anchor; i-- > 0;) {
        out[i] = out[i + 1] - half_h * (g[i] + g[i + 1]);
    }
    return out;
}

GridFunction cumulative_integral(const GridFunction& g, Anchor from) {
    return cumulative_integral(g, from == Anchor::LeftEnd ? std::size_t{0} : g.grid.zero_node());
}

double integrate(const GridFunction& g, std::size_t first, std::size_t last) {
    if (last <= first) {
        return 0.0;
    }
    double interior = 0.0;
    for (std::size_t i = first + 1; i < last; ++i) {
        interior += g[i];
    }
    return g.grid.spacing() * (interior + 0.5 * (g[first] + g[last]));
}

double integrate(const GridFunction& g) { return integrate(g, 0, g.size() - 1); }

GridFunction central_difference(const GridFunction& g, int order) {
    const std::size_t n = g.size();
    const double h = g.grid.spacing();
    GridFunction out(g.grid);
    if (order == 1) {
        for (std::size_t i = 1; i + 1 < n; ++i) {
            out[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
        }
        // Written in differences so constants give exactly zero.
        out[0] = (4.0 * (g[1] - g[0]) - (g[2] - g[0])) / (2.0 * h);
        out[n - 1] = (4.0 * (g[n - 1] - g[n - 2]) - (g[n - 1] - g[n - 3])) / (2.0 * h);
        return out;
    }
    if (order == 2) {
        const double h2 = h * h;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            out[i] = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / h2;
        }
        if (n >= 4) {
            out[0] = (-5.0 * (g[1] - g[0]) + 4.0 * (g[2] - g[0]) - (g[3] - g[0])) / h2;
            out[n - 1] = (-5.0 * (g[n - 2] - g[n - 1]) + 4.0 * (g[n - 3] - g[n - 1]) -
                          (g[n - 4] - g[n - 1])) / h2;
        } else {
            out[0] = out[n - 1] = out[1];
        }
        return out;
    }
    throw std::invalid_argument("central_difference supports order 1 or 2");
}

double sup_core(const GridFunction& g) {
    double m = 0.0;
    for (std::size_t i = g.grid.core_first(); i <= g.grid.core_last(); ++i) {
        m = std::max(m, std::fabs(g[i]));
    }
    return m;
}

double sup_norm(const GridFunction& g) {
    double m = 0.0;
    for (double v : g.values) {
        m = std::max(m, std::fabs(v));
    }
    return m;
}

}  // namespace ergodic
