#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ergodic {

/**
 * Uniform spatial grid x_i = x_min + i*h, i = 0..n-1, together with the
 * centered core sub-interval on which residual norms are reported.
 */
class Grid {
public:
    /// Throws ConfigError unless x_min < x_max, n >= 3, 0 < core_fraction <= 1.
    Grid(double x_min, double x_max, std::size_t n_nodes, double core_fraction = 1.0);

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    double core_fraction() const noexcept { return core_fraction_; }

    double x(std::size_t i) const noexcept { return x_min_ + static_cast<double>(i) * h_; }
    std::vector<double> nodes() const;

    /// Index of the node closest to `x` (clamped to the grid).
    std::size_t nearest(double x) const noexcept;

    /// Node closest to the origin; the anchor for integrals written as ∫_0^x.
    std::size_t zero_node() const noexcept { return nearest(0.0); }

    /// Inclusive index range [first, last] of the core region.
    std::size_t core_first() const noexcept { return core_first_; }
    std::size_t core_last() const noexcept { return core_last_; }
    bool in_core(std::size_t i) const noexcept { return i >= core_first_ && i <= core_last_; }

    /// Same grid with the same extent and (n-1)*2+1 nodes.
    Grid refined() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_min_;
    double x_max_;
    std::size_t n_;
    double core_fraction_;
    double h_;
    std::size_t core_first_;
    std::size_t core_last_;
};

/// Samples of a real function on a grid; one finite value per node.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    explicit GridFunction(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}
    GridFunction(const Grid& g, std::vector<double> v);

    template <typename F>
    static GridFunction sample(const Grid& g, F&& fn) {
        GridFunction out(g);
        for (std::size_t i = 0; i < g.size(); ++i) {
            out.values[i] = fn(g.x(i));
        }
        return out;
    }

    std::size_t size() const noexcept { return values.size(); }
    double& operator[](std::size_t i) noexcept { return values[i]; }
    double operator[](std::size_t i) const noexcept { return values[i]; }
    std::span<const double> span() const noexcept { return values; }
};

enum class Anchor {
    LeftEnd,   ///< value 0 at x_min
    ZeroNode,  ///< value 0 at the node nearest the origin
};

/// Cumulative trapezoid integral, zero at the anchor node.
GridFunction cumulative_integral(const GridFunction& g, Anchor from);

/// Cumulative trapezoid integral, zero at an arbitrary node.
GridFunction cumulative_integral(const GridFunction& g, std::size_t anchor_node);

/// Trapezoid rule over the whole grid.
double integrate(const GridFunction& g);

/// Trapezoid rule restricted to the inclusive node range [first, last].
double integrate(const GridFunction& g, std::size_t first, std::size_t last);

/**
 * First or second derivative by finite differences: second-order central
 * stencils in the interior, second-order one-sided stencils at both ends.
 * Throws std::invalid_argument for any other order.
 */
GridFunction central_difference(const GridFunction& g, int order);

/// max |g_i| over the core region of its grid.
double sup_core(const GridFunction& g);

/// max |g_i| over the whole grid.
double sup_norm(const GridFunction& g);

}  // namespace ergodic
