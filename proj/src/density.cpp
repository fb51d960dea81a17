#include "ergodic/density.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergodic/error.hpp"

namespace ergodic {

Strategy Strategy::constant(const Grid& grid, double u) {
    return Strategy(grid, std::vector<double>(grid.size(), u));
}

Strategy Strategy::from_values(const Grid& grid, std::vector<double> values,
                               const ControlSet& controls) {
    if (values.size() != grid.size()) {
        throw StrategyError("strategy has " + std::to_string(values.size()) +
                            " values for a grid of " + std::to_string(grid.size()) + " nodes");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!controls.contains(values[i])) {
            throw StrategyError("strategy value " + std::to_string(values[i]) + " at x=" +
                                std::to_string(grid.x(i)) + " lies outside U = [" +
                                std::to_string(controls.u_min) + ", " +
                                std::to_string(controls.u_max) + "]");
        }
        values[i] = controls.clamp(values[i]);
    }
    return Strategy(grid, std::move(values));
}

Strategy Strategy::clamped(const Grid& grid, std::vector<double> values,
                           const ControlSet& controls) {
    if (values.size() != grid.size()) {
        throw StrategyError("strategy length does not match the grid");
    }
    for (double& v : values) {
        if (!std::isfinite(v)) {
            throw StrategyError("strategy value is not finite");
        }
        v = controls.clamp(v);
    }
    return Strategy(grid, std::move(values));
}

Strategy Strategy::from_expression(const Grid& grid, const Expression& expr,
                                   const ControlSet& controls, bool clamp) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        values[i] = expr(0.0, grid.x(i));
    }
    return clamp ? clamped(grid, std::move(values), controls)
                 : from_values(grid, std::move(values), controls);
}

double Strategy::max_jump() const noexcept {
    double m = 0.0;
    for (std::size_t i = 0; i + 1 < values_.size(); ++i) {
        m = std::max(m, std::fabs(values_[i + 1] - values_[i]));
    }
    return m;
}

ClosedLoop close_loop(const Problem& p, const Strategy& alpha) {
    const Grid grid = p.grid();
    if (!(alpha.grid() == grid)) {
        throw StrategyError("strategy grid does not match the problem grid");
    }
    ClosedLoop c;
    const std::size_t n = grid.size();
    c.drift.resize(n);
    c.half_var.resize(n);
    c.cost.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = alpha[i];
        const double x = grid.x(i);
        const double s = p.diffusion(u, x);
        c.drift[i] = p.drift(u, x);
        c.half_var[i] = 0.5 * s * s;
        c.cost[i] = p.cost(u, x);
    }
    return c;
}

InvariantDensity compute_density(const Problem& p, const Strategy& alpha) {
    const Grid grid = p.grid();
    const ClosedLoop c = close_loop(p, alpha);
    const std::size_t n = grid.size();

    // 2b/σ² = b/a
    GridFunction ratio(grid);
    for (std::size_t i = 0; i < n; ++i) {
        ratio[i] = c.drift[i] / c.half_var[i];
    }
    GridFunction lambda = cumulative_integral(ratio, Anchor::ZeroNode);

    std::vector<double> log_q(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_q[i] = lambda[i] - std::log(2.0 * c.half_var[i]);
        if (!std::isfinite(log_q[i])) {
            throw NumericalError("density exponent is not finite at x=" + std::to_string(grid.x(i)));
        }
    }
    const double shift = *std::max_element(log_q.begin(), log_q.end());

    GridFunction q(grid);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = std::exp(log_q[i] - shift);
    }
    const double mass = integrate(q);
    for (double& v : q.values) {
        v /= mass;
    }

    InvariantDensity d{std::move(q), std::move(lambda), 0.0, 0.0, 0.0};
    d.log_normalization_constant = -shift - std::log(mass);
    d.normalization_constant = std::exp(d.log_normalization_constant);
    d.tail_mass = integrate(d.density, 0, grid.core_first()) +
                  integrate(d.density, grid.core_last(), n - 1);
    if (d.tail_mass > p.tol.tail_mass_tol) {
        throw NumericalError("domain too small: mass " + std::to_string(d.tail_mass) +
                             " outside the core region exceeds tail_mass_tol " +
                             std::to_string(p.tol.tail_mass_tol));
    }
    return d;
}

double stationary_expectation(const InvariantDensity& d, const GridFunction& g) {
    GridFunction weighted(d.density.grid);
    for (std::size_t i = 0; i < weighted.size(); ++i) {
        weighted[i] = g[i] * d.density[i];
    }
    return integrate(weighted);
}

double average_cost(const Problem& p, const Strategy& alpha, const InvariantDensity& d) {
    const Grid& grid = d.density.grid;
    GridFunction f(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        f[i] = p.cost(alpha[i], grid.x(i));
    }
    return stationary_expectation(d, f);
}

std::optional<double> adjoint_residual(const Problem& p, const Strategy& alpha,
                                       const InvariantDensity& d) {
    if (alpha.max_jump() > p.tol.strategy_jump_tol) {
        return std::nullopt;
    }
    const Grid& grid = d.density.grid;
    const ClosedLoop c = close_loop(p, alpha);
    GridFunction ap(grid), bp(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        ap[i] = c.half_var[i] * d.density[i];
        bp[i] = c.drift[i] * d.density[i];
    }
    const GridFunction ap2 = central_difference(ap, 2);
    const GridFunction bp1 = central_difference(bp, 1);
    double sup = 0.0;
    for (std::size_t i = grid.core_first(); i <= grid.core_last(); ++i) {
        sup = std::max(sup, std::fabs(ap2[i] - bp1[i]));
    }
    return sup;
}

}  // namespace ergodic
