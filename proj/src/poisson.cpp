#include "ergodic/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ergodic/error.hpp"

namespace ergodic {

namespace {

// Central slope of the source, except next to a step of the strategy (an
// increment well above its neighbours), where f^α p is discontinuous and the
// one-sided slope from the smooth side is used instead.
GridFunction source_slope(const Grid& grid, const Strategy& alpha, const std::vector<double>& g) {
    GridFunction slope = central_difference(GridFunction(grid, g), 1);
    const std::size_t n = g.size();
    const double h = grid.spacing();
    const auto step = [&](std::size_t i) {  // between nodes i and i + 1
        const double d = std::fabs(alpha[i + 1] - alpha[i]);
        const double before = i > 0 ? std::fabs(alpha[i] - alpha[i - 1]) : 0.0;
        const double after = i + 2 < n ? std::fabs(alpha[i + 2] - alpha[i + 1]) : 0.0;
        return d > 0.0 && d > 2.0 * std::max(before, after);
    };
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool left = step(i - 1);
        const bool right = step(i);
        if (left && right) {
            slope[i] = 0.0;
        } else if (left) {
            slope[i] = (g[i + 1] - g[i]) / h;
        } else if (right) {
            slope[i] = (g[i] - g[i - 1]) / h;
        }
    }
    return slope;
}

}  // namespace

ValueFunction solve_poisson(const Problem& p, const Strategy& alpha, const InvariantDensity& d,
                            double rho, const PoissonOptions& options) {
    const Grid grid = p.grid();
    const std::size_t n = grid.size();
    const double h = grid.spacing();
    const ClosedLoop c = close_loop(p, alpha);
    const GridFunction& dens = d.density;

    std::vector<double> source(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        source[i] = (c.cost[i] - rho) * dens[i];
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        scale += 0.5 * h * (std::fabs(source[i]) + std::fabs(source[i + 1]));
    }

    std::vector<double> from_left(n, 0.0);
    std::vector<double> from_right(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        from_left[i] = from_left[i - 1] + 0.5 * h * (source[i - 1] + source[i]);
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        from_right[i] = from_right[i + 1] - 0.5 * h * (source[i] + source[i + 1]);
    }
    const double total = from_left[n - 1];

    // Euler-Maclaurin end correction. Where p decays fast the plain trapezoid
    // tail integral is off by a relative (h Λ')²/12, which the division by p
    // below would turn into an O(1) error in v'. The correction is local, so
    // the total (and with it the centering check) is untouched.
    const GridFunction slope = source_slope(grid, alpha, source);
    const double em = h * h / 12.0;
    for (std::size_t i = 0; i < n; ++i) {
        from_left[i] -= em * (slope[i] - slope[0]);
        from_right[i] -= em * (slope[i] - slope[n - 1]);
    }
    if (std::fabs(total) > p.tol.rho_tol * std::max(1.0, scale)) {
        throw NumericalError("Poisson right-hand side is not centered: H(x_max) = " +
                             std::to_string(total));
    }

    const auto mode = static_cast<std::size_t>(
        std::max_element(dens.values.begin(), dens.values.end()) - dens.values.begin());

    GridFunction dv(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double H = i <= mode ? from_left[i] : from_right[i];
        dv[i] = -H / (c.half_var[i] * dens[i]);
    }

    // Tail guard: replace v' where the density is below the floor.
    std::size_t lo = 0;
    while (lo < n && dens[lo] < p.tol.p_floor) {
        ++lo;
    }
    std::size_t hi = n;
    while (hi > 0 && dens[hi - 1] < p.tol.p_floor) {
        --hi;
    }
    if (lo >= hi) {
        throw NumericalError("density is below p_floor on the whole grid");
    }
    --hi;  // last trusted node
    if (lo > 0) {
        const double slope = hi > lo ? (dv[lo + 1] - dv[lo]) / h : 0.0;
        for (std::size_t i = 0; i < lo; ++i) {
            dv[i] = dv[lo] + (grid.x(i) - grid.x(lo)) * slope;
        }
    }
    if (hi + 1 < n) {
        const double slope = hi > lo ? (dv[hi] - dv[hi - 1]) / h : 0.0;
        for (std::size_t i = hi + 1; i < n; ++i) {
            dv[i] = dv[hi] + (grid.x(i) - grid.x(hi)) * slope;
        }
    }

    GridFunction v = cumulative_integral(dv, options.anchor_node.value_or(grid.zero_node()));
    GridFunction weighted(grid);
    for (std::size_t i = 0; i < n; ++i) {
        weighted[i] = v[i] * dens[i];
    }
    const double mean = integrate(weighted) / integrate(dens);
    for (double& value : v.values) {
        value -= mean;
    }

    GridFunction d2v(grid);
    for (std::size_t i = 0; i < n; ++i) {
        d2v[i] = -(c.cost[i] - rho + c.drift[i] * dv[i]) / c.half_var[i];
    }

    return ValueFunction{std::move(v), std::move(dv), std::move(d2v), rho};
}

GridFunction ode_residual(const Problem& p, const Strategy& alpha, const ValueFunction& vf) {
    const ClosedLoop c = close_loop(p, alpha);
    const GridFunction second = central_difference(vf.dv, 1);
    GridFunction r(vf.dv.grid);
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = c.half_var[i] * second[i] + c.drift[i] * vf.dv[i] + c.cost[i] - vf.rho;
    }
    return r;
}

std::optional<int> value_envelope_exponent(const ValueFunction& vf) {
    const Grid& grid = vf.v.grid;
    const double origin = vf.v[grid.zero_node()];
    std::vector<double> g(grid.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] = std::fabs(vf.v[i] - origin) + std::fabs(vf.dv[i]);
    }
    return envelope_exponent(grid, g, grid.core_first(), grid.core_last());
}

}  // namespace ergodic
