#include "ergodic/howard.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace ergodic {

Evaluation evaluate(const Problem& p, const Strategy& alpha) {
    InvariantDensity d = compute_density(p, alpha);
    const double rho = average_cost(p, alpha, d);
    ValueFunction v = solve_poisson(p, alpha, d, rho);
    return Evaluation{std::move(d), rho, std::move(v)};
}

Strategy improve(const Problem& p, const ValueFunction& vf) {
    return improve(p, tabulate(p), vf);
}

Strategy improve(const Problem& p, const CoefficientTable& table, const ValueFunction& vf) {
    // The constant ρ does not move the argmin.
    return bellman_residual(p, table, vf, vf.rho).argmin_strategy;
}

Strategy initial_strategy(const Problem& p) {
    const Grid grid = p.grid();
    if (p.initial_strategy) {
        return Strategy::from_expression(grid, *p.initial_strategy, p.controls, /*clamp=*/true);
    }
    return Strategy::constant(grid, p.controls.u_min);
}

namespace {

double change_fraction(const Strategy& a, const Strategy& b) {
    std::size_t changed = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        changed += a[i] != b[i];
    }
    return static_cast<double>(changed) / static_cast<double>(a.size());
}

}  // namespace

SolveResult solve(const Problem& p, const Strategy& alpha0) {
    using clock = std::chrono::steady_clock;
    constexpr double kMonotoneSlack = 1e-8;

    const CoefficientTable table = tabulate(p);
    Strategy alpha = alpha0;
    std::optional<Strategy> previous_alpha;
    std::optional<Evaluation> previous;
    std::vector<IterationReport> reports;
    std::vector<std::string> warnings;

    for (std::size_t n = 0;; ++n) {
        const auto start = clock::now();
        Evaluation ev = evaluate(p, alpha);
        const BellmanResidual br = bellman_residual(p, table, ev.value, ev.rho);

        IterationReport rep;
        rep.n = n;
        rep.rho = ev.rho;
        rep.bellman_residual_sup = br.sup_core;
        if (previous) {
            rep.rho_decrease = previous->rho - ev.rho;
            rep.strategy_change_fraction = change_fraction(*previous_alpha, alpha);
            GridFunction diff(ev.density.density.grid);
            for (std::size_t i = 0; i < diff.size(); ++i) {
                diff[i] = previous->value.v[i] - ev.value.v[i];
            }
            rep.beta = stationary_expectation(ev.density, diff);
            if (*rep.rho_decrease < -kMonotoneSlack) {
                std::ostringstream os;
                os << "rho increased by " << -*rep.rho_decrease << " at iteration " << n
                   << "; the grid may be too coarse";
                warnings.push_back(os.str());
            }
        }
        rep.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
        reports.push_back(rep);

        const bool rho_ok = !rep.rho_decrease || *rep.rho_decrease < p.tol.rho_tol;
        const bool residual_ok = br.sup_core <= p.tol.residual_tol;
        const bool last = n + 1 >= p.tol.max_iterations;
        if ((rho_ok && residual_ok) || last) {
            const bool converged = rho_ok && residual_ok;
            const double rho = ev.rho;
            return SolveResult{std::move(alpha),
                               std::move(ev),
                               rho,
                               std::move(reports),
                               converged,
                               converged ? StopReason::Tolerance : StopReason::MaxIterations,
                               rho_ok,
                               residual_ok,
                               std::move(warnings)};
        }

        previous_alpha = alpha;
        alpha = br.argmin_strategy;
        previous = std::move(ev);
    }
}

const char* to_string(StopReason r) noexcept {
    switch (r) {
        case StopReason::Tolerance: return "tolerance";
        case StopReason::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

}  // namespace ergodic
