#include "ergodic/hjb.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergodic/error.hpp"

namespace ergodic {

BellmanResidual bellman_residual(const Problem& p, const ValueFunction& vf, double rho) {
    return bellman_residual(p, tabulate(p), vf, rho);
}

BellmanResidual bellman_residual(const Problem& p, const CoefficientTable& table,
                                 const ValueFunction& vf, double rho) {
    const Grid& grid = vf.dv.grid;
    if (!(grid == p.grid())) {
        throw StrategyError("value function grid does not match the problem grid");
    }
    const std::size_t n = grid.size();
    const std::size_t nk = table.controls.size();

    GridFunction full(grid), reduced(grid);
    std::vector<double> argmin(n);
    bool consistent = true;
    constexpr double inf = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        const double v1 = vf.dv[i];
        const double v2 = vf.d2v[i];
        double best = inf;
        double best_reduced = inf;
        std::size_t best_k = 0;
        double a_lo = inf, a_hi = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
            const double a = table.a(k, i);
            const double rest = table.b(k, i) * v1 + table.f(k, i) - rho;
            const double q = a * v2 + rest;
            if (q < best) {
                best = q;
                best_k = k;
            }
            best_reduced = std::min(best_reduced, rest / a);
            a_lo = std::min(a_lo, a);
            a_hi = std::max(a_hi, a);
        }
        full[i] = best;
        reduced[i] = v2 + best_reduced;
        argmin[i] = table.controls[best_k];

        if (grid.in_core(i)) {
            const double e1 = best / a_lo;
            const double e2 = best / a_hi;
            const double slack =
                1e-9 * (1.0 + std::fabs(v2) + std::fabs(best_reduced) + std::fabs(e1));
            if (reduced[i] < std::min(e1, e2) - slack || reduced[i] > std::max(e1, e2) + slack) {
                consistent = false;
            }
        }
    }

    BellmanResidual r{std::move(full), std::move(reduced),
                      Strategy::clamped(grid, std::move(argmin), p.controls)};
    r.sup_core = sup_core(r.full_form);
    r.sup_full = sup_norm(r.full_form);
    r.reduced_sup_core = sup_core(r.reduced_form);
    r.forms_consistent = consistent;
    return r;
}

VerificationReport verify_solution(const Problem& p, const ValueFunction& vf, double rho) {
    VerificationReport report{bellman_residual(p, vf, rho), std::nullopt};
    const Grid& grid = vf.v.grid;
    report.envelope_exponent = value_envelope_exponent(vf);

    const int m = report.envelope_exponent.value_or(8);
    double lip = 0.0;
    for (std::size_t i = grid.core_first(); i < grid.core_last(); ++i) {
        const double x0 = grid.x(i);
        const double x1 = grid.x(i + 1);
        const double weight = 1.0 + std::pow(std::fabs(x0), m) + std::pow(std::fabs(x1), m);
        lip = std::max(lip, std::fabs(vf.d2v[i + 1] - vf.d2v[i]) / (weight * (x1 - x0)));
    }
    report.lipschitz_d2v = lip;

    report.residual_ok = report.residual.sup_core <= p.tol.residual_tol;
    report.verified = report.residual_ok && report.residual.forms_consistent &&
                      report.envelope_exponent.has_value() && std::isfinite(lip);
    return report;
}

}  // namespace ergodic
