#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ergodic/density.hpp"
#include "ergodic/hjb.hpp"
#include "ergodic/model.hpp"
#include "ergodic/poisson.hpp"

namespace ergodic {

/// Policy evaluation output: (μ^α, ρ^α, v^α).
struct Evaluation {
    InvariantDensity density;
    double rho = 0.0;
    ValueFunction value;
};

/// Invariant density, average cost and centered bias function of a strategy.
Evaluation evaluate(const Problem& p, const Strategy& alpha);

/**
 * Policy improvement: at every node pick the control-grid point minimizing
 * a(u,x) v''(x) + b(u,x) v'(x) + f(u,x), ties going to the smallest u.
 */
Strategy improve(const Problem& p, const ValueFunction& vf);
Strategy improve(const Problem& p, const CoefficientTable& table, const ValueFunction& vf);

struct IterationReport {
    std::size_t n = 0;
    double rho = 0.0;
    std::optional<double> rho_decrease;     ///< ρ_{n-1} - ρ_n
    double bellman_residual_sup = 0.0;      ///< sup core |G[v_n] - ρ_n|
    double strategy_change_fraction = 0.0;  ///< share of nodes where α_n != α_{n-1}
    /// ⟨v_{n-1} - v_n, μ^n⟩: the constant separating consecutive bias functions.
    std::optional<double> beta;
    double wall_time_s = 0.0;
};

enum class StopReason { Tolerance, MaxIterations };

struct SolveResult {
    Strategy strategy;
    Evaluation evaluation;  ///< of the final strategy; value.v is centered
    double rho_tilde = 0.0;
    std::vector<IterationReport> iterations;
    bool converged = false;
    StopReason reason = StopReason::MaxIterations;
    bool rho_tol_met = false;
    bool residual_tol_met = false;
    /// Non-fatal diagnostics, e.g. a ρ increase beyond round-off.
    std::vector<std::string> warnings;
};

/// Default starting strategy: initial_strategy if configured (clamped into
/// U), otherwise the constant u_min.
Strategy initial_strategy(const Problem& p);

/**
 * Reward improvement (Howard) iteration from alpha0. Stops when the ρ
 * decrease is below rho_tol (vacuous at n = 0) and the sup-core Bellman
 * residual is below residual_tol, or after max_iterations evaluations.
 */
SolveResult solve(const Problem& p, const Strategy& alpha0);

const char* to_string(StopReason r) noexcept;

}  // namespace ergodic
