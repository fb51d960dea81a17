#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ergodic/expr.hpp"
#include "ergodic/grid.hpp"

namespace ergodic {

/// Compact control interval [u_min, u_max] discretized to a uniform grid.
struct ControlSet {
    double u_min = 0.0;
    double u_max = 0.0;
    std::size_t n_controls = 1;

    /// Grid values u_k; a single point when n_controls == 1 or u_min == u_max.
    std::vector<double> grid() const;
    bool contains(double u, double slack = 1e-12) const noexcept;
    double clamp(double u) const noexcept;
};

/// Spatial truncation of the real line.
struct Domain {
    double x_min = -8.0;
    double x_max = 8.0;
    std::size_t n_nodes = 4001;
    double core_fraction = 0.5;

    Grid grid() const { return Grid(x_min, x_max, n_nodes, core_fraction); }
};

struct Tolerances {
    double rho_tol = 1e-8;
    double residual_tol = 5e-3;
    double tail_mass_tol = 1e-3;
    std::size_t max_iterations = 50;
    /// Density level below which v' is extrapolated instead of divided out.
    double p_floor = 1e-14;
    /// Largest control jump between neighbouring nodes still treated as smooth.
    double strategy_jump_tol = 0.05;
};

/**
 * One-dimensional controlled diffusion dX = b(u,X)dt + σ(u,X)dW with running
 * cost f(u,X), together with its discretization.
 */
struct Problem {
    Expression drift;
    Expression diffusion;
    Expression cost;
    ControlSet controls;
    Domain domain;
    Tolerances tol;
    /// Optional α₀(x) used by the solver in place of the constant u_min.
    std::optional<Expression> initial_strategy;

    Grid grid() const { return domain.grid(); }

    /// Throws ConfigError for an empty or reversed control set or a bad domain.
    void check_shape() const;
};

/**
 * Coefficients tabulated on (control grid) × (spatial grid); row k holds
 * control u_k. Built once per problem and shared by every argmin scan.
 */
struct CoefficientTable {
    std::vector<double> controls;
    std::size_t n_nodes = 0;
    std::vector<double> drift;      ///< b(u_k, x_i) at k*n_nodes + i
    std::vector<double> half_var;   ///< a = σ²/2
    std::vector<double> cost;       ///< f(u_k, x_i)

    double b(std::size_t k, std::size_t i) const noexcept { return drift[k * n_nodes + i]; }
    double a(std::size_t k, std::size_t i) const noexcept { return half_var[k * n_nodes + i]; }
    double f(std::size_t k, std::size_t i) const noexcept { return cost[k * n_nodes + i]; }
};

CoefficientTable tabulate(const Problem& p);

enum class Severity { Fatal, Warning };

struct Check {
    std::string name;
    Severity severity = Severity::Fatal;
    bool passed = true;
    std::string detail;
    std::optional<double> witness_u;
    std::optional<double> witness_x;
};

struct ValidationReport {
    std::vector<Check> checks;
    /// Empirical non-degeneracy constant: σ ∈ [1/C_σ, C_σ] on the sampled set.
    double sigma_bound = 0.0;

    /// All fatal checks passed.
    bool ok() const noexcept;
    const Check* find(const std::string& name) const noexcept;
    /// First failed fatal check, or nullptr.
    const Check* first_fatal() const noexcept;
};

/**
 * Samples the coefficients on the control grid × spatial grid and checks the
 * standing assumptions: evaluability, compactness of U, non-degeneracy of σ,
 * recurrence at both domain ends (fatal), and bounded drift, polynomial cost
 * growth and coefficient smoothness (warnings). Never throws for a problem
 * that passes check_shape().
 */
ValidationReport validate_problem(const Problem& p);

/**
 * Least m in [0, max_m] such that |g(x)| <= C(1+|x|^m) fits the samples in the
 * node range [first, last]: the ratio |g|/(1+|x|^m) on the outer half of the
 * range (by |x|) may not exceed its inner-half maximum by more than 25%.
 * One extra power of |x| would double it, while a saturating ratio such as
 * x^4/(1+x^4) still passes.
 */
std::optional<int> envelope_exponent(const Grid& grid, const std::vector<double>& g,
                                     std::size_t first, std::size_t last, int max_m = 8);

}  // namespace ergodic
