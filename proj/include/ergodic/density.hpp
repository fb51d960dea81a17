#pragma once

#include <optional>
#include <vector>

#include "ergodic/grid.hpp"
#include "ergodic/model.hpp"

namespace ergodic {

/**
 * Stationary Markov control α(x), stored node-wise on the problem grid.
 * Between nodes it is read piecewise-constant (nearest node).
 */
class Strategy {
public:
    static Strategy constant(const Grid& grid, double u);

    /// Throws StrategyError if the length is wrong or a value leaves U.
    static Strategy from_values(const Grid& grid, std::vector<double> values,
                                const ControlSet& controls);

    /// Values outside U are clamped into it.
    static Strategy clamped(const Grid& grid, std::vector<double> values,
                            const ControlSet& controls);

    /// Samples α(x) = expr(u = 0, x); the expression should not read `u`.
    static Strategy from_expression(const Grid& grid, const Expression& expr,
                                    const ControlSet& controls, bool clamp = false);

    const Grid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    /// Nearest-node lookup for off-grid states.
    double at(double x) const noexcept { return values_[grid_.nearest(x)]; }

    /// Largest |α(x_{i+1}) - α(x_i)|.
    double max_jump() const noexcept;

    friend bool operator==(const Strategy&, const Strategy&) = default;

private:
    Strategy(const Grid& grid, std::vector<double> values)
        : grid_(grid), values_(std::move(values)) {}

    Grid grid_;
    std::vector<double> values_;
};

/// Node-wise coefficients b^α, a^α = σ²/2 and f^α of a problem under a strategy.
struct ClosedLoop {
    std::vector<double> drift;
    std::vector<double> half_var;
    std::vector<double> cost;
};

/// Throws StrategyError when the strategy lives on a different grid.
ClosedLoop close_loop(const Problem& p, const Strategy& alpha);

struct InvariantDensity {
    GridFunction density;       ///< p^α, integrates to 1
    GridFunction log_weight;    ///< Λ(x) = 2∫_0^x b/σ² dy
    double normalization_constant = 0.0;  ///< C_α with p = C_α σ^{-2} e^Λ
    double log_normalization_constant = 0.0;
    double tail_mass = 0.0;     ///< mass outside the core region
};

/**
 * Invariant density of the closed-loop diffusion from its explicit 1D form
 * p(x) = C σ(α(x),x)^{-2} exp(Λ(x)). Λ is anchored at the node nearest 0 and
 * the exponent is shifted by its maximum before exponentiation.
 *
 * Throws NumericalError when the exponent is not finite or when more than
 * tail_mass_tol of the mass falls outside the core region.
 */
InvariantDensity compute_density(const Problem& p, const Strategy& alpha);

/// ∫ g p dx.
double stationary_expectation(const InvariantDensity& d, const GridFunction& g);

/// ρ^α = ∫ f(α(x), x) p^α(x) dx.
double average_cost(const Problem& p, const Strategy& alpha, const InvariantDensity& d);

/**
 * sup over the core of |(a p)'' - (b p)'|, the stationary Fokker-Planck
 * residual, by central differences. Returns nullopt (check skipped) when the
 * strategy jumps by more than tol.strategy_jump_tol between neighbours.
 */
std::optional<double> adjoint_residual(const Problem& p, const Strategy& alpha,
                                       const InvariantDensity& d);

}  // namespace ergodic
