#pragma once

#include <cstddef>
#include <optional>

#include "ergodic/density.hpp"
#include "ergodic/grid.hpp"
#include "ergodic/model.hpp"

namespace ergodic {

/// Bias function v^α with its first two derivatives and the attached ρ^α.
struct ValueFunction {
    GridFunction v;
    GridFunction dv;
    GridFunction d2v;
    double rho = 0.0;
};

struct PoissonOptions {
    /// Node where the antiderivative of v' starts before centering.
    /// Defaults to the node nearest 0; the centered result does not depend on it.
    std::optional<std::size_t> anchor_node;
};

/**
 * Solves a^α v'' + b^α v' + f^α - ρ = 0 on the whole line by quadrature.
 *
 * With H(x) = ∫_{-∞}^x (f^α - ρ) p^α dy the integrating factor gives
 * v'(x) = -2 H(x) / (σ² p^α)(x). H is accumulated from the left below the
 * density mode and from the right above it; since ∫ (f^α - ρ) p^α = 0 both
 * are the same function, and each side avoids cancellation in its tail.
 * Where p^α < p_floor, v' is linearly extrapolated from the two outermost
 * trusted nodes. v is the antiderivative of v', shifted so ⟨v, μ^α⟩ = 0, and
 * v'' comes from the equation itself.
 *
 * Throws NumericalError when |H(x_max)| shows the right-hand side is not
 * centered (ρ inconsistent with the density, or the domain too small).
 */
ValueFunction solve_poisson(const Problem& p, const Strategy& alpha, const InvariantDensity& d,
                            double rho, const PoissonOptions& options = {});

/// a^α (v')'_fd + b^α v' + f^α - ρ, with (v')'_fd the central difference of dv.
GridFunction ode_residual(const Problem& p, const Strategy& alpha, const ValueFunction& vf);

/// Least m <= 8 with |v| + |v'| <= C(1+|x|^m) on the core, v taken relative to v(0).
std::optional<int> value_envelope_exponent(const ValueFunction& vf);

}  // namespace ergodic
