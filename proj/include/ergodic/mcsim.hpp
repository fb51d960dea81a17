#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "ergodic/density.hpp"
#include "ergodic/model.hpp"

namespace ergodic {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    explicit Philox4x32(Key key) : key_(key) {}

    Counter operator()(Counter ctr) const noexcept;

    /// Two independent standard normals for the given counter (Box-Muller).
    std::array<double, 2> normals(Counter ctr) const noexcept;

private:
    Key key_;
};

struct SimConfig {
    double time_step = 1e-3;
    double horizon = 2000.0;
    double burn_in = 100.0;
    std::size_t n_paths = 4;
    std::uint64_t seed = 20240601;
    bool reflect_at_boundary = true;
    double x0 = 0.0;
    /// Allowed Euler bias: bias_coefficient * time_step * max(1, |ρ|).
    double bias_coefficient = 1.0;

    /// Throws ConfigError for a non-positive step, burn_in >= horizon, etc.
    void check() const;
};

struct MCEstimate {
    double mean = 0.0;
    double std_error = 0.0;       ///< batch means
    std::size_t n_batches = 0;
    double fraction_time_outside_core = 0.0;
    double fourth_moment = 0.0;   ///< time average of X^4 after burn-in
};

/**
 * Long-run average cost by Euler-Maruyama under a fixed strategy:
 * X += b(α(X),X) Δ + σ(α(X),X) √Δ ξ, α read at the nearest node, cost summed
 * at left endpoints after burn-in. Paths are independent Philox streams keyed
 * by (seed, path index) and run concurrently; results are reduced in path
 * order so output depends only on the inputs.
 *
 * Throws NumericalError if a path leaves 10× the domain half-width around the
 * domain center.
 */
MCEstimate simulate_average_cost(const Problem& p, const Strategy& alpha, const SimConfig& cfg);

struct CrossCheckReport {
    double rho_quadrature = 0.0;
    MCEstimate mc;
    double bias_allowance = 0.0;
    double deviation = 0.0;  ///< |ρ_quad - mean|
    bool passed = false;
};

/// Compares quadrature ρ^α (or `rho_override`) with the Monte Carlo mean:
/// passes when the deviation is within 3 standard errors plus the bias allowance.
CrossCheckReport cross_validate(const Problem& p, const Strategy& alpha, const SimConfig& cfg,
                                std::optional<double> rho_override = std::nullopt);

}  // namespace ergodic
