#include "ergodic/mcsim.hpp"

#include <cmath>
#include <future>
#include <numbers>
#include <string>
#include <vector>

#include "ergodic/error.hpp"
#include "ergodic/howard.hpp"

namespace ergodic {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
constexpr std::size_t kBatches = 20;

double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32 | lo) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

struct PathResult {
    std::array<double, kBatches> batch_sum{};
    std::array<std::size_t, kBatches> batch_count{};
    std::size_t outside_core = 0;
    std::size_t samples = 0;
    double fourth = 0.0;
};

}  // namespace

Philox4x32::Counter Philox4x32::operator()(Counter ctr) const noexcept {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::array<double, 2> Philox4x32::normals(Counter ctr) const noexcept {
    const Counter r = (*this)(ctr);
    const double u1 = to_open_unit(r[0], r[1]);
    const double u2 = to_open_unit(r[2], r[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

void SimConfig::check() const {
    if (!(time_step > 0.0) || !std::isfinite(time_step)) {
        throw ConfigError("time_step must be positive");
    }
    if (!(horizon > 0.0) || !(burn_in >= 0.0) || !(burn_in < horizon)) {
        throw ConfigError("simulation requires 0 <= burn_in < horizon");
    }
    if (horizon - burn_in < kBatches * time_step) {
        throw ConfigError("averaging window too short for batch means");
    }
    if (n_paths < 1) {
        throw ConfigError("n_paths must be >= 1");
    }
    if (!std::isfinite(x0)) {
        throw ConfigError("x0 must be finite");
    }
}

MCEstimate simulate_average_cost(const Problem& p, const Strategy& alpha, const SimConfig& cfg) {
    cfg.check();
    const Grid grid = p.grid();
    if (!(alpha.grid() == grid)) {
        throw StrategyError("strategy grid does not match the problem grid");
    }
    const auto n_steps = static_cast<std::size_t>(std::llround(cfg.horizon / cfg.time_step));
    const auto burn_steps = static_cast<std::size_t>(std::llround(cfg.burn_in / cfg.time_step));
    const std::size_t window = n_steps - burn_steps;
    const double dt = cfg.time_step;
    const double sqrt_dt = std::sqrt(dt);
    const double x_min = grid.x_min();
    const double x_max = grid.x_max();
    const double center = 0.5 * (x_min + x_max);
    const double blowup = 10.0 * 0.5 * (x_max - x_min);
    const double core_lo = grid.x(grid.core_first());
    const double core_hi = grid.x(grid.core_last());

    auto run_path = [&](std::uint32_t path) {
        const Philox4x32 rng({static_cast<std::uint32_t>(cfg.seed),
                              static_cast<std::uint32_t>(cfg.seed >> 32)});
        PathResult out;
        double x = cfg.x0;
        std::array<double, 2> xi{};
        for (std::size_t j = 0; j < n_steps; ++j) {
            const double u = alpha.at(x);
            if (j >= burn_steps) {
                const std::size_t batch = (j - burn_steps) * kBatches / window;
                out.batch_sum[batch] += p.cost(u, x);
                ++out.batch_count[batch];
                out.outside_core += (x < core_lo || x > core_hi);
                out.fourth += x * x * x * x;
                ++out.samples;
            }
            if (j % 2 == 0) {
                const std::uint64_t block = j / 2;
                xi = rng.normals({static_cast<std::uint32_t>(block),
                                  static_cast<std::uint32_t>(block >> 32), path, 0});
            }
            x += p.drift(u, x) * dt + p.diffusion(u, x) * sqrt_dt * xi[j % 2];
            if (std::fabs(x - center) > blowup || !std::isfinite(x)) {
                throw NumericalError("simulated path exploded at t=" +
                                     std::to_string(static_cast<double>(j + 1) * dt) +
                                     "; drift not recurrent or time step too large");
            }
            if (cfg.reflect_at_boundary) {
                if (x > x_max) {
                    x = std::max(x_min, 2.0 * x_max - x);
                } else if (x < x_min) {
                    x = std::min(x_max, 2.0 * x_min - x);
                }
            }
        }
        return out;
    };

    std::vector<std::future<PathResult>> futures;
    futures.reserve(cfg.n_paths);
    for (std::size_t k = 0; k < cfg.n_paths; ++k) {
        futures.push_back(std::async(std::launch::async, run_path, static_cast<std::uint32_t>(k)));
    }
    std::vector<PathResult> paths;
    paths.reserve(cfg.n_paths);
    for (auto& f : futures) {
        paths.push_back(f.get());
    }

    std::array<double, kBatches> batch_mean{};
    std::size_t outside = 0, samples = 0;
    double fourth = 0.0;
    for (const PathResult& r : paths) {
        for (std::size_t b = 0; b < kBatches; ++b) {
            batch_mean[b] += r.batch_sum[b] / static_cast<double>(r.batch_count[b]);
        }
        outside += r.outside_core;
        samples += r.samples;
        fourth += r.fourth;
    }
    double mean = 0.0;
    for (double& m : batch_mean) {
        m /= static_cast<double>(cfg.n_paths);
        mean += m;
    }
    mean /= static_cast<double>(kBatches);
    double ss = 0.0;
    for (double m : batch_mean) {
        ss += (m - mean) * (m - mean);
    }

    MCEstimate est;
    est.mean = mean;
    est.n_batches = kBatches;
    est.std_error = std::sqrt(ss / static_cast<double>(kBatches - 1) / static_cast<double>(kBatches));
    est.fraction_time_outside_core = static_cast<double>(outside) / static_cast<double>(samples);
    est.fourth_moment = fourth / static_cast<double>(samples);
    return est;
}

CrossCheckReport cross_validate(const Problem& p, const Strategy& alpha, const SimConfig& cfg,
                                std::optional<double> rho_override) {
    CrossCheckReport r;
    if (rho_override) {
        r.rho_quadrature = *rho_override;
    } else {
        const InvariantDensity d = compute_density(p, alpha);
        r.rho_quadrature = average_cost(p, alpha, d);
    }
    r.mc = simulate_average_cost(p, alpha, cfg);
    r.bias_allowance = cfg.bias_coefficient * cfg.time_step * std::max(1.0, std::fabs(r.rho_quadrature));
    r.deviation = std::fabs(r.rho_quadrature - r.mc.mean);
    r.passed = r.deviation <= 3.0 * r.mc.std_error + r.bias_allowance;
    return r;
}

}  // namespace ergodic
