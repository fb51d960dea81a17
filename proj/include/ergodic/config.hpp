#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "ergodic/model.hpp"

namespace ergodic {

/**
 * Problem configuration as a JSON object:
 *
 *     {
 *       "drift": "-u*x", "diffusion": "sqrt(2)", "cost": "x*x + u",
 *       "u_min": 1, "u_max": 2, "n_controls": 101,
 *       "x_min": -8, "x_max": 8, "n_nodes": 4001, "core_fraction": 0.5,
 *       "rho_tol": 1e-8, "residual_tol": 5e-3, "tail_mass_tol": 1e-3,
 *       "max_iterations": 50,
 *       "initial_strategy": "1"            (optional, expression in x)
 *     }
 *
 * The three coefficient strings are required; every other field falls back
 * to its default. Optional extras: "p_floor", "strategy_jump_tol".
 * Unknown keys are rejected. Throws ConfigError or ParseError.
 */
Problem problem_from_json(const nlohmann::json& j);

Problem load_problem(const std::filesystem::path& path);

/// Full resolved configuration, keys in the order listed above.
nlohmann::ordered_json problem_to_json(const Problem& p);

}  // namespace ergodic
