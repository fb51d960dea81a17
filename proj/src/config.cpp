#include "ergodic/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <string_view>
#include <type_traits>

#include "ergodic/error.hpp"

namespace ergodic {

namespace {

constexpr std::array<std::string_view, 18> kKeys{
    "drift",         "diffusion",      "cost",    "u_min",        "u_max",
    "n_controls",    "x_min",          "x_max",   "n_nodes",      "core_fraction",
    "rho_tol",       "residual_tol",   "tail_mass_tol", "max_iterations", "initial_strategy",
    "p_floor",       "strategy_jump_tol", "name"};

Expression expression_field(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw ConfigError(std::string("missing required field '") + key + "'");
    }
    if (!j.at(key).is_string()) {
        throw ConfigError(std::string("field '") + key + "' must be an expression string");
    }
    try {
        return Expression::parse(j.at(key).get<std::string>());
    } catch (const ParseError& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

template <typename T>
void read(const nlohmann::json& j, const char* key, T& out) {
    if (!j.contains(key)) {
        return;
    }
    const auto& value = j.at(key);
    if (!value.is_number()) {
        throw ConfigError(std::string("field '") + key + "' must be a number");
    }
    if constexpr (std::is_integral_v<T>) {
        if (!value.is_number_integer() || value.get<long long>() < 0) {
            throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
        }
        out = static_cast<T>(value.get<long long>());
    } else {
        out = value.get<T>();
    }
}

}  // namespace

Problem problem_from_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("configuration must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
            throw ConfigError("unknown configuration field '" + key + "'");
        }
    }
    Problem p{expression_field(j, "drift"), expression_field(j, "diffusion"),
              expression_field(j, "cost"), {}, {}, {}, std::nullopt};
    read(j, "u_min", p.controls.u_min);
    p.controls.u_max = p.controls.u_min;
    read(j, "u_max", p.controls.u_max);
    read(j, "n_controls", p.controls.n_controls);
    read(j, "x_min", p.domain.x_min);
    read(j, "x_max", p.domain.x_max);
    read(j, "n_nodes", p.domain.n_nodes);
    read(j, "core_fraction", p.domain.core_fraction);
    read(j, "rho_tol", p.tol.rho_tol);
    read(j, "residual_tol", p.tol.residual_tol);
    read(j, "tail_mass_tol", p.tol.tail_mass_tol);
    read(j, "max_iterations", p.tol.max_iterations);
    read(j, "p_floor", p.tol.p_floor);
    read(j, "strategy_jump_tol", p.tol.strategy_jump_tol);
    if (j.contains("initial_strategy") && !j.at("initial_strategy").is_null()) {
        p.initial_strategy = expression_field(j, "initial_strategy");
    }
    p.check_shape();
    return p;
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open configuration '" + path.string() + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("malformed configuration '" + path.string() + "': " + e.what());
    }
    return problem_from_json(j);
}

nlohmann::ordered_json problem_to_json(const Problem& p) {
    nlohmann::ordered_json j;
    j["drift"] = p.drift.source();
    j["diffusion"] = p.diffusion.source();
    j["cost"] = p.cost.source();
    j["u_min"] = p.controls.u_min;
    j["u_max"] = p.controls.u_max;
    j["n_controls"] = p.controls.n_controls;
    j["x_min"] = p.domain.x_min;
    j["x_max"] = p.domain.x_max;
    j["n_nodes"] = p.domain.n_nodes;
    j["core_fraction"] = p.domain.core_fraction;
    j["rho_tol"] = p.tol.rho_tol;
    j["residual_tol"] = p.tol.residual_tol;
    j["tail_mass_tol"] = p.tol.tail_mass_tol;
    j["max_iterations"] = p.tol.max_iterations;
    j["initial_strategy"] =
        p.initial_strategy ? nlohmann::ordered_json(p.initial_strategy->source()) : nullptr;
    j["p_floor"] = p.tol.p_floor;
    j["strategy_jump_tol"] = p.tol.strategy_jump_tol;
    return j;
}

}  // namespace ergodic
