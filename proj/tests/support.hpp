#pragma once

#include <filesystem>
#include <string>

#include "ergodic/config.hpp"
#include "ergodic/model.hpp"

namespace ergodic::test {

inline Problem make_problem(const std::string& drift, const std::string& diffusion,
                            const std::string& cost, double u_min = 0.0, double u_max = 0.0,
                            std::size_t n_controls = 1, Domain domain = {}, Tolerances tol = {}) {
    Problem p{Expression::parse(drift), Expression::parse(diffusion), Expression::parse(cost),
              ControlSet{u_min, u_max, n_controls}, domain, tol, std::nullopt};
    return p;
}

inline Problem ou_problem(std::size_t n_nodes = 4001) {
    return make_problem("-x", "sqrt(2)", "x*x", 0, 0, 1, Domain{-8, 8, n_nodes, 0.5});
}

inline std::filesystem::path catalog_dir() { return ERGODIC_CATALOG_DIR; }

inline Problem catalog(const std::string& name) {
    return load_problem(catalog_dir() / (name + ".json"));
}

inline const char* const kCatalog[] = {"ou", "drift_control", "diffusion_control", "tanh_drift",
                                       "mixed_control"};

}  // namespace ergodic::test
