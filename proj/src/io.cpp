#include "ergodic/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "ergodic/error.hpp"

namespace ergodic::io {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) {
            cell.pop_back();
        }
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double json_number(std::optional<double> v) { return v.value_or(kMissing); }

nlohmann::ordered_json optional_json(std::optional<double> v) {
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

void check_grid(const Table& t, std::size_t x_col, const Grid& grid, const std::string& what) {
    if (t.rows.size() != grid.size()) {
        throw ConfigError(what + " has " + std::to_string(t.rows.size()) + " rows; the grid has " +
                          std::to_string(grid.size()) + " nodes");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(std::fabs(t.rows[i][x_col] - grid.x(i)) <= 1e-9 * (1.0 + std::fabs(grid.x(i))))) {
            throw ConfigError(what + ": x in row " + std::to_string(i + 1) +
                              " does not match grid node " + format_double(grid.x(i)));
        }
    }
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::size_t Table::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) {
            return c;
        }
    }
    throw ConfigError("table has no column '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const Table& table) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        out << (c ? "," : "") << table.header[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "," : "") << format_double(row[c]);
        }
        out << '\n';
    }
}

Table read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open '" + path.string() + "'");
    }
    Table t;
    std::string line;
    if (!std::getline(in, line)) {
        throw ConfigError("'" + path.string() + "' is empty");
    }
    t.header = split(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) + " has " +
                              std::to_string(cells.size()) + " cells, expected " +
                              std::to_string(t.header.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].empty()) {
                row[c] = kMissing;
                continue;
            }
            char* end = nullptr;
            row[c] = std::strtod(cells[c].c_str(), &end);
            if (end == cells[c].c_str() || *end != '\0') {
                throw ConfigError("'" + path.string() + "' line " + std::to_string(line_no) +
                                  ": '" + cells[c] + "' is not a number");
            }
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

Table density_table(const Strategy& alpha, const InvariantDensity& d) {
    Table t{{"x", "alpha", "p"}, {}};
    const Grid& g = d.density.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        t.rows.push_back({g.x(i), alpha[i], d.density[i]});
    }
    return t;
}

Table strategy_table(const Strategy& alpha) {
    Table t{{"x", "alpha"}, {}};
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        t.rows.push_back({alpha.grid().x(i), alpha[i]});
    }
    return t;
}

Table value_table(const ValueFunction& vf, const GridFunction& residual) {
    Table t{{"x", "v", "dv", "d2v", "residual"}, {}};
    const Grid& g = vf.v.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        t.rows.push_back({g.x(i), vf.v[i], vf.dv[i], vf.d2v[i], residual[i]});
    }
    return t;
}

Table iterations_table(const std::vector<IterationReport>& iterations) {
    Table t{{"n", "rho", "rho_decrease", "bellman_residual", "change_fraction", "beta"}, {}};
    for (const auto& r : iterations) {
        t.rows.push_back({static_cast<double>(r.n), r.rho, json_number(r.rho_decrease),
                          r.bellman_residual_sup, r.strategy_change_fraction, json_number(r.beta)});
    }
    return t;
}

Table bellman_table(const BellmanResidual& r) {
    Table t{{"x", "full_form", "reduced_form", "argmin_u"}, {}};
    const Grid& g = r.full_form.grid;
    for (std::size_t i = 0; i < g.size(); ++i) {
        t.rows.push_back({g.x(i), r.full_form[i], r.reduced_form[i], r.argmin_strategy[i]});
    }
    return t;
}

Strategy read_strategy(const std::filesystem::path& path, const Grid& grid,
                       const ControlSet& controls) {
    const Table t = read_csv(path);
    const std::size_t xc = t.column("x");
    const std::size_t ac = t.column("alpha");
    check_grid(t, xc, grid, "strategy file");
    std::vector<double> values(t.rows.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] = t.rows[i][ac];
    }
    return Strategy::from_values(grid, std::move(values), controls);
}

ValueFunction read_value_function(const std::filesystem::path& path, const Grid& grid, double rho) {
    const Table t = read_csv(path);
    const std::size_t xc = t.column("x");
    const std::size_t vc = t.column("v");
    const std::size_t dc = t.column("dv");
    const std::size_t d2c = t.column("d2v");
    check_grid(t, xc, grid, "value file");
    ValueFunction vf{GridFunction(grid), GridFunction(grid), GridFunction(grid), rho};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        vf.v[i] = t.rows[i][vc];
        vf.dv[i] = t.rows[i][dc];
        vf.d2v[i] = t.rows[i][d2c];
        if (!std::isfinite(vf.v[i]) || !std::isfinite(vf.dv[i]) || !std::isfinite(vf.d2v[i])) {
            throw ConfigError("value file: non-finite entry in row " + std::to_string(i + 1));
        }
    }
    return vf;
}

nlohmann::ordered_json to_json(const IterationReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["rho"] = r.rho;
    j["rho_decrease"] = optional_json(r.rho_decrease);
    j["bellman_residual_sup"] = r.bellman_residual_sup;
    j["strategy_change_fraction"] = r.strategy_change_fraction;
    j["beta"] = optional_json(r.beta);
    return j;
}

nlohmann::ordered_json to_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    j["rho_tilde"] = r.rho_tilde;
    j["converged"] = r.converged;
    j["reason"] = to_string(r.reason);
    j["rho_tol_met"] = r.rho_tol_met;
    j["residual_tol_met"] = r.residual_tol_met;
    j["n_iterations"] = r.iterations.size();
    j["warnings"] = r.warnings;
    auto& its = j["iterations"] = nlohmann::ordered_json::array();
    for (const auto& it : r.iterations) {
        its.push_back(to_json(it));
    }
    const Grid& g = r.strategy.grid();
    j["x"] = g.nodes();
    j["strategy"] = r.strategy.values();
    j["density"] = r.evaluation.density.density.values;
    j["v"] = r.evaluation.value.v.values;
    j["dv"] = r.evaluation.value.dv.values;
    j["d2v"] = r.evaluation.value.d2v.values;
    return j;
}

nlohmann::ordered_json to_json(const ValidationReport& r) {
    nlohmann::ordered_json j;
    j["ok"] = r.ok();
    j["sigma_bound"] = std::isfinite(r.sigma_bound) ? nlohmann::ordered_json(r.sigma_bound)
                                                    : nlohmann::ordered_json(nullptr);
    auto& checks = j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["severity"] = c.severity == Severity::Fatal ? "fatal" : "warning";
        cj["passed"] = c.passed;
        cj["detail"] = c.detail;
        cj["witness_u"] = optional_json(c.witness_u);
        cj["witness_x"] = optional_json(c.witness_x);
        checks.push_back(std::move(cj));
    }
    return j;
}

nlohmann::ordered_json to_json(const VerificationReport& r) {
    nlohmann::ordered_json j;
    j["verified"] = r.verified;
    j["residual_ok"] = r.residual_ok;
    j["sup_core_full"] = r.residual.sup_core;
    j["sup_core_reduced"] = r.residual.reduced_sup_core;
    j["sup_full"] = r.residual.sup_full;
    j["forms_consistent"] = r.residual.forms_consistent;
    j["envelope_exponent"] =
        r.envelope_exponent ? nlohmann::ordered_json(*r.envelope_exponent) : nlohmann::ordered_json(nullptr);
    j["lipschitz_d2v"] = r.lipschitz_d2v;
    return j;
}

nlohmann::ordered_json to_json(const CrossCheckReport& r, const SimConfig& cfg) {
    nlohmann::ordered_json j;
    j["passed"] = r.passed;
    j["rho_quadrature"] = r.rho_quadrature;
    j["mc_mean"] = r.mc.mean;
    j["mc_std_error"] = r.mc.std_error;
    j["n_batches"] = r.mc.n_batches;
    j["deviation"] = r.deviation;
    j["bias_allowance"] = r.bias_allowance;
    j["fraction_time_outside_core"] = r.mc.fraction_time_outside_core;
    j["fourth_moment"] = r.mc.fourth_moment;
    nlohmann::ordered_json c;
    c["time_step"] = cfg.time_step;
    c["horizon"] = cfg.horizon;
    c["burn_in"] = cfg.burn_in;
    c["n_paths"] = cfg.n_paths;
    c["seed"] = cfg.seed;
    c["reflect_at_boundary"] = cfg.reflect_at_boundary;
    c["x0"] = cfg.x0;
    c["bias_coefficient"] = cfg.bias_coefficient;
    j["sim_config"] = std::move(c);
    return j;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) {
        throw ConfigError("cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

}  // namespace ergodic::io
