#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "ergodic/density.hpp"
#include "ergodic/hjb.hpp"
#include "ergodic/howard.hpp"
#include "ergodic/mcsim.hpp"
#include "ergodic/poisson.hpp"

namespace ergodic::io {

/// Shortest-lossless decimal form used in every table: 17 significant digits.
std::string format_double(double v);

/// Header plus numeric rows; every row has header.size() entries.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Index of a named column; throws ConfigError if absent.
    std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const Table& table);

/// Throws ConfigError on a missing file, ragged row or non-numeric cell.
Table read_csv(const std::filesystem::path& path);

Table density_table(const Strategy& alpha, const InvariantDensity& d);
Table strategy_table(const Strategy& alpha);
/// Columns x, v, dv, d2v, residual.
Table value_table(const ValueFunction& vf, const GridFunction& residual);
Table iterations_table(const std::vector<IterationReport>& iterations);
Table bellman_table(const BellmanResidual& r);

/// Reads x and alpha columns; x must match the grid nodes to 1e-9.
Strategy read_strategy(const std::filesystem::path& path, const Grid& grid,
                       const ControlSet& controls);

/// Reads x, v, dv, d2v columns into a ValueFunction carrying `rho`.
ValueFunction read_value_function(const std::filesystem::path& path, const Grid& grid, double rho);

nlohmann::ordered_json to_json(const IterationReport& r);
nlohmann::ordered_json to_json(const SolveResult& r);
nlohmann::ordered_json to_json(const ValidationReport& r);
nlohmann::ordered_json to_json(const VerificationReport& r);
nlohmann::ordered_json to_json(const CrossCheckReport& r, const SimConfig& cfg);

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j);

}  // namespace ergodic::io
