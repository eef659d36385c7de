#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "plapmem/config.hpp"
#include "plapmem/problem.hpp"

namespace plapmem {

struct ConvergenceRow;

/// Shortest decimal that parses back to the same double.
std::string format_double(double v);

/// Levels whose time is nearest to each requested time, deduplicated and
/// ascending; every level when `times` is empty.
std::vector<std::size_t> snapshot_levels(const RunOutput& run, std::span<const double> times);

/// Writes snapshots.csv, energy.csv, support.csv, diagnostics.csv and the
/// config echo config.json into `dir` (created if needed). Throws IoError.
void write_outputs(const RunOutput& run, const RunConfig& config,
                   const std::filesystem::path& dir);

/// convergence.csv with columns p,r,h,delta,err_u,err_y,order_u,order_y.
/// Missing values are left empty. Throws IoError.
void write_convergence(const std::vector<ConvergenceRow>& rows,
                       const std::filesystem::path& file);

/// Writes `contents` to `file`, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& file, const std::string& contents);

}  // namespace plapmem
