#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "plapmem/memory.hpp"
#include "plapmem/mesh_basis.hpp"
#include "plapmem/problem.hpp"
#include "plapmem/stepper.hpp"

namespace plapmem {

/// Initial datum and forcing a run file can select.
enum class ProblemKind {
    /// u = (x(1-x))^2 e^{-t} with matching forcing; domain must be [0,1].
    Manufactured,
    /// u0 = 1 - x^4, f = 0.
    Quartic,
    /// Cubic branches on [-1,-0.5) and (0.5,1], zero in between, f = 0.
    GapCubic,
    /// Same layout with seventh-power branches, f = 0.
    GapSeptic,
};

/// One solver run as described by a JSON file. epsilon < 0, scheme Auto and
/// quadrature_points 0 mean "default"; resolve() and the parsers replace them
/// with the values the solver will actually use.
struct RunConfig {
    double a = 0.0;
    double b = 1.0;
    double T = 0.1;
    double p = 2.0;
    double lambda = 0.0;
    int r = 1;
    int m = 10;
    int N = 100;
    double tol = 1e-9;
    int max_iter = 100;
    double epsilon = -1.0;
    Scheme scheme = Scheme::Auto;
    int quadrature_points = 0;
    QuadratureMode quadrature_mode = QuadratureMode::Consistent;
    ProblemKind problem = ProblemKind::Manufactured;
    /// Levels written to snapshots.csv; empty means every level.
    std::vector<double> snapshot_times;
    std::string output_dir = "out";

    double delta() const noexcept { return T / N; }

    /// Throws ConfigError naming the offending field. Defaults must already be
    /// resolved.
    void validate() const;

    bool operator==(const RunConfig&) const = default;
};

/// Parses and validates a JSON document. Required: p, r, m, N, T. Unknown keys
/// are rejected. Throws ConfigError with the field name on any problem.
RunConfig parse_config_text(std::string_view json);

/// Reads a file and parses it. Unreadable files raise IoError.
RunConfig parse_config(const std::filesystem::path& path);

/// Canonical JSON echo; parse_config_text(config_to_json(c)) == c.
std::string config_to_json(const RunConfig& config);

/// Replaces default markers with concrete values and validates.
RunConfig resolve(RunConfig config);

ProblemSpec make_problem(const RunConfig& config);
Mesh1D make_mesh(const RunConfig& config);
SolverConfig make_solver_config(const RunConfig& config);

std::string_view to_string(Scheme scheme);
std::string_view to_string(QuadratureMode mode);
std::string_view to_string(ProblemKind kind);

}  // namespace plapmem
