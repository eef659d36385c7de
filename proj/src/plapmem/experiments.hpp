#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "plapmem/config.hpp"
#include "plapmem/errors.hpp"
#include "plapmem/problem.hpp"

namespace plapmem {

/// 1 - x^4 on [-1,1].
double quartic_datum(double x);

/// 10(x+1)(x+0.5)^2 on [-1,-0.5), 10(1-x)(x-0.5)^2 on (0.5,1], zero between.
double gap_cubic_datum(double x);

/// 100(x+1)(x+0.5)^7 on [-1,-0.5), 100(1-x)(x-0.5)^7 on (0.5,1], zero between.
double gap_septic_datum(double x);

/// Fixed-point tolerance used by the convergence sweeps. The default 1e-9
/// stops after a single linearised solve at small time steps, which floors
/// the error well above the spatial error of cubic elements.
inline constexpr double kSweepTol = 1e-20;

/// Everything one config run produces: the trajectory plus the gap threshold
/// used for support tracking.
struct SolveResult {
    RunConfig config;
    RunOutput run;
    double eta = 0.0;
};

/// Runs a resolved config: march, then support tracking around the domain
/// midpoint with the default threshold.
SolveResult solve(const RunConfig& config);

/// One point of a convergence sweep.
struct ConvergenceRow {
    double p = 0.0;
    int r = 0;
    double h = 0.0;
    double delta = 0.0;
    double err_u = 0.0;
    double err_y = 0.0;
    /// Pairwise order against the previous row of the same (p, r) series.
    std::optional<double> order_u;
    std::optional<double> order_y;
    /// Empty when the run succeeded.
    std::optional<ErrorCode> failure;
};

/// Fills order_u/order_y for consecutive successful rows sharing (p, r).
void fill_orders(std::vector<ConvergenceRow>& rows, bool in_delta);

/// Example-1 runs with the manufactured solution on [0,1], lambda = 1, T = 0.1.
RunConfig example1_config(double p, double lambda, int r, int m, int N);

/// Example-2 runs: quartic datum on [-1,1], h = 0.2, delta = 1e-3, T = 3.
/// p < 2 requests Scheme A.
RunConfig example2_config(double p, double lambda);

/// Example-3/4 runs: gap datum on [-1,1], h = 0.02, delta = 1e-3, r = 1.
RunConfig example34_config(int id, double p, double lambda, int N);

struct ExampleOptions {
    std::optional<double> p;
    std::optional<double> lambda;
    bool parallel = false;
    /// 0 reads PLAPMEM_THREADS, falling back to the hardware concurrency.
    unsigned threads = 0;
};

struct SweepFailure {
    std::string label;
    ErrorCode code = ErrorCode::Config;
    std::string message;
};

struct ExampleReport {
    std::vector<SweepFailure> failures;
};

/// Runs one of the four experiment families, writing each run to its own
/// subdirectory of `out` and the merged tables at the top level. Solver
/// failures of individual runs are collected, not thrown; I/O failures throw.
ExampleReport run_example(int id, const ExampleOptions& options,
                          const std::filesystem::path& out);

/// Thread count from PLAPMEM_THREADS (if a positive integer), else the
/// hardware concurrency, never below 1.
unsigned sweep_threads();

/// Calls task(i) for i in [0, n), on up to `threads` workers when parallel.
/// The first exception thrown by any task is rethrown after all have ended.
void for_each_index(std::size_t n, bool parallel, unsigned threads,
                    const std::function<void(std::size_t)>& task);

}  // namespace plapmem
