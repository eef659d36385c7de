#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "plapmem/assembly.hpp"
#include "plapmem/banded.hpp"
#include "plapmem/memory.hpp"
#include "plapmem/mesh_basis.hpp"
#include "plapmem/problem.hpp"

namespace plapmem {

/// Fixed-point linearization of the Crank-Nicolson step.
///
/// A keeps the new iterate inside the p-Laplacian term (diffusivity lagged);
/// B evaluates the whole flux at the previous iterate.
enum class Scheme { Auto, A, B };

struct SolverConfig {
    double p = 2.0;
    double delta = 0.01;
    int steps = 1;
    /// Threshold on both squared mass-norm increments.
    double tol = 1e-9;
    int max_iter = 100;
    Scheme scheme = Scheme::Auto;
    /// Negative selects the default: 0 for p >= 2, kDefaultEpsilon below.
    double epsilon = -1.0;
    /// 0 selects r + 2.
    int quadrature_points = 0;
    QuadratureMode quadrature_mode = QuadratureMode::Consistent;

    /// Throws ConfigError on non-finite or out-of-range fields.
    void validate() const;
};

/// Auto picks A for p >= 3 and for p = 2 (where A is one linear solve), B
/// otherwise. Either scheme may be requested explicitly for any p > 1.
/// Throws ConfigError for p <= 1.
Scheme select_scheme(double p, Scheme requested = Scheme::Auto);

/// Regularization actually used: eps >= 0 as given, defaults when negative, and
/// never zero for p < 2.
double resolve_epsilon(double p, double requested);

/// Immutable per-run data shared by every step.
class StepContext {
public:
    StepContext(const Mesh1D& mesh, const ProblemSpec& problem, const SolverConfig& cfg);

    const Mesh1D& mesh() const noexcept { return mesh_; }
    const QuadratureRule& quadrature() const noexcept { return quad_; }
    const BasisTable& table() const noexcept { return table_; }
    const BandedSymMatrix& mass() const noexcept { return mass_; }
    const BandedCholesky& mass_factor() const noexcept { return mass_factor_; }
    const FluxParams& flux() const noexcept { return flux_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }
    const SpaceTimeFunction& forcing() const noexcept { return forcing_; }
    const SolverConfig& config() const noexcept { return cfg_; }
    Scheme scheme() const noexcept { return scheme_; }

    /// A evaluated at the given linearization state.
    BandedSymMatrix plap(std::span<const double> state) const;

private:
    Mesh1D mesh_;
    SolverConfig cfg_;
    Scheme scheme_;
    FluxParams flux_;
    QuadratureRule quad_;
    BasisTable table_;
    BandedSymMatrix mass_;
    BandedCholesky mass_factor_;
    KernelSpec kernel_;
    SpaceTimeFunction forcing_;
};

/// First block of one fixed-point iteration:
///   uu * U_{n+1} - delta * M * Y_{n+1} = rhs.
struct BlockSystem {
    BandedSymMatrix uu;
    std::vector<double> rhs;
};

/// Iterates start from the last accepted level: (U^(k), Y^(k)).
std::pair<std::vector<double>, std::vector<double>> fixed_point_init(const StateHistory& hist);

/// Scheme A: (2M + delta A~) U - delta M Y = (2M - delta A~) U^k + delta M Y^k
/// + 2 delta F^{k+1/2}, with A~ at (iterate + U^k) / 2. Requires F^{k+1/2} in hist.
BlockSystem iteration_system_A(std::span<const double> iterate, const StateHistory& hist,
                               const StepContext& ctx);

/// Scheme B: 2M U - delta M Y = -delta A~ (iterate + U^k) + 2M U^k + delta M Y^k
/// + 2 delta F^{k+1/2}, same A~.
BlockSystem iteration_system_B(std::span<const double> iterate, const StateHistory& hist,
                               const StepContext& ctx);

/// Solves the first block together with alpha M Y + beta M U = R by
/// eliminating Y. Throws IllPosedStepError when |alpha| < 1e-12 and
/// LinearSolveError on a singular reduced matrix.
std::pair<std::vector<double>, std::vector<double>> solve_block(const BlockSystem& system,
                                                                const BandedSymMatrix& mass,
                                                                const BandedCholesky& mass_factor,
                                                                const MemoryEquation& memory,
                                                                double delta);

/// One Crank-Nicolson step t_k -> t_{k+1}: pushes F(t_{k+1/2}) if absent,
/// iterates to tolerance and appends the converged level to hist.
/// Throws DivergenceError after max_iter iterations without convergence.
StepDiagnostics cn_step(StateHistory& hist, const StepContext& ctx);

/// Called after every accepted level with (level, history).
using StepObserver = std::function<void(int, const StateHistory&)>;

/// Full run from U^(0) = interpolant of u0, Y^(0) = 0 through cfg.steps steps.
/// Errors carry the failing step index.
RunOutput march(const ProblemSpec& problem, const Mesh1D& mesh, const SolverConfig& cfg,
                const StepObserver& observer = {});

}  // namespace plapmem
