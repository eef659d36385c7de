#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "plapmem/assembly.hpp"
#include "plapmem/memory.hpp"
#include "plapmem/mesh_basis.hpp"

namespace plapmem {

/// u_t - Delta_p u = int_0^t g(t-s) Delta_p u(s) ds + f on (a,b) x (0,T],
/// u = 0 on the boundary, u(.,0) = u0.
struct ProblemSpec {
    double a = 0.0;
    double b = 1.0;
    double T = 1.0;
    double p = 2.0;
    KernelSpec kernel = KernelSpec::exponential(0.0);
    SpaceFunction u0 = [](double) { return 0.0; };
    SpaceTimeFunction f = [](double, double) { return 0.0; };
    /// Optional closed forms of u and of the memory term y, for error tables.
    SpaceTimeFunction exact_u;
    SpaceTimeFunction exact_y;

    /// Throws ConfigError on T <= 0, p <= 1, b <= a, missing callables or a
    /// u0 that does not vanish at a and b.
    void validate() const;
};

/// Per-step fixed-point record.
struct StepDiagnostics {
    int iterations = 0;
    /// Final squared increments in the mass norm.
    double increment_u = 0.0;
    double increment_y = 0.0;
    /// Squared U increments of every iteration, in order.
    std::vector<double> increments_u;
    /// increments_u[n] / increments_u[n-1] for n >= 1.
    std::vector<double> ratios;
};

using Gap = std::pair<double, double>;

struct SupportSample {
    double t = 0.0;
    std::optional<Gap> gap;
};

/// L2 errors at T, integrated with the 16-point Gauss rule on every element
/// whatever quadrature the solver used.
struct ErrorSummary {
    double l2_u = 0.0;
    double l2_y = 0.0;
};

/// Everything a march produces. Vectors are interior-DOF coefficients.
struct RunOutput {
    Mesh1D mesh;
    double delta = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> u;
    std::vector<std::vector<double>> y;
    /// b(t_k) = int U_h(x, t_k)^2 dx
    std::vector<double> energy;
    /// diagnostics[k] belongs to the step t_k -> t_{k+1}.
    std::vector<StepDiagnostics> diagnostics;
    /// Gap around the domain midpoint, filled by the drivers that track fronts.
    std::vector<SupportSample> support;
    std::optional<ErrorSummary> errors;

    explicit RunOutput(Mesh1D m) : mesh(std::move(m)) {}
    std::size_t num_levels() const noexcept { return times.size(); }
};

}  // namespace plapmem
