#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "plapmem/banded.hpp"

namespace plapmem {

/// Memory kernel g and its derivative g'.
struct KernelSpec {
    std::function<double(double)> g;
    std::function<double(double)> gp;
    /// Amplitude of the built-in family; informational for user kernels.
    double lambda = 0.0;

    /// g(xi) = lambda e^{-xi}, g'(xi) = -lambda e^{-xi}.
    static KernelSpec exponential(double lambda);
    /// g = c, g' = 0.
    static KernelSpec constant(double c);
};

/// How the forcing history integral treats its final half-node.
///
/// Consistent is the composite trapezoid over t_0, t_{1/2}, ..., t_{k+1/2}.
/// Literal keeps the printed upper summation limit m = k, which adds a second
/// full-weight copy of the t_{k+1/2} node.
enum class QuadratureMode { Consistent, Literal };

/// One quadrature term: weight * kernel(lag) applied to history entry `index`.
///
/// For the state families (U, Y) the index is the time level j, and index k+1
/// marks the unknown new level. For the forcing family index 0 is F(t_0) and
/// index m+1 is F(t_{m+1/2}).
struct VolterraTerm {
    std::size_t index;
    double lag;
    double weight;
};

/// Trapezoid terms for int_0^{t_{k+1/2}} kernel(t_{k+1/2} - s) v(s) ds on the
/// state nodes, with v(t_{k+1/2}) replaced by the average of levels k and k+1.
std::vector<VolterraTerm> volterra_weights(int k, double delta);

/// Trapezoid terms for the same integral on the forcing half-nodes.
std::vector<VolterraTerm> load_weights(int k, double delta,
                                       QuadratureMode mode = QuadratureMode::Consistent);

/// Past coefficient vectors U^(0..k), Y^(0..k) and the forcing loads
/// F(t_0), F(t_{1/2}), ..., all on interior DOFs.
class StateHistory {
public:
    /// Starts at level 0 with U^(0) = u0, Y^(0) = 0 and F(t_0) = load0.
    StateHistory(double delta, int steps, std::vector<double> u0, std::vector<double> load0);

    double delta() const noexcept { return delta_; }
    int steps() const noexcept { return steps_; }
    /// Current level k.
    int step() const noexcept { return static_cast<int>(u_.size()) - 1; }
    std::size_t dim() const noexcept { return dim_; }
    double time(double level) const noexcept { return level * delta_; }

    std::span<const double> u(std::size_t level) const { return u_.at(level); }
    std::span<const double> y(std::size_t level) const { return y_.at(level); }
    /// Forcing entry in VolterraTerm numbering.
    std::span<const double> load(std::size_t index) const { return loads_.at(index); }
    std::size_t num_loads() const noexcept { return loads_.size(); }

    /// Appends F(t_{k+1/2}) for the step about to be taken.
    void push_load(std::vector<double> load);
    /// Appends level k+1. Throws OutOfRangeError past the final step.
    void push_state(std::vector<double> u, std::vector<double> y);

private:
    double delta_;
    int steps_;
    std::size_t dim_;
    std::vector<std::vector<double>> u_;
    std::vector<std::vector<double>> y_;
    std::vector<std::vector<double>> loads_;
};

/// Known part of a Volterra quadrature plus the scalar multiplying M times the
/// unknown level k+1.
struct VolterraPart {
    std::vector<double> explicit_part;
    double implicit_coeff = 0.0;
};

/// Q_g applied to the Y history.
VolterraPart q_g(const StateHistory& hist, const KernelSpec& kernel, const BandedSymMatrix& mass);
/// Q_{g'} applied to the U history.
VolterraPart q_gp(const StateHistory& hist, const KernelSpec& kernel, const BandedSymMatrix& mass);
/// Forcing history integral I(f). Requires loads through F(t_{k+1/2}).
std::vector<double> i_f(const StateHistory& hist, const KernelSpec& kernel,
                        QuadratureMode mode = QuadratureMode::Consistent);

/// alpha M Y^{k+1} + beta M U^{k+1} = rhs
struct MemoryEquation {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> rhs;
};

/// The discrete memory relation at level k with every history term moved to
/// the right-hand side. Throws IllPosedStepError when |alpha| < 1e-12.
MemoryEquation memory_equation(const StateHistory& hist, const KernelSpec& kernel,
                               const BandedSymMatrix& mass,
                               QuadratureMode mode = QuadratureMode::Consistent);

}  // namespace plapmem
