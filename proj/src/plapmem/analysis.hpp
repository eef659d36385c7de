#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "plapmem/assembly.hpp"
#include "plapmem/mesh_basis.hpp"
#include "plapmem/problem.hpp"

namespace plapmem {

/// (int (exact - U_h)^2)^{1/2} by element-wise Gauss quadrature.
double l2_error(const Mesh1D& mesh, std::span<const double> coeffs, const SpaceFunction& exact,
                const QuadratureRule& quad);

/// b = int U_h^2 = U^T M U (boundary values zero).
double energy(const Mesh1D& mesh, std::span<const double> coeffs);
double energy(const BandedSymMatrix& mass, std::span<const double> coeffs);

/// order_i = log(e_i / e_{i+1}) / log(s_i / s_{i+1}). Throws OutOfRangeError on
/// mismatched or short inputs and non-positive entries.
std::vector<double> convergence_orders(std::span<const double> errors,
                                       std::span<const double> steps);

/// Least-squares slope of log(error) against log(step).
double fitted_order(std::span<const double> errors, std::span<const double> steps);

/// Largest run of contiguous nodes around `center` where |U_h| < eta, reported
/// as the coordinates of its outermost nodes. Boundary nodes count as zero.
/// Empty when the node nearest to `center` has |U_h| >= eta.
std::optional<Gap> support_gap(const Mesh1D& mesh, std::span<const double> coeffs, double eta,
                               double center = 0.0);

/// 1e-6 * max |U^(0)|, or 1e-300 for a zero datum.
double default_gap_threshold(std::span<const double> initial);

/// Fills run.support with support_gap at every level.
void track_support(RunOutput& run, double eta, double center = 0.0);

struct Extrema {
    double min = 0.0;
    double max = 0.0;
};

/// Nodal min and max of U at every level, boundary zeros included.
std::vector<Extrema> extrema_series(const RunOutput& run);

/// First level at which either gap endpoint has moved more than one node
/// spacing from its initial position; empty if it never does (or there is no
/// initial gap). The result is exact to within one time step.
std::optional<int> waiting_time_level(const RunOutput& run);

/// ||Pi_h u0||_M + (delta sum_k ||f(., t_{k+1/2})||^2_{L2})^{1/2}
double data_norm_proxy(const ProblemSpec& problem, const Mesh1D& mesh, double delta, int steps);

/// Max over levels of ||U^(k)||_M and ||Y^(k)||_M.
std::pair<double, double> max_state_norms(const RunOutput& run);

/// psi(x) = d/dx (|phi'|^{p-2} phi') with phi = (x(1-x))^2.
double manufactured_psi(double x, double p);

/// Manufactured problem on (0,1): u = (x(1-x))^2 e^{-t}, g = lambda e^{-xi},
/// forcing chosen so that u is exact; the exact memory term is supplied too.
ProblemSpec manufactured_example1(double p, double lambda, double T = 0.1);

}  // namespace plapmem
