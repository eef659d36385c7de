#pragma once

#include <functional>
#include <span>
#include <vector>

#include "plapmem/banded.hpp"
#include "plapmem/mesh_basis.hpp"

namespace plapmem {

using SpaceFunction = std::function<double(double x)>;
using SpaceTimeFunction = std::function<double(double x, double t)>;

/// Exponent and regularization of the flux a(xi) = (xi^2 + eps^2)^((p-2)/2) xi.
struct FluxParams {
    double p = 2.0;
    double epsilon = 0.0;

    /// Throws ConfigError unless p > 1, eps >= 0, and eps > 0 whenever p < 2.
    void validate() const;
};

/// Default regularization applied when p < 2.
inline constexpr double kDefaultEpsilon = 1e-8;

double flux(double xi, const FluxParams& params);

/// Diffusivity (xi^2 + eps^2)^((p-2)/2), i.e. flux(xi) / xi for xi != 0.
double flux_coefficient(double xi, const FluxParams& params);

enum class DofScope { Interior, Full };

/// Mass matrix on interior DOFs (or on all DOFs with DofScope::Full).
BandedSymMatrix assemble_mass(const Mesh1D& mesh, const QuadratureRule& quad,
                              DofScope scope = DofScope::Interior);

/// p-Laplacian matrix A(i,j) = int c(w') phi_i' phi_j' with c = flux_coefficient,
/// on interior DOFs. w is a full or interior coefficient vector.
BandedSymMatrix assemble_plap(const Mesh1D& mesh, std::span<const double> w,
                              const FluxParams& params, const QuadratureRule& quad);

/// Same as above, writing into an existing matrix of matching shape.
void assemble_plap_into(const Mesh1D& mesh, std::span<const double> w, const FluxParams& params,
                        const QuadratureRule& quad, const BasisTable& table,
                        BandedSymMatrix& out);

/// Interior load vector F(i) = int f(x,t) phi_i(x) dx. Throws NumericInputError
/// if f is non-finite at any quadrature point.
std::vector<double> assemble_load(const Mesh1D& mesh, const SpaceTimeFunction& f, double t,
                                  const QuadratureRule& quad);

/// Nodal interpolation onto interior DOFs. Warns on std::clog when u0 does not
/// vanish (to 1e-12) at the domain ends, since those values are dropped.
std::vector<double> interpolate(const Mesh1D& mesh, const SpaceFunction& u0);

}  // namespace plapmem
