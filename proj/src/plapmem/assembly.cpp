#include "plapmem/assembly.hpp"

#include <cmath>
#include <iostream>
#include <string>

#include "plapmem/errors.hpp"

namespace plapmem {

void FluxParams::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ConfigError("exponent p must be a finite value > 1");
    }
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be finite and >= 0");
    }
    if (p < 2.0 && epsilon == 0.0) {
        throw ConfigError("p < 2 requires epsilon > 0");
    }
}

double flux_coefficient(double xi, const FluxParams& params) {
    const double e = params.p - 2.0;
    if (e == 0.0) {
        return 1.0;
    }
    if (params.epsilon == 0.0) {
        const double ax = std::abs(xi);
        if (e == 1.0) {
            return ax;
        }
        if (e == 2.0) {
            return ax * ax;
        }
        return std::pow(ax, e);
    }
    const double s = xi * xi + params.epsilon * params.epsilon;
    if (e == 2.0) {
        return s;
    }
    return std::pow(s, 0.5 * e);
}

double flux(double xi, const FluxParams& params) { return flux_coefficient(xi, params) * xi; }

namespace {

// Interior index of global DOF g, or -1 on the boundary.
inline long interior_index(const Mesh1D& mesh, std::size_t g) {
    if (g == 0 || g + 1 == mesh.num_dofs()) {
        return -1;
    }
    return static_cast<long>(g) - 1;
}

}  // namespace

BandedSymMatrix assemble_mass(const Mesh1D& mesh, const QuadratureRule& quad, DofScope scope) {
    const bool full = scope == DofScope::Full;
    const auto r = static_cast<std::size_t>(mesh.degree());
    BandedSymMatrix m(full ? mesh.num_dofs() : mesh.num_interior(), r);
    const BasisTable table = tabulate(mesh.basis(), quad);
    const double h = mesh.h();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        for (std::size_t i = 0; i <= r; ++i) {
            const std::size_t gi = mesh.global_dof(e, static_cast<int>(i));
            const long ii = full ? static_cast<long>(gi) : interior_index(mesh, gi);
            if (ii < 0) {
                continue;
            }
            for (std::size_t j = 0; j <= i; ++j) {
                const std::size_t gj = mesh.global_dof(e, static_cast<int>(j));
                const long jj = full ? static_cast<long>(gj) : interior_index(mesh, gj);
                if (jj < 0) {
                    continue;
                }
                double s = 0.0;
                for (std::size_t k = 0; k < table.num_points; ++k) {
                    s += quad.weights[k] * table.value(k, i) * table.value(k, j);
                }
                m.add(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj), s * h);
            }
        }
    }
    return m;
}

void assemble_plap_into(const Mesh1D& mesh, std::span<const double> w, const FluxParams& params,
                        const QuadratureRule& quad, const BasisTable& table,
                        BandedSymMatrix& out) {
    const auto r = static_cast<std::size_t>(mesh.degree());
    out.fill(0.0);
    const double inv_h = 1.0 / mesh.h();
    double local[kMaxDegree + 1];
    double coef[kMaxQuadraturePoints];
    for (int e = 0; e < mesh.num_elements(); ++e) {
        gather_element(mesh, w, e, std::span<double>(local, r + 1));
        for (std::size_t k = 0; k < table.num_points; ++k) {
            double grad = 0.0;
            for (std::size_t l = 0; l <= r; ++l) {
                grad += local[l] * table.derivative(k, l);
            }
            grad *= inv_h;
            // d/dx phi_i d/dx phi_j dx = dphi_i dphi_j / h dxi
            coef[k] = quad.weights[k] * flux_coefficient(grad, params) * inv_h;
        }
        for (std::size_t i = 0; i <= r; ++i) {
            const long ii = interior_index(mesh, mesh.global_dof(e, static_cast<int>(i)));
            if (ii < 0) {
                continue;
            }
            for (std::size_t j = 0; j <= i; ++j) {
                const long jj = interior_index(mesh, mesh.global_dof(e, static_cast<int>(j)));
                if (jj < 0) {
                    continue;
                }
                double s = 0.0;
                for (std::size_t k = 0; k < table.num_points; ++k) {
                    s += coef[k] * table.derivative(k, i) * table.derivative(k, j);
                }
                out.add(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj), s);
            }
        }
    }
}

BandedSymMatrix assemble_plap(const Mesh1D& mesh, std::span<const double> w,
                              const FluxParams& params, const QuadratureRule& quad) {
    params.validate();
    if (w.size() != mesh.num_dofs() && w.size() != mesh.num_interior()) {
        throw OutOfRangeError("linearization state has the wrong length");
    }
    BandedSymMatrix a(mesh.num_interior(), static_cast<std::size_t>(mesh.degree()));
    assemble_plap_into(mesh, w, params, quad, tabulate(mesh.basis(), quad), a);
    return a;
}

std::vector<double> assemble_load(const Mesh1D& mesh, const SpaceTimeFunction& f, double t,
                                  const QuadratureRule& quad) {
    std::vector<double> load(mesh.num_interior(), 0.0);
    const BasisTable table = tabulate(mesh.basis(), quad);
    const auto r = static_cast<std::size_t>(mesh.degree());
    const double h = mesh.h();
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const double left = mesh.element_left(e);
        for (std::size_t k = 0; k < table.num_points; ++k) {
            const double x = left + h * quad.points[k];
            const double fx = f(x, t);
            if (!std::isfinite(fx)) {
                throw NumericInputError("forcing is not finite at x=" + std::to_string(x) +
                                        ", t=" + std::to_string(t));
            }
            const double wf = quad.weights[k] * h * fx;
            for (std::size_t i = 0; i <= r; ++i) {
                const long ii = interior_index(mesh, mesh.global_dof(e, static_cast<int>(i)));
                if (ii >= 0) {
                    load[static_cast<std::size_t>(ii)] += wf * table.value(k, i);
                }
            }
        }
    }
    return load;
}

std::vector<double> interpolate(const Mesh1D& mesh, const SpaceFunction& u0) {
    const double left = u0(mesh.a());
    const double right = u0(mesh.b());
    if (std::abs(left) > 1e-12 || std::abs(right) > 1e-12) {
        std::clog << "warning: initial datum does not vanish on the boundary (u0(a)=" << left
                  << ", u0(b)=" << right << "); boundary values are dropped\n";
    }
    const auto nodes = mesh.interior_nodes();
    std::vector<double> values(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        values[i] = u0(nodes[i]);
    }
    return values;
}

}  // namespace plapmem
