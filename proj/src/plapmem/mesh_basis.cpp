#include "plapmem/mesh_basis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "plapmem/errors.hpp"

namespace plapmem {

QuadratureRule gauss_legendre(int q) {
    if (q < 1 || q > kMaxQuadraturePoints) {
        throw OutOfRangeError("gauss_legendre: point count " + std::to_string(q) +
                              " outside [1, " + std::to_string(kMaxQuadraturePoints) + "]");
    }
    // Newton on P_q with the usual Chebyshev-like initial guesses, computed on
    // [-1,1] and mapped to [0,1] afterwards.
    QuadratureRule rule;
    rule.points.resize(static_cast<std::size_t>(q));
    rule.weights.resize(static_cast<std::size_t>(q));
    const int half = (q + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = 0.0;
            for (int j = 1; j <= q; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = q * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(q - 1 - i);
        rule.points[lo] = 0.5 * (1.0 - z);
        rule.points[hi] = 0.5 * (1.0 + z);
        rule.weights[lo] = 0.5 * w;
        rule.weights[hi] = 0.5 * w;
    }
    if (q % 2 == 1) {
        rule.points[static_cast<std::size_t>(q / 2)] = 0.5;
    }
    return rule;
}

QuadratureRule gauss_legendre(int q, double lo, double hi) {
    QuadratureRule rule = gauss_legendre(q);
    const double len = hi - lo;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        rule.points[i] = lo + len * rule.points[i];
        rule.weights[i] *= len;
    }
    return rule;
}

ReferenceBasis::ReferenceBasis(int degree) : degree_(degree) {
    if (degree < 1 || degree > kMaxDegree) {
        throw ConfigError("polynomial degree " + std::to_string(degree) + " outside [1, " +
                          std::to_string(kMaxDegree) + "]");
    }
    nodes_.resize(static_cast<std::size_t>(degree + 1));
    for (int i = 0; i <= degree; ++i) {
        nodes_[static_cast<std::size_t>(i)] = static_cast<double>(i) / degree;
    }
    denominators_.assign(nodes_.size(), 1.0);
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        for (std::size_t m = 0; m < nodes_.size(); ++m) {
            if (m != j) {
                denominators_[j] *= nodes_[j] - nodes_[m];
            }
        }
    }
}

double ReferenceBasis::value(int j, double xi) const {
    const auto jj = static_cast<std::size_t>(j);
    double num = 1.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
        if (m != jj) {
            num *= xi - nodes_[m];
        }
    }
    return num / denominators_[jj];
}

double ReferenceBasis::derivative(int j, double xi) const {
    const auto jj = static_cast<std::size_t>(j);
    double sum = 0.0;
    for (std::size_t m = 0; m < nodes_.size(); ++m) {
        if (m == jj) {
            continue;
        }
        double prod = 1.0;
        for (std::size_t l = 0; l < nodes_.size(); ++l) {
            if (l != jj && l != m) {
                prod *= xi - nodes_[l];
            }
        }
        sum += prod;
    }
    return sum / denominators_[jj];
}

double basis_eval(const ReferenceBasis& basis, int j, double xi, int order) {
    if (j < 0 || j > basis.degree()) {
        throw OutOfRangeError("basis index " + std::to_string(j) + " outside [0, " +
                              std::to_string(basis.degree()) + "]");
    }
    if (!(xi >= 0.0 && xi <= 1.0)) {
        throw OutOfRangeError("reference coordinate outside [0,1]");
    }
    switch (order) {
        case 0:
            return basis.value(j, xi);
        case 1:
            return basis.derivative(j, xi);
        default:
            throw OutOfRangeError("derivative order must be 0 or 1");
    }
}

BasisTable tabulate(const ReferenceBasis& basis, const QuadratureRule& rule) {
    BasisTable table;
    table.num_points = rule.size();
    table.num_basis = basis.size();
    table.phi.resize(table.num_points * table.num_basis);
    table.dphi.resize(table.num_points * table.num_basis);
    for (std::size_t k = 0; k < table.num_points; ++k) {
        for (std::size_t j = 0; j < table.num_basis; ++j) {
            table.phi[k * table.num_basis + j] = basis.value(static_cast<int>(j), rule.points[k]);
            table.dphi[k * table.num_basis + j] =
                basis.derivative(static_cast<int>(j), rule.points[k]);
        }
    }
    return table;
}

namespace {

int checked_elements(double a, double b, int m) {
    if (m < 1) {
        throw ConfigError("element count must be at least 1");
    }
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("domain requires finite endpoints with b > a");
    }
    return m;
}

}  // namespace

Mesh1D::Mesh1D(double a, double b, int elements, int degree)
    : a_(a),
      b_(b),
      elements_(checked_elements(a, b, elements)),
      h_((b - a) / elements),
      basis_(degree) {
    const int n = elements * degree;
    nodes_.resize(static_cast<std::size_t>(n + 1));
    for (int g = 0; g <= n; ++g) {
        nodes_[static_cast<std::size_t>(g)] = a + (b - a) * static_cast<double>(g) / n;
    }
    nodes_.back() = b;
    breaks_.resize(static_cast<std::size_t>(elements + 1));
    for (int e = 0; e <= elements; ++e) {
        breaks_[static_cast<std::size_t>(e)] = a + (b - a) * static_cast<double>(e) / elements;
    }
    breaks_.back() = b;
}

double Mesh1D::element_left(int e) const { return breaks_.at(static_cast<std::size_t>(e)); }

std::pair<int, double> Mesh1D::locate(double x) const {
    if (!(x >= a_ && x <= b_)) {
        throw OutOfRangeError("coordinate " + std::to_string(x) + " outside [" +
                              std::to_string(a_) + ", " + std::to_string(b_) + "]");
    }
    const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    int e = static_cast<int>(it - breaks_.begin()) - 1;
    e = std::clamp(e, 0, elements_ - 1);
    const double left = breaks_[static_cast<std::size_t>(e)];
    const double right = breaks_[static_cast<std::size_t>(e + 1)];
    const double xi = std::clamp((x - left) / (right - left), 0.0, 1.0);
    return {e, xi};
}

Mesh1D build_uniform_mesh(double a, double b, int m, int r) { return Mesh1D(a, b, m, r); }

void gather_element(const Mesh1D& mesh, std::span<const double> coeffs, int element,
                    std::span<double> local) {
    if (coeffs.size() != mesh.num_dofs() && coeffs.size() != mesh.num_interior()) {
        throw OutOfRangeError("coefficient vector length matches neither the full nor the interior DOF count");
    }
    if (element < 0 || element >= mesh.num_elements() ||
        local.size() < static_cast<std::size_t>(mesh.degree() + 1)) {
        throw OutOfRangeError("element " + std::to_string(element) + " or local buffer out of range");
    }
    const bool full = coeffs.size() == mesh.num_dofs();
    const std::size_t last = mesh.num_dofs() - 1;
    for (int l = 0; l <= mesh.degree(); ++l) {
        const std::size_t g = mesh.global_dof(element, l);
        double v = 0.0;
        if (full) {
            v = coeffs[g];
        } else if (g != 0 && g != last) {
            v = coeffs[g - 1];
        }
        local[static_cast<std::size_t>(l)] = v;
    }
}

double eval_fe(const Mesh1D& mesh, std::span<const double> coeffs, double x, int order) {
    if (coeffs.size() != mesh.num_dofs() && coeffs.size() != mesh.num_interior()) {
        throw OutOfRangeError("coefficient vector length matches neither the full nor the interior DOF count");
    }
    if (order != 0 && order != 1) {
        throw OutOfRangeError("derivative order must be 0 or 1");
    }
    const auto [e, xi] = mesh.locate(x);
    double local[kMaxDegree + 1];
    gather_element(mesh, coeffs, e, std::span<double>(local, static_cast<std::size_t>(mesh.degree() + 1)));
    const ReferenceBasis& basis = mesh.basis();
    double sum = 0.0;
    for (int j = 0; j <= mesh.degree(); ++j) {
        sum += local[j] * (order == 0 ? basis.value(j, xi) : basis.derivative(j, xi));
    }
    return order == 0 ? sum : sum / mesh.h();
}

}  // namespace plapmem
