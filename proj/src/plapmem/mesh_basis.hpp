#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace plapmem {

inline constexpr int kMaxDegree = 6;
inline constexpr int kMaxQuadraturePoints = 16;

/// Gauss-Legendre rule mapped to the reference interval [0,1].
struct QuadratureRule {
    std::vector<double> points;
    std::vector<double> weights;

    std::size_t size() const noexcept { return points.size(); }
};

/// q-point Gauss-Legendre rule on [0,1]; exact for polynomials of degree 2q-1.
/// Throws OutOfRangeError unless 1 <= q <= 16.
QuadratureRule gauss_legendre(int q);

/// Same rule affinely mapped to [lo, hi].
QuadratureRule gauss_legendre(int q, double lo, double hi);

/// Lagrange polynomials of degree r on equispaced nodes of [0,1].
class ReferenceBasis {
public:
    explicit ReferenceBasis(int degree);

    int degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const double> nodes() const noexcept { return nodes_; }

    double value(int j, double xi) const;
    double derivative(int j, double xi) const;

private:
    int degree_;
    std::vector<double> nodes_;
    std::vector<double> denominators_;
};

/// Checked evaluation: order 0 is the value, order 1 the first derivative.
/// Throws OutOfRangeError for j outside [0,r], xi outside [0,1] or a bad order.
double basis_eval(const ReferenceBasis& basis, int j, double xi, int order);

/// Basis values and derivatives tabulated at the points of a quadrature rule.
struct BasisTable {
    std::size_t num_points = 0;
    std::size_t num_basis = 0;
    std::vector<double> phi;   // [point * num_basis + j]
    std::vector<double> dphi;  // reference derivative d/dxi

    double value(std::size_t point, std::size_t j) const { return phi[point * num_basis + j]; }
    double derivative(std::size_t point, std::size_t j) const {
        return dphi[point * num_basis + j];
    }
};

BasisTable tabulate(const ReferenceBasis& basis, const QuadratureRule& rule);

/// Uniform partition of [a,b] into m elements carrying degree-r Lagrange nodes.
///
/// Global DOF g sits at a + (b-a) g / (m r); element e owns DOFs e*r .. e*r + r.
/// Interior DOFs exclude the two boundary nodes and are numbered g - 1.
class Mesh1D {
public:
    Mesh1D(double a, double b, int elements, int degree);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    int num_elements() const noexcept { return elements_; }
    int degree() const noexcept { return basis_.degree(); }
    double h() const noexcept { return h_; }

    std::size_t num_dofs() const noexcept { return nodes_.size(); }
    std::size_t num_interior() const noexcept { return nodes_.size() - 2; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    /// Coordinates of the interior DOFs, in interior numbering.
    std::span<const double> interior_nodes() const noexcept {
        return std::span<const double>(nodes_).subspan(1, nodes_.size() - 2);
    }

    double element_left(int e) const;
    double element_right(int e) const { return element_left(e + 1); }
    std::size_t global_dof(int e, int local) const {
        return static_cast<std::size_t>(e * degree() + local);
    }

    /// Element containing x and the reference coordinate within it.
    /// Points on an inner element boundary resolve to the left element.
    std::pair<int, double> locate(double x) const;

    const ReferenceBasis& basis() const noexcept { return basis_; }

private:
    double a_;
    double b_;
    int elements_;
    double h_;
    ReferenceBasis basis_;
    std::vector<double> nodes_;
    std::vector<double> breaks_;
};

/// Throws ConfigError on m < 1, r < 1, r > kMaxDegree or b <= a (as does the
/// Mesh1D constructor).
Mesh1D build_uniform_mesh(double a, double b, int m, int r);

/// Value (order 0) or derivative (order 1) of the finite-element function with
/// the given coefficients. Accepts either a full DOF vector or an interior one
/// (boundary values then taken as zero).
double eval_fe(const Mesh1D& mesh, std::span<const double> coeffs, double x, int order);

/// Gathers the r+1 element-local coefficients of a full or interior vector.
/// Throws OutOfRangeError on a vector of neither length or a bad element.
void gather_element(const Mesh1D& mesh, std::span<const double> coeffs, int element,
                    std::span<double> local);

}  // namespace plapmem
