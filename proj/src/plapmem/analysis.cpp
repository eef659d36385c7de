#include "plapmem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "plapmem/errors.hpp"

namespace plapmem {

void ProblemSpec::validate() const {
    if (!(b > a) || !std::isfinite(a) || !std::isfinite(b)) {
        throw ConfigError("domain requires finite endpoints with b > a");
    }
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw ConfigError("horizon T must be finite and > 0");
    }
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ConfigError("p must be a finite value > 1");
    }
    if (!kernel.g || !kernel.gp || !u0 || !f) {
        throw ConfigError("problem is missing a kernel, initial datum or forcing");
    }
    if (std::abs(u0(a)) > 1e-12 || std::abs(u0(b)) > 1e-12) {
        throw ConfigError("u0 must vanish at both domain ends");
    }
}

double l2_error(const Mesh1D& mesh, std::span<const double> coeffs, const SpaceFunction& exact,
                const QuadratureRule& quad) {
    const BasisTable table = tabulate(mesh.basis(), quad);
    const auto r = static_cast<std::size_t>(mesh.degree());
    double local[kMaxDegree + 1];
    double sum = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        gather_element(mesh, coeffs, e, std::span<double>(local, r + 1));
        const double left = mesh.element_left(e);
        for (std::size_t k = 0; k < table.num_points; ++k) {
            double uh = 0.0;
            for (std::size_t l = 0; l <= r; ++l) {
                uh += local[l] * table.value(k, l);
            }
            const double d = exact(left + mesh.h() * quad.points[k]) - uh;
            sum += quad.weights[k] * mesh.h() * d * d;
        }
    }
    return std::sqrt(sum);
}

double energy(const BandedSymMatrix& mass, std::span<const double> coeffs) {
    return mass.quadratic_form(coeffs);
}

double energy(const Mesh1D& mesh, std::span<const double> coeffs) {
    const BandedSymMatrix mass = assemble_mass(mesh, gauss_legendre(mesh.degree() + 1));
    if (coeffs.size() == mesh.num_dofs()) {
        return energy(mass, coeffs.subspan(1, mesh.num_interior()));
    }
    return energy(mass, coeffs);
}

namespace {

void check_series(std::span<const double> errors, std::span<const double> steps) {
    if (errors.size() != steps.size() || errors.size() < 2) {
        throw OutOfRangeError("convergence data needs two or more (error, step) pairs");
    }
    for (std::size_t i = 0; i < errors.size(); ++i) {
        if (!(errors[i] > 0.0) || !(steps[i] > 0.0)) {
            throw OutOfRangeError("errors and steps must be positive");
        }
    }
}

}  // namespace

std::vector<double> convergence_orders(std::span<const double> errors,
                                       std::span<const double> steps) {
    check_series(errors, steps);
    std::vector<double> orders(errors.size() - 1);
    for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
        orders[i] = std::log(errors[i] / errors[i + 1]) / std::log(steps[i] / steps[i + 1]);
    }
    return orders;
}

double fitted_order(std::span<const double> errors, std::span<const double> steps) {
    check_series(errors, steps);
    const auto n = static_cast<double>(errors.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < errors.size(); ++i) {
        const double x = std::log(steps[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::optional<Gap> support_gap(const Mesh1D& mesh, std::span<const double> coeffs, double eta,
                               double center) {
    const auto nodes = mesh.nodes();
    const std::size_t n = nodes.size();
    const bool full = coeffs.size() == n;
    auto value = [&](std::size_t g) {
        if (full) {
            return coeffs[g];
        }
        return (g == 0 || g + 1 == n) ? 0.0 : coeffs[g - 1];
    };
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), center);
    std::size_t c = static_cast<std::size_t>(it - nodes.begin());
    if (c == n) {
        c = n - 1;
    } else if (c > 0 && center - nodes[c - 1] < nodes[c] - center) {
        c -= 1;
    }
    if (!(std::abs(value(c)) < eta)) {
        return std::nullopt;
    }
    std::size_t lo = c;
    while (lo > 0 && std::abs(value(lo - 1)) < eta) {
        --lo;
    }
    std::size_t hi = c;
    while (hi + 1 < n && std::abs(value(hi + 1)) < eta) {
        ++hi;
    }
    return Gap{nodes[lo], nodes[hi]};
}

double default_gap_threshold(std::span<const double> initial) {
    double m = 0.0;
    for (double v : initial) {
        m = std::max(m, std::abs(v));
    }
    return m > 0.0 ? 1e-6 * m : 1e-300;
}

void track_support(RunOutput& run, double eta, double center) {
    run.support.clear();
    run.support.reserve(run.num_levels());
    for (std::size_t k = 0; k < run.num_levels(); ++k) {
        run.support.push_back({run.times[k], support_gap(run.mesh, run.u[k], eta, center)});
    }
}

std::vector<Extrema> extrema_series(const RunOutput& run) {
    std::vector<Extrema> out;
    out.reserve(run.u.size());
    for (const auto& u : run.u) {
        Extrema e;  // boundary nodes contribute 0
        for (double v : u) {
            e.min = std::min(e.min, v);
            e.max = std::max(e.max, v);
        }
        out.push_back(e);
    }
    return out;
}

std::optional<int> waiting_time_level(const RunOutput& run) {
    if (run.support.empty() || !run.support.front().gap) {
        return std::nullopt;
    }
    const Gap initial = *run.support.front().gap;
    const double spacing = run.mesh.h() / run.mesh.degree();
    const double limit = spacing * (1.0 + 1e-9);
    for (std::size_t k = 1; k < run.support.size(); ++k) {
        const auto& gap = run.support[k].gap;
        if (!gap || std::abs(gap->first - initial.first) > limit ||
            std::abs(gap->second - initial.second) > limit) {
            return static_cast<int>(k);
        }
    }
    return std::nullopt;
}

double data_norm_proxy(const ProblemSpec& problem, const Mesh1D& mesh, double delta, int steps) {
    const QuadratureRule quad = gauss_legendre(mesh.degree() + 2);
    const double u0_norm = std::sqrt(energy(assemble_mass(mesh, quad), interpolate(mesh, problem.u0)));
    double f_sum = 0.0;
    for (int k = 0; k < steps; ++k) {
        const double t = (k + 0.5) * delta;
        double s = 0.0;
        for (int e = 0; e < mesh.num_elements(); ++e) {
            const double left = mesh.element_left(e);
            for (std::size_t q = 0; q < quad.size(); ++q) {
                const double fx = problem.f(left + mesh.h() * quad.points[q], t);
                s += quad.weights[q] * mesh.h() * fx * fx;
            }
        }
        f_sum += delta * s;
    }
    return u0_norm + std::sqrt(f_sum);
}

std::pair<double, double> max_state_norms(const RunOutput& run) {
    const BandedSymMatrix mass = assemble_mass(run.mesh, gauss_legendre(run.mesh.degree() + 1));
    double mu = 0.0;
    double my = 0.0;
    for (std::size_t k = 0; k < run.num_levels(); ++k) {
        mu = std::max(mu, std::sqrt(mass.quadratic_form(run.u[k])));
        my = std::max(my, std::sqrt(mass.quadratic_form(run.y[k])));
    }
    return {mu, my};
}

double manufactured_psi(double x, double p) {
    const double dphi = 2.0 * x * (1.0 - x) * (1.0 - 2.0 * x);
    const double ddphi = 2.0 * (1.0 - 6.0 * x + 6.0 * x * x);
    if (p == 2.0) {
        return ddphi;
    }
    // (|phi'|^{p-2} phi')' = (p-1) |phi'|^{p-2} phi''
    return (p - 1.0) * std::pow(std::abs(dphi), p - 2.0) * ddphi;
}

ProblemSpec manufactured_example1(double p, double lambda, double T) {
    if (!(p > 1.0)) {
        throw ConfigError("p must be > 1");
    }
    ProblemSpec problem;
    problem.a = 0.0;
    problem.b = 1.0;
    problem.T = T;
    problem.p = p;
    problem.kernel = KernelSpec::exponential(lambda);
    auto phi = [](double x) {
        const double s = x * (1.0 - x);
        return s * s;
    };
    // int_0^t e^{-(t-s)} e^{-(p-1)s} ds = e^{-t} (e^{(2-p)t} - 1) / (2-p)
    auto memory_factor = [p](double t) {
        if (p == 2.0) {
            return t * std::exp(-t);
        }
        return std::exp(-t) * std::expm1((2.0 - p) * t) / (2.0 - p);
    };
    problem.u0 = phi;
    problem.exact_u = [phi](double x, double t) { return phi(x) * std::exp(-t); };
    problem.exact_y = [p, lambda, memory_factor](double x, double t) {
        return lambda * manufactured_psi(x, p) * memory_factor(t);
    };
    problem.f = [p, lambda, phi, memory_factor](double x, double t) {
        const double psi = manufactured_psi(x, p);
        return -phi(x) * std::exp(-t) - psi * std::exp(-(p - 1.0) * t) -
               lambda * psi * memory_factor(t);
    };
    return problem;
}

}  // namespace plapmem
