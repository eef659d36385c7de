#include "plapmem/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "plapmem/analysis.hpp"
#include "plapmem/memory.hpp"
#include "plapmem/mesh_basis.hpp"

namespace plapmem {

namespace {

double exact_u(double x, double t) {
    const double s = x * (1.0 - x);
    return s * s * std::exp(-t);
}

template <class F>
double d5(const F& f, double z, double h) {
    return (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
}

double plap_fd(double x, double t, double p) {
    constexpr double h = 1e-3;
    auto flux_at = [&](double z) {
        const double du = d5([&](double w) { return exact_u(w, t); }, z, h);
        return std::pow(std::abs(du), p - 2.0) * du;
    };
    return d5(flux_at, x, h);
}

template <class F>
double composite_gauss(const F& f, double a, double b, int panels) {
    const QuadratureRule rule = gauss_legendre(8);
    const double width = (b - a) / panels;
    double sum = 0.0;
    for (int j = 0; j < panels; ++j) {
        const double lo = a + j * width;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            sum += rule.weights[i] * width * f(lo + rule.points[i] * width);
        }
    }
    return sum;
}

CheckResult check_manufactured() {
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> ux(0.02, 0.98);
    std::uniform_real_distribution<double> ut(0.005, 0.1);
    double worst = 0.0;
    int samples = 0;
    for (double p : {2.0, 2.5, 3.0, 4.0}) {
        const ProblemSpec problem = manufactured_example1(p, 1.0);
        for (int i = 0; i < 25; ++i) {
            const double x = ux(rng);
            const double t = ut(rng);
            const double f = problem.f(x, t);
            const double oracle = manufactured_residual_fd(x, t, p, 1.0);
            worst = std::max(worst, std::abs(f - oracle) / (std::abs(f) + 1e-3));
            ++samples;
        }
    }
    std::ostringstream d;
    d << samples << " samples, worst relative deviation " << worst;
    return {"manufactured forcing vs finite differences", worst < 1e-6, d.str()};
}

CheckResult check_weight_sums() {
    const double delta = 0.01;
    double worst = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double target = (k + 0.5) * delta;
        double sy = 0.0;
        for (const auto& term : volterra_weights(k, delta)) {
            sy += term.weight;
        }
        double sf = 0.0;
        for (const auto& term : load_weights(k, delta, QuadratureMode::Consistent)) {
            sf += term.weight;
        }
        worst = std::max({worst, std::abs(sy - target), std::abs(sf - target)});
    }
    std::ostringstream d;
    d << "k = 0..200, worst |sum - t_{k+1/2}| = " << worst;
    return {"constant-kernel weight sums", worst < 1e-14, d.str()};
}

CheckResult check_literal_offset() {
    const double delta = 0.05;
    const KernelSpec kernel = KernelSpec::exponential(1.7);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uv(-1.0, 1.0);
    double worst = 0.0;
    StateHistory hist(delta, 40, {0.0, 0.0}, {uv(rng), uv(rng)});
    for (int k = 0; k < 40; ++k) {
        std::vector<double> load = {uv(rng), uv(rng)};
        hist.push_load(load);
        const auto consistent = i_f(hist, kernel, QuadratureMode::Consistent);
        const auto literal = i_f(hist, kernel, QuadratureMode::Literal);
        for (std::size_t i = 0; i < load.size(); ++i) {
            const double expected = delta * kernel.g(0.0) * load[i];
            worst = std::max(worst, std::abs((literal[i] - consistent[i]) - expected));
        }
        hist.push_state({0.0, 0.0}, {0.0, 0.0});
    }
    std::ostringstream d;
    d << "40 steps, worst deviation from delta g(0) F^{k+1/2}: " << worst;
    return {"literal vs consistent forcing quadrature", worst < 1e-14, d.str()};
}

CheckResult check_gauss_legendre() {
    double worst = 0.0;
    for (int q = 1; q <= kMaxQuadraturePoints; ++q) {
        const QuadratureRule rule = gauss_legendre(q);
        for (int d = 0; d <= 2 * q - 1; ++d) {
            double s = 0.0;
            for (std::size_t i = 0; i < rule.size(); ++i) {
                s += rule.weights[i] * std::pow(rule.points[i], d);
            }
            const double exact = 1.0 / (d + 1);
            worst = std::max(worst, std::abs(s - exact) / exact);
        }
    }
    std::ostringstream d;
    d << "q = 1.." << kMaxQuadraturePoints << ", worst relative error " << worst;
    return {"Gauss-Legendre exactness", worst < 1e-12, d.str()};
}

}  // namespace

double manufactured_residual_fd(double x, double t, double p, double lambda) {
    const double u_t = d5([&](double s) { return exact_u(x, s); }, t, 1e-3);
    const double plap = plap_fd(x, t, p);
    const double memory = composite_gauss(
        [&](double s) { return lambda * std::exp(-(t - s)) * plap_fd(x, s, p); }, 0.0, t, 16);
    return u_t - plap - memory;
}

std::vector<CheckResult> run_verification() {
    return {check_manufactured(), check_weight_sums(), check_literal_offset(),
            check_gauss_legendre()};
}

}  // namespace plapmem
