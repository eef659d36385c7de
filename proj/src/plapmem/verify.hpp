#pragma once

#include <string>
#include <vector>

namespace plapmem {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Self-checks behind the `verify` command: the manufactured forcing against
/// a finite-difference and composite-quadrature evaluation of the equation,
/// the constant-kernel weight sums of both node families, the literal versus
/// consistent forcing quadrature offset, and Gauss-Legendre exactness.
std::vector<CheckResult> run_verification();

/// u_t - Delta_p u - int_0^t g(t-s) Delta_p u(s) ds at (x, t) for
/// u = (x(1-x))^2 e^{-t}, g = lambda e^{-xi}, from central differences and
/// composite Gauss-Legendre quadrature in s.
double manufactured_residual_fd(double x, double t, double p, double lambda);

}  // namespace plapmem
