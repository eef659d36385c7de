#include "plapmem/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "plapmem/analysis.hpp"
#include "plapmem/errors.hpp"

namespace plapmem {

void SolverConfig::validate() const {
    if (!(p > 1.0) || !std::isfinite(p)) {
        throw ConfigError("p must be a finite value > 1");
    }
    if (!(delta > 0.0) || !std::isfinite(delta)) {
        throw ConfigError("time step must be finite and > 0");
    }
    if (steps < 1) {
        throw ConfigError("step count N must be >= 1");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw ConfigError("tol must be finite and > 0");
    }
    if (max_iter < 2) {
        throw ConfigError("max_iter must be >= 2");
    }
    if (!std::isfinite(epsilon)) {
        throw ConfigError("epsilon must be finite");
    }
    if (quadrature_points < 0 || quadrature_points > kMaxQuadraturePoints) {
        throw ConfigError("quadrature_points must lie in [1, " +
                          std::to_string(kMaxQuadraturePoints) + "] (0 = default)");
    }
}

Scheme select_scheme(double p, Scheme requested) {
    if (!(p > 1.0)) {
        throw ConfigError("p must be > 1");
    }
    switch (requested) {
        case Scheme::Auto:
            return (p >= 3.0 || p == 2.0) ? Scheme::A : Scheme::B;
        case Scheme::A:
        case Scheme::B:
            return requested;
    }
    return Scheme::B;
}

double resolve_epsilon(double p, double requested) {
    if (requested < 0.0) {
        return p < 2.0 ? kDefaultEpsilon : 0.0;
    }
    if (p < 2.0 && requested == 0.0) {
        return kDefaultEpsilon;
    }
    return requested;
}

StepContext::StepContext(const Mesh1D& mesh, const ProblemSpec& problem, const SolverConfig& cfg)
    : mesh_(mesh),
      cfg_(cfg),
      scheme_(select_scheme(cfg.p, cfg.scheme)),
      flux_{cfg.p, resolve_epsilon(cfg.p, cfg.epsilon)},
      quad_(gauss_legendre(cfg.quadrature_points > 0 ? cfg.quadrature_points
                                                     : mesh.degree() + 2)),
      table_(tabulate(mesh.basis(), quad_)),
      mass_(assemble_mass(mesh, quad_)),
      mass_factor_(mass_),
      kernel_(problem.kernel),
      forcing_(problem.f) {
    flux_.validate();
}

BandedSymMatrix StepContext::plap(std::span<const double> state) const {
    BandedSymMatrix a(mesh_.num_interior(), static_cast<std::size_t>(mesh_.degree()));
    assemble_plap_into(mesh_, state, flux_, quad_, table_, a);
    return a;
}

std::pair<std::vector<double>, std::vector<double>> fixed_point_init(const StateHistory& hist) {
    const auto k = static_cast<std::size_t>(hist.step());
    const auto u = hist.u(k);
    const auto y = hist.y(k);
    return {std::vector<double>(u.begin(), u.end()), std::vector<double>(y.begin(), y.end())};
}

namespace {

std::vector<double> midpoint(std::span<const double> a, std::span<const double> b) {
    std::vector<double> m(a.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = 0.5 * (a[i] + b[i]);
    }
    return m;
}

// delta M Y^k + 2 delta F^{k+1/2}, shared by both schemes.
std::vector<double> common_rhs(const StateHistory& hist, const StepContext& ctx) {
    const auto k = static_cast<std::size_t>(hist.step());
    if (hist.num_loads() < k + 2) {
        throw OutOfRangeError("forcing history lacks F(t_{k+1/2})");
    }
    const double delta = hist.delta();
    std::vector<double> rhs = ctx.mass().multiply(hist.y(k));
    const auto load = hist.load(k + 1);
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        rhs[i] = delta * rhs[i] + 2.0 * delta * load[i];
    }
    return rhs;
}

double mass_norm_sq(const BandedSymMatrix& mass, std::span<const double> a,
                    std::span<const double> b) {
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = a[i] - b[i];
    }
    return mass.quadratic_form(d);
}

}  // namespace

BlockSystem iteration_system_A(std::span<const double> iterate, const StateHistory& hist,
                               const StepContext& ctx) {
    const auto k = static_cast<std::size_t>(hist.step());
    const auto uk = hist.u(k);
    const double delta = hist.delta();
    const BandedSymMatrix a = ctx.plap(midpoint(iterate, uk));

    BlockSystem sys{ctx.mass(), common_rhs(hist, ctx)};
    // (2M - delta A) U^k
    BandedSymMatrix explicit_part = ctx.mass();
    explicit_part.combine(2.0, a, -delta);
    const auto eu = explicit_part.multiply(uk);
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) {
        sys.rhs[i] += eu[i];
    }
    sys.uu.combine(2.0, a, delta);
    return sys;
}

BlockSystem iteration_system_B(std::span<const double> iterate, const StateHistory& hist,
                               const StepContext& ctx) {
    const auto k = static_cast<std::size_t>(hist.step());
    const auto uk = hist.u(k);
    const double delta = hist.delta();
    const BandedSymMatrix a = ctx.plap(midpoint(iterate, uk));

    BlockSystem sys{ctx.mass(), common_rhs(hist, ctx)};
    std::vector<double> sum(uk.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        sum[i] = iterate[i] + uk[i];
    }
    const auto flux_term = a.multiply(sum);
    const auto mu = ctx.mass().multiply(uk);
    for (std::size_t i = 0; i < sys.rhs.size(); ++i) {
        sys.rhs[i] += -delta * flux_term[i] + 2.0 * mu[i];
    }
    sys.uu.combine(2.0, ctx.mass(), 0.0);
    return sys;
}

std::pair<std::vector<double>, std::vector<double>> solve_block(const BlockSystem& system,
                                                                const BandedSymMatrix& mass,
                                                                const BandedCholesky& mass_factor,
                                                                const MemoryEquation& memory,
                                                                double delta) {
    if (std::abs(memory.alpha) < 1e-12) {
        throw IllPosedStepError("memory equation coefficient alpha vanishes");
    }
    // M Y = (R - beta M U) / alpha substituted into the first block:
    // (uu + delta beta / alpha M) U = rhs + delta / alpha R.
    const double ratio = delta / memory.alpha;
    BandedSymMatrix reduced = system.uu;
    reduced.combine(1.0, mass, ratio * memory.beta);
    std::vector<double> u(system.rhs.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = system.rhs[i] + ratio * memory.rhs[i];
    }
    BandedLu(reduced).solve_in_place(u);

    std::vector<double> y = mass_factor.solve(memory.rhs);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = (y[i] - memory.beta * u[i]) / memory.alpha;
    }
    return {std::move(u), std::move(y)};
}

StepDiagnostics cn_step(StateHistory& hist, const StepContext& ctx) {
    const int k = hist.step();
    const auto kk = static_cast<std::size_t>(k);
    const SolverConfig& cfg = ctx.config();
    const double delta = hist.delta();
    if (hist.num_loads() < kk + 2) {
        hist.push_load(assemble_load(ctx.mesh(), ctx.forcing(), (k + 0.5) * delta, ctx.quadrature()));
    }
    const MemoryEquation memory = memory_equation(hist, ctx.kernel(), ctx.mass(), cfg.quadrature_mode);

    auto [u_iter, y_iter] = fixed_point_init(hist);
    StepDiagnostics diag;
    for (int n = 1; n <= cfg.max_iter; ++n) {
        const BlockSystem sys = ctx.scheme() == Scheme::A ? iteration_system_A(u_iter, hist, ctx)
                                                          : iteration_system_B(u_iter, hist, ctx);
        auto [u_next, y_next] = solve_block(sys, ctx.mass(), ctx.mass_factor(), memory, delta);
        const double du = mass_norm_sq(ctx.mass(), u_next, u_iter);
        const double dy = mass_norm_sq(ctx.mass(), y_next, y_iter);
        if (!diag.increments_u.empty()) {
            const double prev = diag.increments_u.back();
            diag.ratios.push_back(prev > 0.0 ? du / prev : 0.0);
        }
        diag.increments_u.push_back(du);
        diag.iterations = n;
        diag.increment_u = du;
        diag.increment_y = dy;
        u_iter = std::move(u_next);
        y_iter = std::move(y_next);
        if (!std::isfinite(du) || !std::isfinite(dy)) {
            throw DivergenceError("fixed-point iterate became non-finite at step " +
                                      std::to_string(k) + ", iteration " + std::to_string(n),
                                  k, n, diag.ratios.empty() ? 0.0 : diag.ratios.back());
        }
        if (du < cfg.tol && dy < cfg.tol) {
            hist.push_state(std::move(u_iter), std::move(y_iter));
            return diag;
        }
    }
    const double last_ratio = diag.ratios.empty() ? 0.0 : diag.ratios.back();
    std::ostringstream msg;
    msg << "fixed point did not reach tol=" << cfg.tol << " within " << cfg.max_iter
        << " iterations at step " << k << " (increments u=" << diag.increment_u
        << ", y=" << diag.increment_y << ", last contraction ratio " << last_ratio
        << "); h and delta are likely incompatible";
    throw DivergenceError(msg.str(), k, diag.iterations, last_ratio);
}

namespace {

[[noreturn]] void rethrow_at_step(const Error& e, int step) {
    const std::string what = "step " + std::to_string(step) + ": " + e.what();
    switch (e.code()) {
        case ErrorCode::LinearSolve:
            throw LinearSolveError(what);
        case ErrorCode::IllPosedStep:
            throw IllPosedStepError(what);
        case ErrorCode::NumericInput:
            throw NumericInputError(what);
        default:
            throw Error(e.code(), what);
    }
}

}  // namespace

RunOutput march(const ProblemSpec& problem, const Mesh1D& mesh, const SolverConfig& cfg,
                const StepObserver& observer) {
    problem.validate();
    cfg.validate();
    const StepContext ctx(mesh, problem, cfg);

    StateHistory hist(cfg.delta, cfg.steps, interpolate(mesh, problem.u0),
                      assemble_load(mesh, problem.f, 0.0, ctx.quadrature()));
    RunOutput run(mesh);
    run.delta = cfg.delta;
    run.diagnostics.reserve(static_cast<std::size_t>(cfg.steps));
    if (observer) {
        observer(0, hist);
    }
    for (int k = 0; k < cfg.steps; ++k) {
        try {
            run.diagnostics.push_back(cn_step(hist, ctx));
        } catch (const DivergenceError&) {
            throw;
        } catch (const Error& e) {
            rethrow_at_step(e, k);
        }
        if (observer) {
            observer(k + 1, hist);
        }
    }

    const auto levels = static_cast<std::size_t>(cfg.steps) + 1;
    run.times.resize(levels);
    run.u.reserve(levels);
    run.y.reserve(levels);
    run.energy.reserve(levels);
    for (std::size_t j = 0; j < levels; ++j) {
        run.times[j] = static_cast<double>(j) * cfg.delta;
        const auto u = hist.u(j);
        const auto y = hist.y(j);
        run.u.emplace_back(u.begin(), u.end());
        run.y.emplace_back(y.begin(), y.end());
        run.energy.push_back(ctx.mass().quadratic_form(u));
    }
    if (problem.exact_u && problem.exact_y) {
        const double t_end = run.times.back();
        const QuadratureRule quad = gauss_legendre(kMaxQuadraturePoints);
        ErrorSummary errors;
        errors.l2_u = l2_error(
            mesh, run.u.back(), [&](double x) { return problem.exact_u(x, t_end); }, quad);
        errors.l2_y = l2_error(
            mesh, run.y.back(), [&](double x) { return problem.exact_y(x, t_end); }, quad);
        run.errors = errors;
    }
    return run;
}

}  // namespace plapmem
