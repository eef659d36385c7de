#include "plapmem/memory.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "plapmem/errors.hpp"

namespace plapmem {

KernelSpec KernelSpec::exponential(double lambda) {
    KernelSpec k;
    k.lambda = lambda;
    k.g = [lambda](double xi) { return lambda * std::exp(-xi); };
    k.gp = [lambda](double xi) { return -lambda * std::exp(-xi); };
    return k;
}

KernelSpec KernelSpec::constant(double c) {
    KernelSpec k;
    k.lambda = c;
    k.g = [c](double) { return c; };
    k.gp = [](double) { return 0.0; };
    return k;
}

std::vector<VolterraTerm> volterra_weights(int k, double delta) {
    std::vector<VolterraTerm> terms;
    const auto kk = static_cast<std::size_t>(k);
    const double eighth = delta / 8.0;
    if (k == 0) {
        // Single half interval [t_0, t_{1/2}].
        terms.push_back({0, 0.5 * delta, 0.25 * delta});
    } else {
        terms.reserve(kk + 3);
        terms.push_back({0, (k + 0.5) * delta, 0.5 * delta});
        for (int j = 1; j <= k - 1; ++j) {
            terms.push_back({static_cast<std::size_t>(j), (k + 0.5 - j) * delta, delta});
        }
        terms.push_back({kk, 0.5 * delta, 0.75 * delta});
    }
    terms.push_back({kk, 0.0, eighth});
    terms.push_back({kk + 1, 0.0, eighth});
    return terms;
}

std::vector<VolterraTerm> load_weights(int k, double delta, QuadratureMode mode) {
    std::vector<VolterraTerm> terms;
    const auto kk = static_cast<std::size_t>(k);
    const bool literal = mode == QuadratureMode::Literal;
    if (k == 0 && !literal) {
        terms.push_back({0, 0.5 * delta, 0.25 * delta});
        terms.push_back({1, 0.0, 0.25 * delta});
        return terms;
    }
    terms.reserve(kk + 3);
    terms.push_back({0, (k + 0.5) * delta, 0.25 * delta});
    terms.push_back({1, k * delta, 0.75 * delta});
    const int last = literal ? k : k - 1;
    for (int m = 1; m <= last; ++m) {
        terms.push_back({static_cast<std::size_t>(m + 1), (k - m) * delta, delta});
    }
    terms.push_back({kk + 1, 0.0, 0.5 * delta});
    return terms;
}

StateHistory::StateHistory(double delta, int steps, std::vector<double> u0,
                           std::vector<double> load0)
    : delta_(delta), steps_(steps), dim_(u0.size()) {
    if (!(delta > 0.0) || steps < 1) {
        throw ConfigError("history requires delta > 0 and at least one step");
    }
    if (load0.size() != dim_) {
        throw OutOfRangeError("initial load has the wrong dimension");
    }
    u_.reserve(static_cast<std::size_t>(steps) + 1);
    y_.reserve(static_cast<std::size_t>(steps) + 1);
    loads_.reserve(static_cast<std::size_t>(steps) + 1);
    y_.emplace_back(dim_, 0.0);
    u_.push_back(std::move(u0));
    loads_.push_back(std::move(load0));
}

void StateHistory::push_load(std::vector<double> load) {
    if (load.size() != dim_) {
        throw OutOfRangeError("load vector has the wrong dimension");
    }
    loads_.push_back(std::move(load));
}

void StateHistory::push_state(std::vector<double> u, std::vector<double> y) {
    if (step() >= steps_) {
        throw OutOfRangeError("history already holds all " + std::to_string(steps_) + " steps");
    }
    if (u.size() != dim_ || y.size() != dim_) {
        throw OutOfRangeError("state vector has the wrong dimension");
    }
    u_.push_back(std::move(u));
    y_.push_back(std::move(y));
}

namespace {

// sum over known terms (index <= k) of weight * kernel(lag) * vec(index)
template <class Kernel, class Source>
void accumulate(const std::vector<VolterraTerm>& terms, std::size_t limit, const Kernel& kernel,
                const Source& source, double scale, std::vector<double>& out) {
    for (const VolterraTerm& t : terms) {
        if (t.index > limit) {
            continue;
        }
        const double c = scale * t.weight * kernel(t.lag);
        if (c == 0.0) {
            continue;
        }
        const std::span<const double> v = source(t.index);
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] += c * v[i];
        }
    }
}

template <class Kernel>
double implicit_coefficient(const std::vector<VolterraTerm>& terms, std::size_t unknown,
                            const Kernel& kernel) {
    double c = 0.0;
    for (const VolterraTerm& t : terms) {
        if (t.index == unknown) {
            c += t.weight * kernel(t.lag);
        }
    }
    return c;
}

VolterraPart volterra_part(const StateHistory& hist, const std::function<double(double)>& kernel,
                           const BandedSymMatrix& mass, bool use_y) {
    const int k = hist.step();
    const auto terms = volterra_weights(k, hist.delta());
    std::vector<double> combo(hist.dim(), 0.0);
    const auto kk = static_cast<std::size_t>(k);
    if (use_y) {
        accumulate(terms, kk, kernel, [&](std::size_t j) { return hist.y(j); }, 1.0, combo);
    } else {
        accumulate(terms, kk, kernel, [&](std::size_t j) { return hist.u(j); }, 1.0, combo);
    }
    VolterraPart part;
    part.explicit_part = mass.multiply(combo);
    part.implicit_coeff = implicit_coefficient(terms, kk + 1, kernel);
    return part;
}

void require_loads(const StateHistory& hist) {
    if (hist.num_loads() < static_cast<std::size_t>(hist.step()) + 2) {
        throw OutOfRangeError("forcing history lacks F(t_{k+1/2})");
    }
}

}  // namespace

VolterraPart q_g(const StateHistory& hist, const KernelSpec& kernel, const BandedSymMatrix& mass) {
    return volterra_part(hist, kernel.g, mass, true);
}

VolterraPart q_gp(const StateHistory& hist, const KernelSpec& kernel,
                  const BandedSymMatrix& mass) {
    return volterra_part(hist, kernel.gp, mass, false);
}

std::vector<double> i_f(const StateHistory& hist, const KernelSpec& kernel, QuadratureMode mode) {
    require_loads(hist);
    const int k = hist.step();
    const auto terms = load_weights(k, hist.delta(), mode);
    std::vector<double> out(hist.dim(), 0.0);
    accumulate(terms, static_cast<std::size_t>(k) + 1, kernel.g,
               [&](std::size_t j) { return hist.load(j); }, 1.0, out);
    return out;
}

MemoryEquation memory_equation(const StateHistory& hist, const KernelSpec& kernel,
                               const BandedSymMatrix& mass, QuadratureMode mode) {
    require_loads(hist);
    const int k = hist.step();
    const auto kk = static_cast<std::size_t>(k);
    const double delta = hist.delta();
    const double g0 = kernel.g(0.0);
    const auto terms = volterra_weights(k, delta);

    MemoryEquation eq;
    eq.alpha = 0.5 + implicit_coefficient(terms, kk + 1, kernel.g);
    eq.beta = -(0.5 * g0 + implicit_coefficient(terms, kk + 1, kernel.gp));
    if (std::abs(eq.alpha) < 1e-12) {
        throw IllPosedStepError("memory equation coefficient alpha vanishes at step " +
                                std::to_string(k) + "; reduce the time step");
    }

    // Everything multiplied by M is collected first, then one product.
    std::vector<double> combo(hist.dim(), 0.0);
    const auto yk = hist.y(kk);
    const auto uk = hist.u(kk);
    const auto u0 = hist.u(0);
    const double g_half = kernel.g((k + 0.5) * delta);
    for (std::size_t i = 0; i < combo.size(); ++i) {
        combo[i] = -0.5 * yk[i] + 0.5 * g0 * uk[i] - g_half * u0[i];
    }
    accumulate(terms, kk, kernel.g, [&](std::size_t j) { return hist.y(j); }, -1.0, combo);
    accumulate(terms, kk, kernel.gp, [&](std::size_t j) { return hist.u(j); }, 1.0, combo);

    eq.rhs = mass.multiply(combo);
    const auto forcing = i_f(hist, kernel, mode);
    for (std::size_t i = 0; i < eq.rhs.size(); ++i) {
        eq.rhs[i] -= forcing[i];
    }
    return eq;
}

}  // namespace plapmem
