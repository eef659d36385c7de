#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles/dense.hpp"
#include "oracles/memory_residual.hpp"
#include "plapmem/analysis.hpp"
#include "plapmem/assembly.hpp"
#include "plapmem/errors.hpp"
#include "plapmem/memory.hpp"
#include "plapmem/stepper.hpp"

using namespace plapmem;

namespace {

double weight_sum(const std::vector<VolterraTerm>& terms) {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
}

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = u(rng);
    return v;
}

}  // namespace

TEST_CASE("exponential kernel satisfies g' = -g") {
    const KernelSpec k = KernelSpec::exponential(3.7);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> lag(0.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double xi = lag(rng);
        CHECK(std::abs(k.gp(xi) + k.g(xi)) <= 1e-14 * std::max(1.0, std::abs(k.g(xi))));
    }
    CHECK(k.g(0.0) == 3.7);
    const KernelSpec c = KernelSpec::constant(2.0);
    CHECK(c.g(1.3) == 2.0);
    CHECK(c.gp(1.3) == 0.0);
}

TEST_CASE("constant-kernel weight sums equal t_{k+1/2}") {
    const double delta = 0.01;
    for (int k = 0; k <= 200; ++k) {
        const double t = (k + 0.5) * delta;
        CHECK(std::abs(weight_sum(volterra_weights(k, delta)) - t) < 1e-14);
        CHECK(std::abs(weight_sum(load_weights(k, delta, QuadratureMode::Consistent)) - t) < 1e-14);
    }
}

TEST_CASE("literal forcing weights add one extra delta on the last half-node") {
    const double delta = 0.02;
    for (int k = 0; k <= 50; ++k) {
        const double extra = weight_sum(load_weights(k, delta, QuadratureMode::Literal)) -
                             weight_sum(load_weights(k, delta, QuadratureMode::Consistent));
        CHECK(extra == doctest::Approx(delta).epsilon(1e-12));
    }
}

TEST_CASE("state weights follow the trapezoid pattern") {
    const double d = 0.1;
    const auto w0 = volterra_weights(0, d);
    REQUIRE(w0.size() == 3);
    CHECK(w0[0].index == 0);
    CHECK(w0[0].weight == doctest::Approx(d / 4));
    CHECK(w0[0].lag == doctest::Approx(d / 2));

    const auto w3 = volterra_weights(3, d);
    // index 0, 1, 2, 3 (3/4), 3 (1/8 at lag 0), 4 (1/8 at lag 0)
    REQUIRE(w3.size() == 6);
    CHECK(w3[0].weight == doctest::Approx(d / 2));
    CHECK(w3[0].lag == doctest::Approx(3.5 * d));
    CHECK(w3[1].weight == doctest::Approx(d));
    CHECK(w3[1].lag == doctest::Approx(2.5 * d));
    CHECK(w3[3].index == 3);
    CHECK(w3[3].weight == doctest::Approx(0.75 * d));
    CHECK(w3[4].index == 3);
    CHECK(w3[4].lag == 0.0);
    CHECK(w3[5].index == 4);
    CHECK(w3[5].weight == doctest::Approx(d / 8));
}

TEST_CASE("memory equation coefficients") {
    const Mesh1D mesh = build_uniform_mesh(0.0, 1.0, 4, 1);
    const BandedSymMatrix m = assemble_mass(mesh, gauss_legendre(3));
    const double delta = 0.05;
    const KernelSpec k = KernelSpec::exponential(2.0);
    StateHistory hist(delta, 10, std::vector<double>(3, 0.1), std::vector<double>(3, 0.0));
    hist.push_load(std::vector<double>(3, 0.0));
    const MemoryEquation eq = memory_equation(hist, k, m);
    CHECK(eq.alpha == doctest::Approx(0.5 + delta / 8 * k.g(0.0)));
    CHECK(eq.beta == doctest::Approx(-(k.g(0.0) / 2 + delta / 8 * k.gp(0.0))));
}

TEST_CASE("vanishing alpha is an ill-posed step") {
    const Mesh1D mesh = build_uniform_mesh(0.0, 1.0, 4, 1);
    const BandedSymMatrix m = assemble_mass(mesh, gauss_legendre(3));
    const double delta = 0.125;
    StateHistory hist(delta, 4, std::vector<double>(3, 0.0), std::vector<double>(3, 0.0));
    hist.push_load(std::vector<double>(3, 0.0));
    CHECK_THROWS_AS(memory_equation(hist, KernelSpec::constant(-4.0 / delta), m), IllPosedStepError);
}

TEST_CASE("history bookkeeping") {
    StateHistory hist(0.1, 2, {1.0, 2.0}, {0.0, 0.0});
    CHECK(hist.step() == 0);
    CHECK(hist.dim() == 2);
    CHECK(hist.y(0)[0] == 0.0);
    CHECK(hist.y(0)[1] == 0.0);
    CHECK(hist.time(1.5) == doctest::Approx(0.15));
    CHECK_THROWS_AS(hist.push_load({1.0}), OutOfRangeError);
    CHECK_THROWS_AS((hist.push_state({1.0}, {1.0, 2.0})), OutOfRangeError);
    hist.push_state({0.0, 0.0}, {0.0, 0.0});
    hist.push_state({0.0, 0.0}, {0.0, 0.0});
    CHECK(hist.step() == 2);
    CHECK_THROWS_AS((hist.push_state({0.0, 0.0}, {0.0, 0.0})), OutOfRangeError);
    CHECK_THROWS_AS((StateHistory(0.0, 2, {1.0}, {0.0})), ConfigError);
    CHECK_THROWS_AS((StateHistory(0.1, 0, {1.0}, {0.0})), ConfigError);
    CHECK_THROWS_AS((StateHistory(0.1, 2, {1.0}, {0.0, 1.0})), OutOfRangeError);
}

TEST_CASE("forcing integral needs the half-step load") {
    const Mesh1D mesh = build_uniform_mesh(0.0, 1.0, 3, 1);
    const BandedSymMatrix m = assemble_mass(mesh, gauss_legendre(3));
    StateHistory hist(0.1, 3, {0.0, 0.0}, {0.0, 0.0});
    const KernelSpec k = KernelSpec::exponential(1.0);
    CHECK_THROWS_AS(i_f(hist, k), OutOfRangeError);
    CHECK_THROWS_AS(memory_equation(hist, k, m), OutOfRangeError);
}

TEST_CASE("q_g and q_gp split known history from the unknown level") {
    std::mt19937_64 rng(77);
    const Mesh1D mesh = build_uniform_mesh(0.0, 1.0, 5, 2);
    const std::size_t n = mesh.num_interior();
    const BandedSymMatrix m = assemble_mass(mesh, gauss_legendre(4));
    const oracle::Dense dm = oracle::FeSpace{0.0, 1.0, 5, 2}.mass();
    const double delta = 0.03;
    const KernelSpec k = KernelSpec::exponential(-1.3);

    StateHistory hist(delta, 10, random_vector(n, rng), random_vector(n, rng));
    oracle::History ref{delta, {std::vector<double>(hist.u(0).begin(), hist.u(0).end())},
                        {std::vector<double>(n, 0.0)}, {}};
    for (int step = 0; step < 6; ++step) {
        auto u = random_vector(n, rng), y = random_vector(n, rng);
        ref.u.push_back(u);
        ref.y.push_back(y);
        hist.push_state(u, y);
    }
    const int kk = hist.step();
    // A zero level k+1 isolates the explicit part.
    ref.u.push_back(std::vector<double>(n, 0.0));
    ref.y.push_back(std::vector<double>(n, 0.0));
    const auto qg = q_g(hist, k, m);
    const auto qgp = q_gp(hist, k, m);
    const auto ref_qg = oracle::q_sum(dm, ref, ref.y, k.g, kk);
    const auto ref_qgp = oracle::q_sum(dm, ref, ref.u, k.gp, kk);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(qg.explicit_part[i] - ref_qg[i]) < 1e-14);
        CHECK(std::abs(qgp.explicit_part[i] - ref_qgp[i]) < 1e-14);
    }
    CHECK(qg.implicit_coeff == doctest::Approx(delta / 8 * k.g(0.0)));
    CHECK(qgp.implicit_coeff == doctest::Approx(delta / 8 * k.gp(0.0)));
}

TEST_CASE("round trip: solved memory equation satisfies the printed relation") {
    std::mt19937_64 rng(123);
    for (int r : {1, 3}) {
        const Mesh1D mesh = build_uniform_mesh(-1.0, 1.0, 4, r);
        const std::size_t n = mesh.num_interior();
        const BandedSymMatrix m = assemble_mass(mesh, gauss_legendre(r + 2));
        const oracle::Dense dm = oracle::FeSpace{-1.0, 1.0, 4, r}.mass();
        const double delta = 0.04;
        const KernelSpec k = KernelSpec::exponential(2.5);

        StateHistory hist(delta, 20, random_vector(n, rng), random_vector(n, rng));
        oracle::History ref{delta,
                            {std::vector<double>(hist.u(0).begin(), hist.u(0).end())},
                            {std::vector<double>(n, 0.0)},
                            {std::vector<double>(hist.load(0).begin(), hist.load(0).end())}};
        for (int step = 0; step < 8; ++step) {
            auto load = random_vector(n, rng);
            ref.f.push_back(load);
            hist.push_load(load);
            if (step >= 1) {
                for (auto mode : {QuadratureMode::Consistent, QuadratureMode::Literal}) {
                    const MemoryEquation eq = memory_equation(hist, k, m, mode);
                    // Any U^{k+1}; Y^{k+1} from alpha M Y + beta M U = R.
                    auto u_new = random_vector(n, rng);
                    auto rhs = eq.rhs;
                    const auto mu = dm.apply(u_new);
                    for (std::size_t i = 0; i < n; ++i) rhs[i] = (rhs[i] - eq.beta * mu[i]) / eq.alpha;
                    const auto y_new = oracle::solve(dm, rhs);
                    oracle::History trial = ref;
                    trial.u.push_back(u_new);
                    trial.y.push_back(y_new);
                    const auto res = oracle::memory_residual(dm, trial, k.g, k.gp, step,
                                                             mode == QuadratureMode::Literal);
                    for (double v : res) CHECK(std::abs(v) < 1e-10);
                }
            }
            auto u = random_vector(n, rng), y = random_vector(n, rng);
            ref.u.push_back(u);
            ref.y.push_back(y);
            hist.push_state(u, y);
        }
    }
}

TEST_CASE("literal minus consistent forcing integral is delta g(0) F^{k+1/2}") {
    std::mt19937_64 rng(5);
    const double delta = 0.05;
    const KernelSpec k = KernelSpec::exponential(1.7);
    StateHistory hist(delta, 40, random_vector(3, rng), random_vector(3, rng));
    for (int step = 0; step < 40; ++step) {
        const auto load = random_vector(3, rng);
        hist.push_load(load);
        const auto c = i_f(hist, k, QuadratureMode::Consistent);
        const auto l = i_f(hist, k, QuadratureMode::Literal);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs((l[i] - c[i]) - delta * k.g(0.0) * load[i]) < 1e-14);
        }
        hist.push_state(random_vector(3, rng), random_vector(3, rng));
    }
}

TEST_CASE("forcing integral of a constant-in-time load with constant kernel") {
    const double delta = 0.1;
    StateHistory hist(delta, 10, {0.0}, {2.0});
    for (int step = 0; step < 10; ++step) {
        hist.push_load({2.0});
        const auto v = i_f(hist, KernelSpec::constant(3.0));
        CHECK(v[0] == doctest::Approx(3.0 * 2.0 * (step + 0.5) * delta).epsilon(1e-13));
        hist.push_state({0.0}, {0.0});
    }
}

TEST_CASE("lambda = 0 leaves the memory variable at machine zero") {
    for (double p : {2.0, 3.0, 4.0}) {
        const ProblemSpec problem = manufactured_example1(p, 0.0);
        const Mesh1D mesh = build_uniform_mesh(0.0, 1.0, 8, 2);
        SolverConfig cfg;
        cfg.p = p;
        cfg.delta = 0.005;
        cfg.steps = 20;
        const RunOutput run = march(problem, mesh, cfg);
        for (const auto& y : run.y) {
            for (double v : y) CHECK(v == 0.0);
        }
    }
}
