#include <doctest.h>

#include <random>
#include <vector>

#include "oracles/dense.hpp"
#include "plapmem/banded.hpp"
#include "plapmem/errors.hpp"

using namespace plapmem;

namespace {

BandedSymMatrix random_spd(std::size_t n, std::size_t bw, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    BandedSymMatrix a(n, bw);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = j + 1; i < std::min(n, j + bw + 1); ++i) {
            a.add(i, j, u(rng));
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        a.add(i, i, 2.0 * bw + 1.0 + u(rng));
    }
    return a;
}

oracle::Dense dense_of(const BandedSymMatrix& a) {
    oracle::Dense d(a.size());
    d.a = a.to_dense();
    return d;
}

}  // namespace

TEST_CASE("banded storage is symmetric and zero outside the band") {
    BandedSymMatrix a(5, 2);
    a.add(3, 1, 2.5);
    a.add(1, 3, 0.5);
    a.add(2, 2, 1.0);
    CHECK(a(3, 1) == 3.0);
    CHECK(a(1, 3) == 3.0);
    CHECK(a(2, 2) == 1.0);
    CHECK(a(4, 0) == 0.0);
    CHECK(a(0, 4) == 0.0);
    const auto d = a.to_dense();
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(d[i * 5 + j] == d[j * 5 + i]);
        }
    }
}

TEST_CASE("multiply, quadratic form and combine match dense arithmetic") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t bw : {0u, 1u, 3u}) {
        const BandedSymMatrix a = random_spd(9, bw, rng);
        BandedSymMatrix b = random_spd(9, bw, rng);
        std::vector<double> x(9);
        for (double& v : x) v = u(rng);
        const auto ref = dense_of(a).apply(x);
        const auto got = a.multiply(x);
        double xax = 0.0;
        for (std::size_t i = 0; i < 9; ++i) {
            CHECK(got[i] == doctest::Approx(ref[i]).epsilon(1e-14));
            xax += x[i] * ref[i];
        }
        CHECK(a.quadratic_form(x) == doctest::Approx(xax).epsilon(1e-13));

        const auto db = b.to_dense();
        b.combine(2.0, a, -0.5);
        const auto da = a.to_dense();
        const auto dc = b.to_dense();
        for (std::size_t k = 0; k < dc.size(); ++k) {
            CHECK(dc[k] == doctest::Approx(2.0 * db[k] - 0.5 * da[k]).epsilon(1e-14));
        }
        b.fill(0.0);
        CHECK(b.quadratic_form(x) == 0.0);
    }
}

TEST_CASE("banded LU and Cholesky agree with dense elimination") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t bw : {1u, 2u, 4u}) {
        const BandedSymMatrix a = random_spd(20, bw, rng);
        std::vector<double> rhs(20);
        for (double& v : rhs) v = u(rng);
        const auto ref = oracle::solve(dense_of(a), rhs);
        const auto lu = BandedLu(a).solve(rhs);
        const auto ch = BandedCholesky(a).solve(rhs);
        for (std::size_t i = 0; i < 20; ++i) {
            CHECK(lu[i] == doctest::Approx(ref[i]).epsilon(1e-12));
            CHECK(ch[i] == doctest::Approx(ref[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("banded LU handles symmetric indefinite matrices") {
    BandedSymMatrix a(3, 1);
    a.add(0, 0, 0.0);
    a.add(1, 0, 1.0);
    a.add(1, 1, 0.0);
    a.add(2, 1, 1.0);
    a.add(2, 2, -1.0);
    const std::vector<double> rhs{1.0, 2.0, 3.0};
    const auto ref = oracle::solve(dense_of(a), rhs);
    const auto x = BandedLu(a).solve(rhs);
    for (std::size_t i = 0; i < 3; ++i) CHECK(x[i] == doctest::Approx(ref[i]));
    CHECK_THROWS_AS(BandedCholesky{a}, LinearSolveError);
}

TEST_CASE("singular matrices raise LinearSolveError") {
    BandedSymMatrix a(4, 1);
    a.add(0, 0, 1.0);
    a.add(1, 1, 1.0);
    a.add(3, 3, 1.0);
    CHECK_THROWS_AS(BandedLu{a}, LinearSolveError);
    CHECK_THROWS_AS(BandedCholesky{a}, LinearSolveError);
}
