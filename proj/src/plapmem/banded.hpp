#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace plapmem {

/// Symmetric matrix with half-bandwidth `bandwidth`, stored as its lower band.
class BandedSymMatrix {
public:
    BandedSymMatrix() = default;
    BandedSymMatrix(std::size_t n, std::size_t bandwidth);

    std::size_t size() const noexcept { return n_; }
    std::size_t bandwidth() const noexcept { return bw_; }

    /// Entry (i,j); zero outside the band.
    double operator()(std::size_t i, std::size_t j) const;
    /// Adds v to (i,j) and, implicitly, to (j,i). Requires |i-j| <= bandwidth.
    void add(std::size_t i, std::size_t j, double v);

    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;
    /// x^T A x
    double quadratic_form(std::span<const double> x) const;

    /// this <- a * this + b * other; other must share size and bandwidth.
    void combine(double a, const BandedSymMatrix& other, double b);
    void fill(double v);

    /// Row-major dense copy, for tests and small diagnostics.
    std::vector<double> to_dense() const;

    /// Lower band, column-major by (i - j, j): lower_[j * (bw+1) + (i-j)].
    std::span<const double> lower_band() const noexcept { return lower_; }

private:
    std::size_t n_ = 0;
    std::size_t bw_ = 0;
    std::vector<double> lower_;
};

/// Banded LU with partial pivoting (LAPACK dgbtrf/dgbtrs).
class BandedLu {
public:
    /// Throws LinearSolveError on a singular matrix.
    explicit BandedLu(const BandedSymMatrix& a);

    std::size_t size() const noexcept { return n_; }
    void solve_in_place(std::span<double> rhs) const;
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    int n_;
    int kl_;
    int ldab_;
    std::vector<double> ab_;
    std::vector<int> pivots_;
};

/// Banded Cholesky (LAPACK dpbtrf/dpbtrs). Throws LinearSolveError unless the
/// matrix is positive definite.
class BandedCholesky {
public:
    explicit BandedCholesky(const BandedSymMatrix& a);

    std::size_t size() const noexcept { return n_; }
    void solve_in_place(std::span<double> rhs) const;
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    int n_;
    int kd_;
    std::vector<double> ab_;
};

}  // namespace plapmem
