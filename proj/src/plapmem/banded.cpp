#include "plapmem/banded.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "plapmem/errors.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab,
             const int* ldab, int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info);
void dpbtrf_(const char* uplo, const int* n, const int* kd, double* ab, const int* ldab,
             int* info);
void dpbtrs_(const char* uplo, const int* n, const int* kd, const int* nrhs, const double* ab,
             const int* ldab, double* b, const int* ldb, int* info);
}

namespace plapmem {

BandedSymMatrix::BandedSymMatrix(std::size_t n, std::size_t bandwidth)
    : n_(n), bw_(bandwidth), lower_(n * (bandwidth + 1), 0.0) {}

double BandedSymMatrix::operator()(std::size_t i, std::size_t j) const {
    if (i < j) {
        std::swap(i, j);
    }
    if (i - j > bw_) {
        return 0.0;
    }
    return lower_[j * (bw_ + 1) + (i - j)];
}

void BandedSymMatrix::add(std::size_t i, std::size_t j, double v) {
    if (i < j) {
        std::swap(i, j);
    }
    assert(i - j <= bw_ && i < n_);
    lower_[j * (bw_ + 1) + (i - j)] += v;
}

void BandedSymMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    assert(x.size() == n_ && y.size() == n_);
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) {
        const double* col = &lower_[j * (bw_ + 1)];
        y[j] += col[0] * x[j];
        const std::size_t last = std::min(bw_, n_ - 1 - j);
        for (std::size_t d = 1; d <= last; ++d) {
            y[j + d] += col[d] * x[j];
            y[j] += col[d] * x[j + d];
        }
    }
}

std::vector<double> BandedSymMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

double BandedSymMatrix::quadratic_form(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        const double* col = &lower_[j * (bw_ + 1)];
        s += col[0] * x[j] * x[j];
        const std::size_t last = std::min(bw_, n_ - 1 - j);
        for (std::size_t d = 1; d <= last; ++d) {
            s += 2.0 * col[d] * x[j] * x[j + d];
        }
    }
    return s;
}

void BandedSymMatrix::combine(double a, const BandedSymMatrix& other, double b) {
    assert(other.n_ == n_ && other.bw_ == bw_);
    for (std::size_t k = 0; k < lower_.size(); ++k) {
        lower_[k] = a * lower_[k] + b * other.lower_[k];
    }
}

void BandedSymMatrix::fill(double v) { std::fill(lower_.begin(), lower_.end(), v); }

std::vector<double> BandedSymMatrix::to_dense() const {
    std::vector<double> d(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            d[i * n_ + j] = (*this)(i, j);
        }
    }
    return d;
}

BandedLu::BandedLu(const BandedSymMatrix& a)
    : n_(static_cast<int>(a.size())),
      kl_(static_cast<int>(a.bandwidth())),
      ldab_(3 * static_cast<int>(a.bandwidth()) + 1),
      ab_(static_cast<std::size_t>(ldab_) * a.size(), 0.0),
      pivots_(a.size()) {
    // dgbtrf layout: A(i,j) at ab[(kl + ku + i - j) + j * ldab], ku = kl.
    const int ku = kl_;
    for (int j = 0; j < n_; ++j) {
        const int lo = std::max(0, j - ku);
        const int hi = std::min(n_ - 1, j + kl_);
        for (int i = lo; i <= hi; ++i) {
            ab_[static_cast<std::size_t>(kl_ + ku + i - j + j * ldab_)] =
                a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    if (n_ == 0) {
        return;
    }
    int info = 0;
    dgbtrf_(&n_, &n_, &kl_, &ku, ab_.data(), &ldab_, pivots_.data(), &info);
    if (info != 0) {
        throw LinearSolveError("banded LU factorization failed (info=" + std::to_string(info) +
                               ")");
    }
}

void BandedLu::solve_in_place(std::span<double> rhs) const {
    assert(rhs.size() == static_cast<std::size_t>(n_));
    if (n_ == 0) {
        return;
    }
    const char trans = 'N';
    const int nrhs = 1;
    int info = 0;
    dgbtrs_(&trans, &n_, &kl_, &kl_, &nrhs, ab_.data(), &ldab_, pivots_.data(), rhs.data(), &n_,
            &info);
    if (info != 0) {
        throw LinearSolveError("banded LU solve failed (info=" + std::to_string(info) + ")");
    }
}

std::vector<double> BandedLu::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

BandedCholesky::BandedCholesky(const BandedSymMatrix& a)
    : n_(static_cast<int>(a.size())),
      kd_(static_cast<int>(a.bandwidth())),
      ab_(a.lower_band().begin(), a.lower_band().end()) {
    // The stored lower band already matches dpbtrf's 'L' layout with ldab = kd + 1.
    if (n_ == 0) {
        return;
    }
    const char uplo = 'L';
    const int ldab = kd_ + 1;
    int info = 0;
    dpbtrf_(&uplo, &n_, &kd_, ab_.data(), &ldab, &info);
    if (info != 0) {
        throw LinearSolveError("banded Cholesky factorization failed (info=" +
                               std::to_string(info) + ")");
    }
}

void BandedCholesky::solve_in_place(std::span<double> rhs) const {
    assert(rhs.size() == static_cast<std::size_t>(n_));
    if (n_ == 0) {
        return;
    }
    const char uplo = 'L';
    const int ldab = kd_ + 1;
    const int nrhs = 1;
    int info = 0;
    dpbtrs_(&uplo, &n_, &kd_, &nrhs, ab_.data(), &ldab, rhs.data(), &n_, &info);
    if (info != 0) {
        throw LinearSolveError("banded Cholesky solve failed (info=" + std::to_string(info) +
                               ")");
    }
}

std::vector<double> BandedCholesky::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

}  // namespace plapmem
