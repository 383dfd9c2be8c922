#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "error.hpp"

namespace steadycredit::linalg {

/// Symmetric positive-definite band matrix with half-bandwidth `B`, stored by
/// upper diagonals: upper(i, m) = A(i, i + m) for m = 0..B.
template <std::size_t B>
class SymmetricBand {
public:
    explicit SymmetricBand(std::size_t n) : n_(n), rows_(n) {}

    std::size_t size() const noexcept { return n_; }

    double& upper(std::size_t i, std::size_t m) { return rows_[i][m]; }
    double upper(std::size_t i, std::size_t m) const { return rows_[i][m]; }

    /// A(i, j) for any i, j (zero outside the band).
    double at(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        return j - i <= B ? rows_[i][j - i] : 0.0;
    }

    std::vector<double> multiply(std::span<const double> x) const {
        std::vector<double> y(n_, 0.0);
        for (std::size_t i = 0; i < n_; ++i) {
            y[i] += rows_[i][0] * x[i];
            for (std::size_t m = 1; m <= B && i + m < n_; ++m) {
                y[i] += rows_[i][m] * x[i + m];
                y[i + m] += rows_[i][m] * x[i];
            }
        }
        return y;
    }

private:
    std::size_t n_;
    std::vector<std::array<double, B + 1>> rows_;
};

/// Solves A x = b by banded LDL^T factorization (no pivoting; A must be SPD).
template <std::size_t B>
std::vector<double> solve(const SymmetricBand<B>& a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw Error(ErrorKind::Domain, "banded solve: dimension mismatch");
    // lower[i][m-1] = L(i, i - m)
    std::vector<std::array<double, B>> lower(n);
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= B ? i - B : 0;
        for (std::size_t j = j0; j < i; ++j) {
            double v = a.at(i, j);
            for (std::size_t k = j0; k < j; ++k) v -= lower[i][i - k - 1] * diag[k] * lower[j][j - k - 1];
            lower[i][i - j - 1] = v / diag[j];
        }
        double dv = a.at(i, i);
        for (std::size_t k = j0; k < i; ++k) dv -= lower[i][i - k - 1] * lower[i][i - k - 1] * diag[k];
        if (!(dv > 0.0)) throw Error(ErrorKind::Numeric, "banded solve: matrix is not positive definite");
        diag[i] = dv;
    }
    std::vector<double> x(b.begin(), b.end());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= B ? i - B : 0;
        for (std::size_t j = j0; j < i; ++j) x[i] -= lower[i][i - j - 1] * x[j];
    }
    for (std::size_t i = 0; i < n; ++i) x[i] /= diag[i];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t m = 1; m <= B && i + m < n; ++m) x[i] -= lower[i + m][m - 1] * x[i + m];
    }
    return x;
}

}  // namespace steadycredit::linalg
