#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gdq {

/// Dense row-major matrix of doubles. The systems handled here are tiny
/// (N rarely above 10), so no sparse or blocked machinery is warranted.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    /// y = A x
    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
        std::vector<double> y(rows_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) s += a_[i * cols_ + j] * x[j];
            y[i] = s;
        }
        return y;
    }

    /// y = A^T x
    std::vector<double> apply_transpose(std::span<const double> x) const {
        if (x.size() != rows_) throw std::invalid_argument("Matrix::apply_transpose: size mismatch");
        std::vector<double> y(cols_, 0.0);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) y[j] += a_[i * cols_ + j] * x[i];
        }
        return y;
    }

    /// Principal submatrix on the given (sorted or unsorted) index set.
    Matrix submatrix(std::span<const int> idx) const {
        Matrix m(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                m(i, j) = (*this)(static_cast<std::size_t>(idx[i]), static_cast<std::size_t>(idx[j]));
            }
        }
        return m;
    }

    Matrix transposed() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    /// Determinant by LU with partial pivoting. Intended for the small
    /// (I - A_H) blocks of the factor-theorem identity.
    double determinant() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix::determinant: not square");
        const std::size_t n = rows_;
        std::vector<double> lu(a_);
        double det = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            double best = std::fabs(lu[k * n + k]);
            for (std::size_t i = k + 1; i < n; ++i) {
                const double v = std::fabs(lu[i * n + k]);
                if (v > best) {
                    best = v;
                    piv = i;
                }
            }
            if (best == 0.0) return 0.0;
            if (piv != k) {
                for (std::size_t j = 0; j < n; ++j) std::swap(lu[k * n + j], lu[piv * n + j]);
                det = -det;
            }
            det *= lu[k * n + k];
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = lu[i * n + k] / lu[k * n + k];
                for (std::size_t j = k + 1; j < n; ++j) lu[i * n + j] -= f * lu[k * n + j];
            }
        }
        return det;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

inline double l1_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::fabs(x);
    return s;
}

inline double linf_norm(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::fabs(x));
    return s;
}

} // namespace gdq
