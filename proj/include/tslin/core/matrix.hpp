#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"

namespace tslin {

/// Dense row-major matrix of 64-bit floats. Column vectors are n x 1.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
        : rows_(rows), cols_(cols), v_(std::move(values)) {
        if (v_.size() != rows_ * cols_) {
            throw ShapeError("Matrix: " + std::to_string(v_.size()) +
                             " values for shape " + shape_str());
        }
    }

    Matrix(std::initializer_list<std::initializer_list<double>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        v_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) {
                throw ShapeError("Matrix: ragged initializer rows");
            }
            v_.insert(v_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* row(std::size_t i) { return v_.data() + i * cols_; }
    const double* row(std::size_t i) const { return v_.data() + i * cols_; }

    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

    bool same_shape(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_;
    }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && v_ == o.v_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> v_;
};

/// a (m x k) * b (k x n). Throws ShapeError naming both shapes on mismatch.
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() +
                         " * " + b.shape_str());
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        double* ci = c.row(i);
        const double* ai = a.row(i);
        for (std::size_t l = 0; l < k; ++l) {
            const double ail = ai[l];
            const double* bl = b.row(l);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ail * bl[j];
        }
    }
    return c;
}

/// a (m x k) * b^T where b is (n x k). Row-by-row dot products.
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw ShapeError("matmul_nt: inner dimensions disagree, " + a.shape_str() +
                         " * (" + b.shape_str() + ")^T");
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.rows();
    Matrix c(m, n);
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a.row(i);
        double* ci = c.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b.row(j);
            double s = 0.0;
            for (std::size_t l = 0; l < k; ++l) s += ai[l] * bj[l];
            ci[j] = s;
        }
    }
    return c;
}

/// a^T * b where a is (m x k), b is (m x n); result is (k x n).
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_tn: inner dimensions disagree, (" + a.shape_str() +
                         ")^T * " + b.shape_str());
    }
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix c(k, n);
    for (std::size_t l = 0; l < m; ++l) {
        const double* al = a.row(l);
        const double* bl = b.row(l);
        for (std::size_t i = 0; i < k; ++i) {
            const double ali = al[i];
            double* ci = c.row(i);
            for (std::size_t j = 0; j < n; ++j) ci[j] += ali * bl[j];
        }
    }
    return c;
}

inline Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

inline void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shapes disagree, " + a.shape_str() +
                         " vs " + b.shape_str());
    }
}

} // namespace tslin
