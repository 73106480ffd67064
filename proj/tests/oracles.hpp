#pragma once

// Test-only reference implementations, kept independent of the library
// code paths they are used to check.

#include <cmath>
#include <cstddef>
#include <vector>

#include "tslin/core/matrix.hpp"
#include "tslin/core/tensor3.hpp"

namespace oracle {

/// erf via its Maclaurin series; accurate to ~1e-13 for |x| <= 3.
inline double erf_series(double x) {
    const double two_over_sqrt_pi = 1.1283791670955125739;
    double term = x;
    double sum = x;
    for (int n = 1; n < 80; ++n) {
        term *= -x * x / static_cast<double>(n);
        sum += term / static_cast<double>(2 * n + 1);
    }
    return two_over_sqrt_pi * sum;
}

/// Standard-normal CDF built on the series oracle.
inline double normal_cdf_series(double x) {
    return 0.5 * (1.0 + erf_series(x / std::sqrt(2.0)));
}

/// Naive triple-loop matrix product.
inline tslin::Matrix matmul_loops(const tslin::Matrix& a, const tslin::Matrix& b) {
    tslin::Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

/// Two-pass mean and population variance of one (b, c) window.
inline void two_pass_stats(const tslin::Tensor3& x, std::size_t b, std::size_t c,
                           double& mean, double& var) {
    const std::size_t n = x.steps();
    double sum = 0.0;
    for (std::size_t t = 0; t < n; ++t) sum += x.at(b, t, c);
    mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const double d = x.at(b, t, c) - mean;
        sq += d * d;
    }
    var = sq / static_cast<double>(n);
}

/// Replicate-padded centered moving average of one sequence.
inline std::vector<double> moving_average(const std::vector<double>& x, std::size_t kernel) {
    const std::size_t n = x.size();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kernel / 2);
    std::vector<double> out(n);
    for (std::size_t t = 0; t < n; ++t) {
        double sum = 0.0;
        for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(t) - half;
             j <= static_cast<std::ptrdiff_t>(t) + half; ++j) {
            std::ptrdiff_t jj = j;
            if (jj < 0) jj = 0;
            if (jj >= static_cast<std::ptrdiff_t>(n)) jj = static_cast<std::ptrdiff_t>(n) - 1;
            sum += x[static_cast<std::size_t>(jj)];
        }
        out[t] = sum / static_cast<double>(kernel);
    }
    return out;
}

/// Scalar Adam reference: runs `steps` bias-corrected updates on one
/// parameter with a constant gradient.
inline double adam_scalar(double theta, double grad, int steps, double lr, double beta1,
                          double beta2, double eps) {
    double m = 0.0, v = 0.0;
    for (int t = 1; t <= steps; ++t) {
        m = beta1 * m + (1.0 - beta1) * grad;
        v = beta2 * v + (1.0 - beta2) * grad * grad;
        const double m_hat = m / (1.0 - std::pow(beta1, t));
        const double v_hat = v / (1.0 - std::pow(beta2, t));
        theta -= lr * m_hat / (std::sqrt(v_hat) + eps);
    }
    return theta;
}

} // namespace oracle
