#pragma once

#include <cmath>

namespace tslin {

enum class GeluForm { Exact, Tanh };

namespace detail {
inline constexpr double kSqrt2 = 1.4142135623730950488;
inline constexpr double kSqrt2OverPi = 0.79788456080286535588; // sqrt(2/pi)
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;  // 1/sqrt(2*pi)
inline constexpr double kCubicCoef = 0.044715;
} // namespace detail

/// Standard-normal CDF, erf-based.
inline double normal_cdf(double x) {
    return 0.5 * (1.0 + std::erf(x / detail::kSqrt2));
}

/// Standard-normal density.
inline double normal_pdf(double x) {
    return detail::kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// GELU(x) = x * Phi(x).
inline double gelu_exact(double x) {
    return x * normal_cdf(x);
}

/// Fast form: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3))).
inline double gelu_tanh(double x) {
    const double u = detail::kSqrt2OverPi * (x + detail::kCubicCoef * x * x * x);
    return 0.5 * x * (1.0 + std::tanh(u));
}

/// d/dx gelu_exact = Phi(x) + x * phi(x).
inline double gelu_exact_grad(double x) {
    return normal_cdf(x) + x * normal_pdf(x);
}

/// Analytic derivative of the tanh form.
inline double gelu_tanh_grad(double x) {
    const double u = detail::kSqrt2OverPi * (x + detail::kCubicCoef * x * x * x);
    const double t = std::tanh(u);
    const double du = detail::kSqrt2OverPi * (1.0 + 3.0 * detail::kCubicCoef * x * x);
    return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du;
}

inline double gelu(double x, GeluForm form) {
    return form == GeluForm::Exact ? gelu_exact(x) : gelu_tanh(x);
}

inline double gelu_grad(double x, GeluForm form) {
    return form == GeluForm::Exact ? gelu_exact_grad(x) : gelu_tanh_grad(x);
}

} // namespace tslin
