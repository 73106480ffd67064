#pragma once

#include <cmath>
#include <vector>

#include "tslin/core/errors.hpp"

namespace tslin {

/// Central-difference gradient oracle: entry i is
/// (f(theta + h e_i) - f(theta - h e_i)) / (2h).
/// f receives the perturbed parameter vector by const reference.
template <typename F>
std::vector<double> finite_diff_grad(F&& f, std::vector<double> theta, double h) {
    if (!(h > 0.0)) {
        throw ConfigError("finite_diff_grad: step must be positive");
    }
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double orig = theta[i];
        theta[i] = orig + h;
        const double fp = f(const_cast<const std::vector<double>&>(theta));
        theta[i] = orig - h;
        const double fm = f(const_cast<const std::vector<double>&>(theta));
        theta[i] = orig;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw NumericError("finite_diff_grad: non-finite evaluation at coordinate " +
                               std::to_string(i));
        }
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

/// |a - b| / max(|a|, |b|), zero when both vanish.
inline double rel_err(double a, double b) {
    const double denom = std::max(std::abs(a), std::abs(b));
    return denom == 0.0 ? 0.0 : std::abs(a - b) / denom;
}

} // namespace tslin
