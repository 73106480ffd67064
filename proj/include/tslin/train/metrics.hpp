#pragma once

#include <cmath>

#include "tslin/core/errors.hpp"
#include "tslin/core/tensor3.hpp"

namespace tslin {

/// Mean squared error over all batch x steps x channels entries.
inline double mse(const Tensor3& pred, const Tensor3& target) {
    require_same_shape(pred, target, "mse");
    double sum = 0.0;
    const auto& p = pred.values();
    const auto& t = target.values();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - t[i];
        sum += d * d;
    }
    return sum / static_cast<double>(p.size());
}

/// Mean absolute error over all entries.
inline double mae(const Tensor3& pred, const Tensor3& target) {
    require_same_shape(pred, target, "mae");
    double sum = 0.0;
    const auto& p = pred.values();
    const auto& t = target.values();
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - t[i]);
    return sum / static_cast<double>(p.size());
}

/// d mse / d pred = 2 (pred - target) / N.
inline Tensor3 mse_grad(const Tensor3& pred, const Tensor3& target) {
    require_same_shape(pred, target, "mse_grad");
    Tensor3 g(pred.batch(), pred.steps(), pred.channels());
    const double scale = 2.0 / static_cast<double>(pred.size());
    const auto& p = pred.values();
    const auto& t = target.values();
    auto& gv = g.values();
    for (std::size_t i = 0; i < p.size(); ++i) gv[i] = scale * (p[i] - t[i]);
    return g;
}

} // namespace tslin
