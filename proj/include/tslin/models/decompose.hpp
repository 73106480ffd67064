#pragma once

#include <cstddef>
#include <utility>

#include "tslin/core/errors.hpp"
#include "tslin/core/tensor3.hpp"

namespace tslin {

/// Trend/seasonal split along the steps axis. The trend at step t is the
/// mean of a replicate-padded window of `kernel` steps centered at t,
/// summed left to right; the seasonal part is the remainder x - trend.
inline std::pair<Tensor3, Tensor3> decompose_moving_average(const Tensor3& x,
                                                            std::size_t kernel) {
    if (kernel % 2 == 0 || kernel < 1) {
        throw ConfigError("decompose_moving_average: kernel must be odd and >= 1, got " +
                          std::to_string(kernel));
    }
    if (kernel > 2 * x.steps() - 1) {
        throw ConfigError("decompose_moving_average: kernel " + std::to_string(kernel) +
                          " exceeds 2L-1 for L = " + std::to_string(x.steps()));
    }
    const std::size_t B = x.batch(), L = x.steps(), C = x.channels();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kernel / 2);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(L) - 1;
    const double inv_k = 1.0 / static_cast<double>(kernel);
    Tensor3 trend(B, L, C), seasonal(B, L, C);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t t = 0; t < L; ++t) {
                double sum = 0.0;
                const std::ptrdiff_t tt = static_cast<std::ptrdiff_t>(t);
                for (std::ptrdiff_t j = tt - half; j <= tt + half; ++j) {
                    const std::ptrdiff_t jj = j < 0 ? 0 : (j > last ? last : j);
                    sum += x.at(b, static_cast<std::size_t>(jj), c);
                }
                const double tr = sum * inv_k;
                const double se = x.at(b, t, c) - tr;
                seasonal.at(b, t, c) = se;
                // Re-center the trend on the rounded remainder so the pair
                // reconstructs x without drift.
                trend.at(b, t, c) = x.at(b, t, c) - se;
            }
        }
    }
    return {std::move(trend), std::move(seasonal)};
}

/// Adjoint of the decomposition: given grads wrt trend and seasonal,
/// produce the grad wrt x. trend = M x (replicate-padded moving average),
/// seasonal = x - M x, so dx = d_seasonal + M^T (d_trend - d_seasonal).
inline Tensor3 decompose_backward(const Tensor3& d_trend, const Tensor3& d_seasonal,
                                  std::size_t kernel) {
    require_same_shape(d_trend, d_seasonal, "decompose_backward");
    const std::size_t B = d_trend.batch(), L = d_trend.steps(), C = d_trend.channels();
    const std::ptrdiff_t half = static_cast<std::ptrdiff_t>(kernel / 2);
    const std::ptrdiff_t last = static_cast<std::ptrdiff_t>(L) - 1;
    const double inv_k = 1.0 / static_cast<double>(kernel);
    Tensor3 dx = d_seasonal;
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            for (std::size_t t = 0; t < L; ++t) {
                const double through =
                    (d_trend.at(b, t, c) - d_seasonal.at(b, t, c)) * inv_k;
                const std::ptrdiff_t tt = static_cast<std::ptrdiff_t>(t);
                for (std::ptrdiff_t j = tt - half; j <= tt + half; ++j) {
                    const std::ptrdiff_t jj = j < 0 ? 0 : (j > last ? last : j);
                    dx.at(b, static_cast<std::size_t>(jj), c) += through;
                }
            }
        }
    }
    return dx;
}

} // namespace tslin
