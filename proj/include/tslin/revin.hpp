#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/tensor3.hpp"

namespace tslin {

/// Reversible instance normalization. Statistics are per instance and per
/// channel over the lookback window; gamma/beta are learnable per-channel
/// affine parameters shared between the normalize and denormalize sides.

inline constexpr double kRevinDefaultEps = 1e-5;
inline constexpr double kDegenerateGamma = 1e-12;

struct RevinStats {
    Matrix mu;    // batch x channels
    Matrix sigma; // batch x channels, sqrt(population var + eps) >= sqrt(eps)
    double eps = kRevinDefaultEps;
    std::size_t window = 0; // L the statistics were computed over
};

inline RevinStats revin_stats(const Tensor3& x, double eps) {
    if (x.steps() == 0) {
        throw DataError("revin_stats: empty lookback window");
    }
    if (!(eps > 0.0)) {
        throw ConfigError("revin_stats: eps must be positive");
    }
    const std::size_t B = x.batch(), L = x.steps(), C = x.channels();
    RevinStats s;
    s.eps = eps;
    s.window = L;
    s.mu = Matrix(B, C);
    s.sigma = Matrix(B, C);
    const double inv_len = 1.0 / static_cast<double>(L);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            double sum = 0.0;
            for (std::size_t t = 0; t < L; ++t) sum += x.at(b, t, c);
            const double mu = sum * inv_len;
            double sq = 0.0;
            for (std::size_t t = 0; t < L; ++t) {
                const double d = x.at(b, t, c) - mu;
                sq += d * d;
            }
            s.mu(b, c) = mu;
            s.sigma(b, c) = std::sqrt(sq * inv_len + eps);
        }
    }
    return s;
}

inline void require_stats_match(const RevinStats& s, const Tensor3& t, const char* what) {
    if (s.mu.rows() != t.batch() || s.mu.cols() != t.channels()) {
        throw ShapeError(std::string(what) + ": stats " + s.mu.shape_str() +
                         " do not match tensor " + t.shape_str());
    }
}

inline void require_affine_size(const std::vector<double>& gamma,
                                const std::vector<double>& beta,
                                std::size_t channels, const char* what) {
    if (gamma.size() != channels || beta.size() != channels) {
        throw ShapeError(std::string(what) + ": affine length " +
                         std::to_string(gamma.size()) + "/" + std::to_string(beta.size()) +
                         " for " + std::to_string(channels) + " channels");
    }
}

/// x_tilde = gamma_c * (x - mu)/sigma + beta_c
inline Tensor3 revin_normalize(const Tensor3& x, const RevinStats& s,
                               const std::vector<double>& gamma,
                               const std::vector<double>& beta) {
    require_stats_match(s, x, "revin_normalize");
    require_affine_size(gamma, beta, x.channels(), "revin_normalize");
    Tensor3 out(x.batch(), x.steps(), x.channels());
    for (std::size_t b = 0; b < x.batch(); ++b) {
        for (std::size_t c = 0; c < x.channels(); ++c) {
            const double mu = s.mu(b, c);
            const double inv_sigma = 1.0 / s.sigma(b, c);
            const double g = gamma[c], be = beta[c];
            for (std::size_t t = 0; t < x.steps(); ++t) {
                out.at(b, t, c) = g * (x.at(b, t, c) - mu) * inv_sigma + be;
            }
        }
    }
    return out;
}

/// y_hat = (o - beta_c)/gamma_c * sigma + mu. Requires non-degenerate gamma.
inline Tensor3 revin_denormalize(const Tensor3& o, const RevinStats& s,
                                 const std::vector<double>& gamma,
                                 const std::vector<double>& beta) {
    require_stats_match(s, o, "revin_denormalize");
    require_affine_size(gamma, beta, o.channels(), "revin_denormalize");
    for (std::size_t c = 0; c < gamma.size(); ++c) {
        if (std::abs(gamma[c]) < kDegenerateGamma) {
            throw NumericError("revin_denormalize: degenerate affine, |gamma[" +
                               std::to_string(c) + "]| < 1e-12");
        }
    }
    Tensor3 out(o.batch(), o.steps(), o.channels());
    for (std::size_t b = 0; b < o.batch(); ++b) {
        for (std::size_t c = 0; c < o.channels(); ++c) {
            const double mu = s.mu(b, c);
            const double sigma = s.sigma(b, c);
            const double inv_g = 1.0 / gamma[c];
            const double be = beta[c];
            for (std::size_t t = 0; t < o.steps(); ++t) {
                out.at(b, t, c) = (o.at(b, t, c) - be) * inv_g * sigma + mu;
            }
        }
    }
    return out;
}

/// Accumulator threading the statistics-path gradients between the
/// denormalize and normalize backward passes of one instance batch.
struct RevinBackwardAcc {
    Matrix dmu;    // batch x channels
    Matrix dsigma; // batch x channels
    std::vector<double> dgamma;
    std::vector<double> dbeta;

    RevinBackwardAcc(std::size_t batch, std::size_t channels)
        : dmu(batch, channels), dsigma(batch, channels),
          dgamma(channels, 0.0), dbeta(channels, 0.0) {}
};

/// Backward of denormalize. Returns grad wrt o; accumulates grads wrt
/// gamma, beta and the per-instance mu, sigma.
inline Tensor3 revin_denormalize_backward(const Tensor3& grad_yhat, const Tensor3& o,
                                          const RevinStats& s,
                                          const std::vector<double>& gamma,
                                          const std::vector<double>& beta,
                                          RevinBackwardAcc& acc) {
    require_same_shape(grad_yhat, o, "revin_denormalize_backward");
    require_stats_match(s, o, "revin_denormalize_backward");
    Tensor3 grad_o(o.batch(), o.steps(), o.channels());
    for (std::size_t b = 0; b < o.batch(); ++b) {
        for (std::size_t c = 0; c < o.channels(); ++c) {
            const double sigma = s.sigma(b, c);
            const double inv_g = 1.0 / gamma[c];
            const double be = beta[c];
            double dmu = 0.0, dsigma = 0.0, dgamma = 0.0, dbeta = 0.0;
            for (std::size_t t = 0; t < o.steps(); ++t) {
                const double g_y = grad_yhat.at(b, t, c);
                const double centered = (o.at(b, t, c) - be) * inv_g;
                grad_o.at(b, t, c) = g_y * sigma * inv_g;
                dsigma += g_y * centered;
                dmu += g_y;
                dgamma -= g_y * centered * inv_g * sigma;
                dbeta -= g_y * sigma * inv_g;
            }
            acc.dmu(b, c) += dmu;
            acc.dsigma(b, c) += dsigma;
            acc.dgamma[c] += dgamma;
            acc.dbeta[c] += dbeta;
        }
    }
    return grad_o;
}

/// Backward of normalize plus the statistics chain rule. mu and sigma are
/// differentiable functions of x, so the accumulated statistics gradients
/// are folded back into grad_x here. Call after all other contributions to
/// acc have been recorded.
inline Tensor3 revin_normalize_backward(const Tensor3& grad_xtilde, const Tensor3& x,
                                        const RevinStats& s,
                                        const std::vector<double>& gamma,
                                        RevinBackwardAcc& acc) {
    require_same_shape(grad_xtilde, x, "revin_normalize_backward");
    require_stats_match(s, x, "revin_normalize_backward");
    const std::size_t B = x.batch(), L = x.steps(), C = x.channels();
    const double inv_len = 1.0 / static_cast<double>(L);
    Tensor3 grad_x(B, L, C);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t c = 0; c < C; ++c) {
            const double mu = s.mu(b, c);
            const double sigma = s.sigma(b, c);
            const double inv_sigma = 1.0 / sigma;
            const double g = gamma[c];
            double dgamma = 0.0, dbeta = 0.0, dz_sum = 0.0, dz_z_sum = 0.0;
            for (std::size_t t = 0; t < L; ++t) {
                const double h = grad_xtilde.at(b, t, c);
                const double z = (x.at(b, t, c) - mu) * inv_sigma;
                const double dz = h * g;
                dgamma += h * z;
                dbeta += h;
                dz_sum += dz;
                dz_z_sum += dz * z;
                grad_x.at(b, t, c) = dz * inv_sigma;
            }
            acc.dgamma[c] += dgamma;
            acc.dbeta[c] += dbeta;
            const double dmu_total = acc.dmu(b, c) - dz_sum * inv_sigma;
            const double dsigma_total = acc.dsigma(b, c) - dz_z_sum * inv_sigma;
            for (std::size_t t = 0; t < L; ++t) {
                const double centered = x.at(b, t, c) - mu;
                grad_x.at(b, t, c) +=
                    dmu_total * inv_len + dsigma_total * centered * inv_len * inv_sigma;
            }
        }
    }
    return grad_x;
}

/// Forward intermediates of the identity-model round trip
/// y = denormalize(normalize(x)).
struct RevinCache {
    Tensor3 x;
    RevinStats stats;
    Tensor3 x_norm;
};

inline Tensor3 revin_roundtrip_forward(const Tensor3& x, double eps,
                                       const std::vector<double>& gamma,
                                       const std::vector<double>& beta,
                                       RevinCache& cache) {
    cache.x = x;
    cache.stats = revin_stats(x, eps);
    cache.x_norm = revin_normalize(x, cache.stats, gamma, beta);
    return revin_denormalize(cache.x_norm, cache.stats, gamma, beta);
}

/// Gradients of the identity-model round trip wrt input and affine.
inline Tensor3 revin_backward(const Tensor3& grad_out, const RevinCache& cache,
                              const std::vector<double>& gamma,
                              const std::vector<double>& beta,
                              std::vector<double>& grad_gamma,
                              std::vector<double>& grad_beta) {
    if (!cache.x.same_shape(grad_out)) {
        throw StateError("revin_backward: cache built for " + cache.x.shape_str() +
                         ", grad_out is " + grad_out.shape_str());
    }
    RevinBackwardAcc acc(cache.x.batch(), cache.x.channels());
    Tensor3 grad_norm = revin_denormalize_backward(grad_out, cache.x_norm, cache.stats,
                                                   gamma, beta, acc);
    Tensor3 grad_x = revin_normalize_backward(grad_norm, cache.x, cache.stats, gamma, acc);
    grad_gamma = acc.dgamma;
    grad_beta = acc.dbeta;
    return grad_x;
}

} // namespace tslin
