#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/gelu.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/tensor3.hpp"
#include "tslin/models/config.hpp"
#include "tslin/models/decompose.hpp"
#include "tslin/models/param_set.hpp"
#include "tslin/revin.hpp"

namespace tslin {

/// Variant-specific intermediates retained for the backward pass.
struct ForwardCache {
    bool valid = false;
    Variant variant = Variant::Linear;
    std::size_t batch = 0, lookback = 0, horizon = 0, channels = 0;

    Tensor3 x;        // raw model input
    RevinStats stats; // RevIN variants
    Tensor3 x_norm;   // RevIN variants
    Tensor3 o_pre;    // RevIN variants: output before denormalization
    Tensor3 h_pre;    // GLinear: first-layer pre-activation
    Tensor3 h_act;    // GLinear: activation output
    Tensor3 trend;    // DLinear
    Tensor3 seasonal; // DLinear
};

struct Gradients {
    ParamSet params; // mirrors the model's ParamSet layout
    Tensor3 input;   // grad wrt the model input
};

namespace detail {

/// rows(x) * W^T + b broadcast over rows. W is (out x in), b is (out x 1).
inline Matrix affine_rows(const Matrix& x, const Matrix& w, const Matrix& b) {
    Matrix out = matmul_nt(x, w);
    for (std::size_t i = 0; i < out.rows(); ++i) {
        double* oi = out.row(i);
        for (std::size_t j = 0; j < out.cols(); ++j) oi[j] += b(j, 0);
    }
    return out;
}

inline Matrix col_sums(const Matrix& m) {
    Matrix s(m.cols(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const double* ri = m.row(i);
        for (std::size_t j = 0; j < m.cols(); ++j) s(j, 0) += ri[j];
    }
    return s;
}

} // namespace detail

/// One of the five predictors: config plus trainable parameters, with a
/// cache-producing forward and a matching backward. Forward/backward are
/// const; only the training loop mutates parameters.
class Predictor {
public:
    Predictor(PredictorConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)) {
        cfg_.validate();
        params_ = make_param_set(cfg_);
        init_params(params_, cfg_, seed);
    }

    Predictor(PredictorConfig cfg, ParamSet params)
        : cfg_(std::move(cfg)), params_(std::move(params)) {
        cfg_.validate();
        const ParamSet expected = make_param_set(cfg_);
        if (expected.entries.size() != params_.entries.size()) {
            throw ShapeError("Predictor: parameter set does not match config layout");
        }
        for (std::size_t i = 0; i < expected.entries.size(); ++i) {
            if (expected.entries[i].name != params_.entries[i].name ||
                expected.entries[i].value.rows() != params_.entries[i].value.rows() ||
                expected.entries[i].value.cols() != params_.entries[i].value.cols()) {
                throw ShapeError("Predictor: parameter entry " + params_.entries[i].name +
                                 " does not match config layout");
            }
        }
    }

    const PredictorConfig& config() const { return cfg_; }
    ParamSet& params() { return params_; }
    const ParamSet& params() const { return params_; }

    Tensor3 forward(const Tensor3& x) const {
        ForwardCache scratch;
        return forward(x, scratch);
    }

    Tensor3 forward(const Tensor3& x, ForwardCache& cache) const {
        check_input(x);
        const std::size_t B = x.batch(), T = cfg_.horizon, C = cfg_.channels;

        cache = ForwardCache{};
        cache.variant = cfg_.variant;
        cache.batch = B;
        cache.lookback = cfg_.lookback;
        cache.horizon = T;
        cache.channels = C;
        cache.x = x;

        const bool revin = variant_uses_revin(cfg_.variant);
        if (revin) {
            cache.stats = revin_stats(x, cfg_.revin_eps);
            cache.x_norm = revin_normalize(x, cache.stats, gamma(), beta());
        }
        if (cfg_.variant == Variant::DLinear) {
            auto parts = decompose_moving_average(x, cfg_.ma_kernel);
            cache.trend = std::move(parts.first);
            cache.seasonal = std::move(parts.second);
        }
        if (cfg_.variant == Variant::GLinear) {
            const std::size_t H = cfg_.hidden_width();
            cache.h_pre = Tensor3(B, H, C);
            cache.h_act = Tensor3(B, H, C);
        }

        Tensor3 out(B, T, C);
        const Tensor3& model_in = revin ? cache.x_norm : x;
        const int channels = static_cast<int>(C);
#pragma omp parallel for schedule(static)
        for (int ci = 0; ci < channels; ++ci) {
            const std::size_t c = static_cast<std::size_t>(ci);
            out.set_channel(c, forward_channel(c, model_in, cache));
        }

        if (revin) {
            cache.o_pre = out;
            out = revin_denormalize(out, cache.stats, gamma(), beta());
        }
        cache.valid = true;
        return out;
    }

    Gradients backward(const ForwardCache& cache, const Tensor3& grad_out) const {
        check_cache(cache, grad_out);
        const std::size_t B = cache.batch, L = cfg_.lookback, C = cfg_.channels;
        const bool revin = variant_uses_revin(cfg_.variant);

        Gradients g;
        g.params = params_.zeros_like();

        RevinBackwardAcc acc(B, C);
        Tensor3 grad_opre;
        if (revin) {
            grad_opre = revin_denormalize_backward(grad_out, cache.o_pre, cache.stats,
                                                   gamma(), beta(), acc);
        } else {
            grad_opre = grad_out;
        }

        const Tensor3& model_in = revin ? cache.x_norm : cache.x;
        Tensor3 grad_model_in(B, L, C);
        Tensor3 d_trend, d_seasonal;
        if (cfg_.variant == Variant::DLinear) {
            d_trend = Tensor3(B, L, C);
            d_seasonal = Tensor3(B, L, C);
        }

        // Per-channel block gradients land in scratch first so the final
        // accumulation over channels runs in a fixed order regardless of
        // threading.
        const std::size_t epb = entries_per_block(cfg_.variant);
        std::vector<std::vector<Matrix>> scratch(C);
        const int channels = static_cast<int>(C);
#pragma omp parallel for schedule(static)
        for (int ci = 0; ci < channels; ++ci) {
            const std::size_t c = static_cast<std::size_t>(ci);
            scratch[c] = backward_channel(c, model_in, cache, grad_opre, grad_model_in,
                                          d_trend, d_seasonal);
        }

        for (std::size_t c = 0; c < C; ++c) {
            const std::size_t block = cfg_.individual_weights() ? c : 0;
            for (std::size_t s = 0; s < epb; ++s) {
                auto& dst = g.params[block * epb + s].values();
                const auto& src = scratch[c][s].values();
                for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
            }
        }

        switch (cfg_.variant) {
            case Variant::DLinear:
                g.input = decompose_backward(d_trend, d_seasonal, cfg_.ma_kernel);
                break;
            case Variant::RLinear:
            case Variant::GLinear: {
                g.input = revin_normalize_backward(grad_model_in, cache.x, cache.stats,
                                                   gamma(), acc);
                const std::size_t gi = gamma_index();
                for (std::size_t c = 0; c < C; ++c) {
                    g.params[gi](c, 0) = acc.dgamma[c];
                    g.params[gi + 1](c, 0) = acc.dbeta[c];
                }
                break;
            }
            default:
                g.input = std::move(grad_model_in);
                break;
        }
        return g;
    }

private:
    void check_input(const Tensor3& x) const {
        if (x.steps() != cfg_.lookback || x.channels() != cfg_.channels) {
            throw ShapeError(std::string("forward: input ") + x.shape_str() +
                             " does not match config L=" + std::to_string(cfg_.lookback) +
                             " C=" + std::to_string(cfg_.channels));
        }
        if (x.batch() == 0) {
            throw ShapeError("forward: empty batch");
        }
    }

    void check_cache(const ForwardCache& cache, const Tensor3& grad_out) const {
        if (!cache.valid || cache.variant != cfg_.variant ||
            cache.lookback != cfg_.lookback || cache.horizon != cfg_.horizon ||
            cache.channels != cfg_.channels) {
            throw StateError("backward: cache does not match this model");
        }
        if (grad_out.batch() != cache.batch || grad_out.steps() != cache.horizon ||
            grad_out.channels() != cache.channels) {
            throw ShapeError("backward: grad_out " + grad_out.shape_str() +
                             " does not match cached forward batch");
        }
    }

    std::size_t block_index(std::size_t c) const {
        return cfg_.individual_weights() ? c : 0;
    }

    const Matrix& param(std::size_t block, std::size_t slot) const {
        return params_[block * entries_per_block(cfg_.variant) + slot];
    }

    std::size_t gamma_index() const {
        return weight_blocks(cfg_) * entries_per_block(cfg_.variant);
    }

    std::vector<double> gamma() const {
        const Matrix& g = params_[gamma_index()];
        return {g.values().begin(), g.values().end()};
    }

    std::vector<double> beta() const {
        const Matrix& b = params_[gamma_index() + 1];
        return {b.values().begin(), b.values().end()};
    }

    Matrix forward_channel(std::size_t c, const Tensor3& model_in, ForwardCache& cache) const {
        const std::size_t block = block_index(c);
        switch (cfg_.variant) {
            case Variant::Linear:
            case Variant::RLinear: {
                return detail::affine_rows(model_in.channel(c), param(block, 0),
                                           param(block, 1));
            }
            case Variant::NLinear: {
                Matrix xc = model_in.channel(c);
                const std::size_t L = xc.cols();
                std::vector<double> last(xc.rows());
                for (std::size_t r = 0; r < xc.rows(); ++r) {
                    last[r] = xc(r, L - 1);
                    double* row = xc.row(r);
                    for (std::size_t t = 0; t < L; ++t) row[t] -= last[r];
                }
                Matrix out = detail::affine_rows(xc, param(block, 0), param(block, 1));
                for (std::size_t r = 0; r < out.rows(); ++r) {
                    double* row = out.row(r);
                    for (std::size_t t = 0; t < out.cols(); ++t) row[t] += last[r];
                }
                return out;
            }
            case Variant::DLinear: {
                Matrix out = detail::affine_rows(cache.trend.channel(c), param(block, 0),
                                                 param(block, 1));
                Matrix seas = detail::affine_rows(cache.seasonal.channel(c), param(block, 2),
                                                  param(block, 3));
                for (std::size_t j = 0; j < out.size(); ++j)
                    out.values()[j] += seas.values()[j];
                return out;
            }
            case Variant::GLinear: {
                Matrix h_pre = detail::affine_rows(model_in.channel(c), param(block, 0),
                                                   param(block, 1));
                Matrix h_act(h_pre.rows(), h_pre.cols());
                for (std::size_t j = 0; j < h_pre.size(); ++j)
                    h_act.values()[j] = gelu(h_pre.values()[j], cfg_.activation);
                cache.h_pre.set_channel(c, h_pre);
                cache.h_act.set_channel(c, h_act);
                return detail::affine_rows(h_act, param(block, 2), param(block, 3));
            }
        }
        throw ConfigError("forward: unknown variant");
    }

    /// Returns per-block gradients {dW, db, ...} for channel c and fills
    /// this channel of grad_model_in (and d_trend/d_seasonal for DLinear).
    std::vector<Matrix> backward_channel(std::size_t c, const Tensor3& model_in,
                                         const ForwardCache& cache, const Tensor3& grad_opre,
                                         Tensor3& grad_model_in, Tensor3& d_trend,
                                         Tensor3& d_seasonal) const {
        const std::size_t block = block_index(c);
        const Matrix d_out = grad_opre.channel(c);
        switch (cfg_.variant) {
            case Variant::Linear:
            case Variant::RLinear: {
                const Matrix xc = model_in.channel(c);
                Matrix dw = matmul_tn(d_out, xc);
                Matrix db = detail::col_sums(d_out);
                grad_model_in.set_channel(c, matmul(d_out, param(block, 0)));
                return {std::move(dw), std::move(db)};
            }
            case Variant::NLinear: {
                Matrix xc = model_in.channel(c);
                const std::size_t L = xc.cols();
                std::vector<double> last(xc.rows());
                for (std::size_t r = 0; r < xc.rows(); ++r) {
                    last[r] = xc(r, L - 1);
                    double* row = xc.row(r);
                    for (std::size_t t = 0; t < L; ++t) row[t] -= last[r];
                }
                Matrix dw = matmul_tn(d_out, xc);
                Matrix db = detail::col_sums(d_out);
                Matrix dx = matmul(d_out, param(block, 0));
                for (std::size_t r = 0; r < dx.rows(); ++r) {
                    double d_last = 0.0;
                    const double* go = d_out.row(r);
                    for (std::size_t t = 0; t < d_out.cols(); ++t) d_last += go[t];
                    const double* dxr = dx.row(r);
                    for (std::size_t t = 0; t < L; ++t) d_last -= dxr[t];
                    dx(r, L - 1) += d_last;
                }
                grad_model_in.set_channel(c, dx);
                return {std::move(dw), std::move(db)};
            }
            case Variant::DLinear: {
                const Matrix trend_c = cache.trend.channel(c);
                const Matrix seas_c = cache.seasonal.channel(c);
                Matrix dwt = matmul_tn(d_out, trend_c);
                Matrix dbt = detail::col_sums(d_out);
                Matrix dws = matmul_tn(d_out, seas_c);
                Matrix dbs = detail::col_sums(d_out);
                d_trend.set_channel(c, matmul(d_out, param(block, 0)));
                d_seasonal.set_channel(c, matmul(d_out, param(block, 2)));
                return {std::move(dwt), std::move(dbt), std::move(dws), std::move(dbs)};
            }
            case Variant::GLinear: {
                const Matrix xc = model_in.channel(c);
                const Matrix h_pre = cache.h_pre.channel(c);
                const Matrix h_act = cache.h_act.channel(c);
                Matrix dw2 = matmul_tn(d_out, h_act);
                Matrix db2 = detail::col_sums(d_out);
                Matrix dh = matmul(d_out, param(block, 2));
                for (std::size_t j = 0; j < dh.size(); ++j) {
                    dh.values()[j] *= gelu_grad(h_pre.values()[j], cfg_.activation);
                }
                Matrix dw1 = matmul_tn(dh, xc);
                Matrix db1 = detail::col_sums(dh);
                grad_model_in.set_channel(c, matmul(dh, param(block, 0)));
                return {std::move(dw1), std::move(db1), std::move(dw2), std::move(db2)};
            }
        }
        throw ConfigError("backward: unknown variant");
    }

    PredictorConfig cfg_;
    ParamSet params_;
};

} // namespace tslin
