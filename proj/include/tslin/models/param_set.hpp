#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/models/config.hpp"

namespace tslin {

/// Flat named collection of trainable arrays. Biases are stored as n x 1
/// matrices. Entry order is fixed by construction and shared by gradients,
/// optimizer state and checkpoints.
struct ParamSet {
    struct Entry {
        std::string name;
        Matrix value;
    };

    std::vector<Entry> entries;

    std::size_t total_scalars() const {
        std::size_t n = 0;
        for (const auto& e : entries) n += e.value.size();
        return n;
    }

    Matrix& operator[](std::size_t i) { return entries[i].value; }
    const Matrix& operator[](std::size_t i) const { return entries[i].value; }

    Matrix* find(const std::string& name) {
        for (auto& e : entries)
            if (e.name == name) return &e.value;
        return nullptr;
    }
    const Matrix* find(const std::string& name) const {
        for (const auto& e : entries)
            if (e.name == name) return &e.value;
        return nullptr;
    }

    /// Same names and shapes, all values zero.
    ParamSet zeros_like() const {
        ParamSet z;
        z.entries.reserve(entries.size());
        for (const auto& e : entries) {
            z.entries.push_back({e.name, Matrix(e.value.rows(), e.value.cols())});
        }
        return z;
    }

    void add_scaled(const ParamSet& other, double scale) {
        if (other.entries.size() != entries.size()) {
            throw ShapeError("ParamSet::add_scaled: entry count mismatch");
        }
        for (std::size_t i = 0; i < entries.size(); ++i) {
            auto& dst = entries[i].value.values();
            const auto& src = other.entries[i].value.values();
            if (dst.size() != src.size()) {
                throw ShapeError("ParamSet::add_scaled: shape mismatch at " + entries[i].name);
            }
            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += scale * src[j];
        }
    }

    std::vector<double> flatten() const {
        std::vector<double> out;
        out.reserve(total_scalars());
        for (const auto& e : entries) {
            const auto& v = e.value.values();
            out.insert(out.end(), v.begin(), v.end());
        }
        return out;
    }

    void unflatten(const std::vector<double>& flat) {
        if (flat.size() != total_scalars()) {
            throw ShapeError("ParamSet::unflatten: got " + std::to_string(flat.size()) +
                             " scalars, need " + std::to_string(total_scalars()));
        }
        std::size_t k = 0;
        for (auto& e : entries) {
            for (double& x : e.value.values()) x = flat[k++];
        }
    }
};

namespace detail {

inline std::string block_prefix(const PredictorConfig& cfg, std::size_t block) {
    std::string p = variant_name(cfg.variant);
    if (cfg.individual_weights()) p += ".c" + std::to_string(block);
    return p + ".";
}

} // namespace detail

/// Number of weight blocks: one per channel in individual mode, else one.
inline std::size_t weight_blocks(const PredictorConfig& cfg) {
    return cfg.individual_weights() ? cfg.channels : 1;
}

/// Entries per weight block (excluding the RevIN affine).
inline std::size_t entries_per_block(Variant v) {
    switch (v) {
        case Variant::DLinear: return 4; // w_trend b_trend w_seasonal b_seasonal
        case Variant::GLinear: return 4; // w1 b1 w2 b2
        default: return 2;               // w b
    }
}

/// Build the parameter layout for a config; values zero-initialized.
inline ParamSet make_param_set(const PredictorConfig& cfg) {
    cfg.validate();
    const std::size_t L = cfg.lookback, T = cfg.horizon, H = cfg.hidden_width();
    ParamSet p;
    for (std::size_t k = 0; k < weight_blocks(cfg); ++k) {
        const std::string pre = detail::block_prefix(cfg, k);
        switch (cfg.variant) {
            case Variant::Linear:
            case Variant::NLinear:
            case Variant::RLinear:
                p.entries.push_back({pre + "w", Matrix(T, L)});
                p.entries.push_back({pre + "b", Matrix(T, 1)});
                break;
            case Variant::DLinear:
                p.entries.push_back({pre + "w_trend", Matrix(T, L)});
                p.entries.push_back({pre + "b_trend", Matrix(T, 1)});
                p.entries.push_back({pre + "w_seasonal", Matrix(T, L)});
                p.entries.push_back({pre + "b_seasonal", Matrix(T, 1)});
                break;
            case Variant::GLinear:
                p.entries.push_back({pre + "w1", Matrix(H, L)});
                p.entries.push_back({pre + "b1", Matrix(H, 1)});
                p.entries.push_back({pre + "w2", Matrix(T, H)});
                p.entries.push_back({pre + "b2", Matrix(T, 1)});
                break;
        }
    }
    if (variant_uses_revin(cfg.variant)) {
        p.entries.push_back({"revin.gamma", Matrix(cfg.channels, 1, 1.0)});
        p.entries.push_back({"revin.beta", Matrix(cfg.channels, 1, 0.0)});
    }
    return p;
}

/// Uniform [-1/sqrt(fan_in), 1/sqrt(fan_in)] init for weights and biases;
/// RevIN affine stays at identity (gamma 1, beta 0).
inline void init_params(ParamSet& p, const PredictorConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& e : p.entries) {
        if (e.name == "revin.gamma" || e.name == "revin.beta") continue;
        // fan-in of a T x L weight is L; its bias uses the same bound.
        const std::size_t fan_in =
            e.value.cols() > 1 ? e.value.cols()
                               : (e.name.ends_with(".b2") ? cfg.hidden_width() : cfg.lookback);
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        for (double& x : e.value.values()) x = rng.uniform(-bound, bound);
    }
}

/// Total scalar count, RevIN affine included where present.
inline std::size_t param_count(const PredictorConfig& cfg) {
    cfg.validate();
    const std::size_t L = cfg.lookback, T = cfg.horizon, H = cfg.hidden_width();
    const std::size_t blocks = weight_blocks(cfg);
    std::size_t per_block = 0;
    switch (cfg.variant) {
        case Variant::Linear:
        case Variant::NLinear:
        case Variant::RLinear: per_block = T * L + T; break;
        case Variant::DLinear: per_block = 2 * (T * L + T); break;
        case Variant::GLinear: per_block = H * L + H + T * H + T; break;
    }
    std::size_t total = blocks * per_block;
    if (variant_uses_revin(cfg.variant)) total += 2 * cfg.channels;
    return total;
}

/// Scalar count of the RevIN affine portion (0 for variants without it).
inline std::size_t revin_param_count(const PredictorConfig& cfg) {
    return variant_uses_revin(cfg.variant) ? 2 * cfg.channels : 0;
}

} // namespace tslin
