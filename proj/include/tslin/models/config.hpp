#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "tslin/core/errors.hpp"
#include "tslin/core/gelu.hpp"
#include "tslin/revin.hpp"

namespace tslin {

enum class Variant { Linear, NLinear, DLinear, RLinear, GLinear };

inline const char* variant_name(Variant v) {
    switch (v) {
        case Variant::Linear: return "linear";
        case Variant::NLinear: return "nlinear";
        case Variant::DLinear: return "dlinear";
        case Variant::RLinear: return "rlinear";
        case Variant::GLinear: return "glinear";
    }
    return "?";
}

inline Variant variant_from_name(const std::string& name) {
    if (name == "linear") return Variant::Linear;
    if (name == "nlinear") return Variant::NLinear;
    if (name == "dlinear") return Variant::DLinear;
    if (name == "rlinear") return Variant::RLinear;
    if (name == "glinear") return Variant::GLinear;
    throw ConfigError("unknown model variant: " + name);
}

inline bool variant_uses_revin(Variant v) {
    return v == Variant::RLinear || v == Variant::GLinear;
}

struct PredictorConfig {
    Variant variant = Variant::Linear;
    std::size_t lookback = 336; // L
    std::size_t horizon = 96;   // T
    std::size_t channels = 1;   // C

    // Per-channel weights vs one shared mapping. Unset picks the variant
    // default: GLinear uses individual weights, the rest share.
    std::optional<bool> individual;

    std::size_t ma_kernel = 25;       // DLinear moving-average kernel, odd
    std::size_t hidden = 0;           // GLinear hidden width, 0 means H = L
    GeluForm activation = GeluForm::Tanh;
    double revin_eps = kRevinDefaultEps;

    bool individual_weights() const {
        return individual.value_or(variant == Variant::GLinear);
    }

    std::size_t hidden_width() const { return hidden == 0 ? lookback : hidden; }

    void validate() const {
        if (lookback < 1 || horizon < 1 || channels < 1) {
            throw ConfigError("predictor config: L, T and C must all be >= 1");
        }
        if (variant == Variant::DLinear && (ma_kernel % 2 == 0 || ma_kernel < 1)) {
            throw ConfigError("predictor config: ma_kernel must be odd and >= 1, got " +
                              std::to_string(ma_kernel));
        }
        if (variant_uses_revin(variant) && !(revin_eps > 0.0)) {
            throw ConfigError("predictor config: revin_eps must be positive");
        }
    }
};

} // namespace tslin
