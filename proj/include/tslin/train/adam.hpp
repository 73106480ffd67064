#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/models/param_set.hpp"

namespace tslin {

struct AdamConfig {
    double lr = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment estimates mirroring a ParamSet, plus step counter.
struct AdamState {
    std::vector<std::vector<double>> m;
    std::vector<std::vector<double>> v;
    std::uint64_t t = 0;

    explicit AdamState(const ParamSet& params) {
        m.reserve(params.entries.size());
        v.reserve(params.entries.size());
        for (const auto& e : params.entries) {
            m.emplace_back(e.value.size(), 0.0);
            v.emplace_back(e.value.size(), 0.0);
        }
    }
};

/// Bias-corrected Adam update:
///   theta <- theta - lr * m_hat / (sqrt(v_hat) + eps).
/// Aborts with diagnostics on non-finite gradient entries. All validation
/// happens before the update loop, which runs without throwing.
inline void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state,
                      const AdamConfig& cfg) {
    if (grads.entries.size() != params.entries.size() ||
        state.m.size() != params.entries.size()) {
        throw ShapeError("adam_step: parameter/gradient/state layouts disagree");
    }
    for (std::size_t i = 0; i < params.entries.size(); ++i) {
        const auto& g = grads.entries[i].value.values();
        if (g.size() != params.entries[i].value.size()) {
            throw ShapeError("adam_step: gradient shape mismatch at " +
                             params.entries[i].name);
        }
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (!std::isfinite(g[j])) {
                throw TrainingError("adam_step: non-finite gradient in " +
                                    params.entries[i].name + " at index " +
                                    std::to_string(j));
            }
        }
    }

    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    const int n = static_cast<int>(params.entries.size());
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        auto& theta = params.entries[i].value.values();
        const auto& g = grads.entries[i].value.values();
        auto& m = state.m[i];
        auto& v = state.v[i];
        for (std::size_t j = 0; j < theta.size(); ++j) {
            const double gj = g[j];
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * gj;
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * gj * gj;
            const double m_hat = m[j] / bc1;
            const double v_hat = v[j] / bc2;
            theta[j] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

} // namespace tslin
