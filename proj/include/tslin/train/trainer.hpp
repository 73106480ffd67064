#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/data/dataset.hpp"
#include "tslin/models/predictor.hpp"
#include "tslin/train/adam.hpp"
#include "tslin/train/metrics.hpp"

namespace tslin {

struct TrainConfig {
    double lr = 0.001;
    std::size_t batch_size = 16;
    std::size_t max_epochs = 20;
    std::size_t patience = 5; // consecutive non-improving epochs before stopping
    std::uint64_t seed = 1;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;

    void validate() const {
        if (!(lr > 0.0)) throw ConfigError("train config: learning rate must be positive");
        if (batch_size < 1) throw ConfigError("train config: batch size must be >= 1");
        if (max_epochs < 1) throw ConfigError("train config: max_epochs must be >= 1");
        if (patience > max_epochs) {
            throw ConfigError("train config: patience must be <= max_epochs");
        }
    }

    AdamConfig adam() const { return {lr, adam_beta1, adam_beta2, adam_eps}; }
};

struct EpochRecord {
    std::size_t epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_mse = 0.0;
    double val_mae = 0.0;
    double seconds = 0.0; // training phase only, validation excluded
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    std::size_t best_epoch = 0; // 1-based epoch with the lowest val MSE
    double best_val_mse = 0.0;

    /// Line-delimited log: epoch,train_loss,val_mse,val_mae,seconds.
    void write_log(std::ostream& os) const {
        os << "epoch,train_loss,val_mse,val_mae,seconds\n";
        char buf[160];
        for (const auto& e : epochs) {
            std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.6f\n", e.epoch,
                          e.train_loss, e.val_mse, e.val_mae, e.seconds);
            os << buf;
        }
    }
};

struct EvalResult {
    double mse = 0.0;
    double mae = 0.0;
};

/// Metrics over every window of a split, in standardized units. The
/// accumulation runs in sample order, so the result does not depend on the
/// evaluation batch size.
inline EvalResult evaluate(const Predictor& model, const WindowedDataset& data, Split split,
                           std::size_t eval_batch = 128) {
    const auto& starts = data.starts(split);
    if (starts.empty()) {
        throw ConfigError(std::string("evaluate: ") + split_name(split) + " split is empty");
    }
    double sq_sum = 0.0, abs_sum = 0.0;
    std::size_t n_elems = 0;
    for (std::size_t from = 0; from < starts.size(); from += eval_batch) {
        const std::size_t count = std::min(eval_batch, starts.size() - from);
        auto [x, y] = data.gather(starts, from, count);
        const Tensor3 pred = model.forward(x);
        const auto& p = pred.values();
        const auto& t = y.values();
        for (std::size_t i = 0; i < p.size(); ++i) {
            const double d = p[i] - t[i];
            sq_sum += d * d;
            abs_sum += std::abs(d);
        }
        n_elems += p.size();
    }
    return {sq_sum / static_cast<double>(n_elems), abs_sum / static_cast<double>(n_elems)};
}

/// Seeded training loop: shuffled mini-batches (final incomplete batch
/// kept), Adam updates, per-epoch validation, early stopping on val MSE.
/// The model is left holding the snapshot with the lowest validation MSE.
inline TrainHistory train(Predictor& model, const WindowedDataset& data,
                          const TrainConfig& cfg) {
    cfg.validate();
    if (data.starts(Split::Train).empty()) {
        throw ConfigError("train: train split has no windows");
    }
    if (data.starts(Split::Val).empty()) {
        throw ConfigError("train: validation split has no windows");
    }
    if (data.channels() != model.config().channels ||
        data.lookback != model.config().lookback || data.horizon != model.config().horizon) {
        throw ShapeError("train: dataset windows (L=" + std::to_string(data.lookback) +
                         ",T=" + std::to_string(data.horizon) +
                         ",C=" + std::to_string(data.channels()) +
                         ") do not match the model config");
    }

    Rng rng(cfg.seed);
    std::vector<std::size_t> order = data.starts(Split::Train);
    AdamState adam(model.params());
    const AdamConfig adam_cfg = cfg.adam();

    TrainHistory history;
    ParamSet best_params = model.params();
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t bad_streak = 0;

    for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto tic = std::chrono::steady_clock::now();
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t sample_count = 0;
        ForwardCache cache;
        for (std::size_t from = 0; from < order.size(); from += cfg.batch_size) {
            const std::size_t count = std::min(cfg.batch_size, order.size() - from);
            auto [x, y] = data.gather(order, from, count);
            const Tensor3 pred = model.forward(x, cache);
            const double loss = mse(pred, y);
            if (!std::isfinite(loss)) {
                throw TrainingError("train: loss diverged (non-finite) at epoch " +
                                    std::to_string(epoch));
            }
            loss_sum += loss * static_cast<double>(count);
            sample_count += count;
            const Gradients grads = model.backward(cache, mse_grad(pred, y));
            adam_step(model.params(), grads.params, adam, adam_cfg);
        }
        const auto toc = std::chrono::steady_clock::now();
        const double seconds = std::chrono::duration<double>(toc - tic).count();

        const EvalResult val = evaluate(model, data, Split::Val);
        history.epochs.push_back({epoch, loss_sum / static_cast<double>(sample_count),
                                  val.mse, val.mae, seconds});

        if (val.mse < best_val) {
            best_val = val.mse;
            best_params = model.params();
            history.best_epoch = epoch;
            bad_streak = 0;
        } else {
            ++bad_streak;
            if (bad_streak >= cfg.patience) break;
        }
    }

    history.best_val_mse = best_val;
    model.params() = best_params;
    return history;
}

} // namespace tslin
