#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tslin/bench/report.hpp"
#include "tslin/core/errors.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/data/csv.hpp"
#include "tslin/data/dataset.hpp"
#include "tslin/data/synth.hpp"
#include "tslin/models/predictor.hpp"
#include "tslin/train/trainer.hpp"

namespace tslin {

/// Where a grid gets its series: a CSV file or a synthetic spec.
struct DataSource {
    std::string label;
    std::string csv_path;           // file-based when non-empty
    std::optional<SynthSpec> synth; // otherwise synthetic

    RawSeries load() const {
        if (synth.has_value()) return synth_generate(*synth);
        return load_csv(csv_path);
    }
};

/// "path/to/data.csv" or "kind:param=value,..." (see parse_synth_spec).
inline DataSource data_source_from_arg(const std::string& arg) {
    DataSource src;
    const std::size_t colon = arg.find(':');
    const std::string head = colon == std::string::npos ? arg : arg.substr(0, colon);
    const bool looks_synth =
        head == "sinusoid" || head == "sinusoid-trend" || head == "trend" ||
        head == "amp-mod" || head == "amplitude-modulated" || head == "level-shift" ||
        head == "levelshift";
    if (looks_synth) {
        src.synth = parse_synth_spec(arg);
        src.label = synth_kind_name(src.synth->kind);
    } else {
        src.csv_path = arg;
        src.label = std::filesystem::path(arg).stem().string();
    }
    return src;
}

struct ExperimentGrid {
    DataSource data;
    std::optional<SplitSpec> split; // default derived from the dataset label
    std::vector<Variant> models;
    std::vector<std::size_t> lookbacks;
    std::vector<std::size_t> horizons;
    TrainConfig train;
    std::size_t repetitions = 1;

    // Model knobs applied to every cell.
    std::optional<bool> individual;
    std::size_t ma_kernel = 25;
    GeluForm activation = GeluForm::Tanh;
    std::size_t hidden = 0;
    bool measure_inference = true;

    SplitSpec effective_split() const {
        return split.has_value() ? *split : default_split_for(data.label);
    }

    void validate() const {
        if (models.empty() || lookbacks.empty() || horizons.empty()) {
            throw ConfigError("grid: model, lookback and horizon lists must be nonempty");
        }
        if (repetitions < 1) throw ConfigError("grid: repetitions must be >= 1");
    }
};

/// Per-cell seed: base seed folded with the model name, L, T and the
/// repetition index through splitmix64 (see mix_seed). Keeps every cell's
/// randomness independent of the rest of the grid.
inline std::uint64_t cell_seed(std::uint64_t base, Variant model, std::size_t lookback,
                               std::size_t horizon, std::size_t rep) {
    std::uint64_t s = mix_seed(base, variant_name(model));
    s = mix_seed(s, static_cast<std::uint64_t>(lookback));
    s = mix_seed(s, static_cast<std::uint64_t>(horizon));
    s = mix_seed(s, static_cast<std::uint64_t>(rep));
    return s;
}

inline PredictorConfig cell_config(const ExperimentGrid& grid, Variant model,
                                   std::size_t lookback, std::size_t horizon,
                                   std::size_t channels) {
    PredictorConfig cfg;
    cfg.variant = model;
    cfg.lookback = lookback;
    cfg.horizon = horizon;
    cfg.channels = channels;
    cfg.individual = grid.individual;
    cfg.ma_kernel = grid.ma_kernel;
    cfg.activation = grid.activation;
    cfg.hidden = grid.hidden;
    return cfg;
}

/// Mean training seconds per epoch with the first (warmup) epoch excluded
/// when more than one epoch ran.
inline double mean_epoch_seconds(const TrainHistory& history) {
    if (history.epochs.empty()) return 0.0;
    if (history.epochs.size() == 1) return history.epochs[0].seconds;
    double sum = 0.0;
    for (std::size_t i = 1; i < history.epochs.size(); ++i) {
        sum += history.epochs[i].seconds;
    }
    return sum / static_cast<double>(history.epochs.size() - 1);
}

/// Total forward wall time over the test split divided by sample count.
inline double inference_ms_per_sample(const Predictor& model, const WindowedDataset& data,
                                      std::size_t batch_size) {
    const auto& starts = data.starts(Split::Test);
    if (starts.empty()) throw ConfigError("inference timing: test split is empty");
    const auto tic = std::chrono::steady_clock::now();
    for (std::size_t from = 0; from < starts.size(); from += batch_size) {
        const std::size_t count = std::min(batch_size, starts.size() - from);
        auto [x, y] = data.gather(starts, from, count);
        volatile double sink = model.forward(x).at(0, 0, 0);
        (void)sink;
    }
    const auto toc = std::chrono::steady_clock::now();
    const double total_s = std::chrono::duration<double>(toc - tic).count();
    return total_s * 1000.0 / static_cast<double>(starts.size());
}

struct RuntimeMeasurement {
    double per_epoch_seconds = 0.0;
    double per_sample_inference_ms = 0.0;
    std::size_t epochs_run = 0;
};

/// Trains for exactly cfg.max_epochs epochs (early stopping disabled) and
/// reports post-warmup per-epoch training time plus test-set inference
/// latency. Needs at least two epochs to average.
inline RuntimeMeasurement measure_runtime(const PredictorConfig& model_cfg,
                                          const WindowedDataset& data, TrainConfig cfg,
                                          std::uint64_t init_seed) {
    if (cfg.max_epochs < 2) {
        throw MeasurementError("measure_runtime: need >= 2 epochs, got " +
                               std::to_string(cfg.max_epochs));
    }
    cfg.patience = cfg.max_epochs; // run every epoch; timing wants full epochs
    Predictor model(model_cfg, init_seed);
    const TrainHistory history = train(model, data, cfg);
    RuntimeMeasurement m;
    m.per_epoch_seconds = mean_epoch_seconds(history);
    m.per_sample_inference_ms = inference_ms_per_sample(model, data, cfg.batch_size);
    m.epochs_run = history.epochs.size();
    return m;
}

/// Runs every (model, L, T, repetition) cell. Infeasible cells are marked
/// skipped, failing cells are marked error; the grid always continues.
inline std::vector<ReportRow> run_grid(const ExperimentGrid& grid) {
    grid.validate();
    const RawSeries series = grid.data.load();
    const SplitSpec split = grid.effective_split();

    std::vector<ReportRow> rows;
    for (std::size_t lookback : grid.lookbacks) {
        for (std::size_t horizon : grid.horizons) {
            WindowedDataset data;
            std::string window_err;
            try {
                data = make_windowed_dataset(series, split, lookback, horizon);
            } catch (const std::exception& e) {
                window_err = e.what();
            }
            for (Variant model : grid.models) {
                for (std::size_t rep = 0; rep < grid.repetitions; ++rep) {
                    const std::uint64_t seed =
                        cell_seed(grid.train.seed, model, lookback, horizon, rep);
                    ReportRow row;
                    row.dataset = grid.data.label;
                    row.model = variant_name(model);
                    row.lookback = lookback;
                    row.horizon = horizon;
                    row.seed = seed;
                    if (!window_err.empty()) {
                        row.status = "skipped";
                        row.message = window_err;
                        rows.push_back(std::move(row));
                        continue;
                    }
                    try {
                        const PredictorConfig cfg =
                            cell_config(grid, model, lookback, horizon, series.channels());
                        Predictor predictor(cfg, mix_seed(seed, "init"));
                        TrainConfig tc = grid.train;
                        tc.seed = mix_seed(seed, "shuffle");
                        const TrainHistory history = train(predictor, data, tc);
                        const EvalResult test = evaluate(predictor, data, Split::Test);
                        row.mse = test.mse;
                        row.mae = test.mae;
                        row.epoch_seconds = mean_epoch_seconds(history);
                        row.epochs_run = history.epochs.size();
                        if (grid.measure_inference) {
                            row.infer_ms =
                                inference_ms_per_sample(predictor, data, tc.batch_size);
                        }
                    } catch (const std::exception& e) {
                        row.status = "error";
                        row.message = e.what();
                    }
                    rows.push_back(std::move(row));
                }
            }
        }
    }
    return rows;
}

} // namespace tslin
