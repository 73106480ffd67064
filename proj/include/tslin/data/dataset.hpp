#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/matrix.hpp"
#include "tslin/core/tensor3.hpp"
#include "tslin/data/series.hpp"

namespace tslin {

enum class Split { Train, Val, Test };

inline const char* split_name(Split s) {
    switch (s) {
        case Split::Train: return "train";
        case Split::Val: return "val";
        case Split::Test: return "test";
    }
    return "?";
}

/// Chronological train/val/test fractions. ETT-family datasets use
/// 0.6/0.2/0.2, the larger benchmarks 0.7/0.1/0.2.
struct SplitSpec {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;

    static SplitSpec ett() { return {0.6, 0.2, 0.2}; }
    static SplitSpec standard() { return {0.7, 0.1, 0.2}; }

    void validate() const {
        if (train <= 0.0 || val <= 0.0 || test <= 0.0 ||
            std::abs(train + val + test - 1.0) > 1e-9) {
            throw ConfigError("split spec: fractions must be positive and sum to 1");
        }
    }
};

/// Picks the conventional split for a dataset by name.
inline SplitSpec default_split_for(const std::string& dataset_name) {
    if (dataset_name.rfind("ETT", 0) == 0 || dataset_name.rfind("ett", 0) == 0) {
        return SplitSpec::ett();
    }
    return SplitSpec::standard();
}

/// Index boundaries: train [0, train_end), val [train_end, val_end),
/// test [val_end, n). Boundaries round down.
struct SplitRanges {
    std::size_t n = 0;
    std::size_t train_end = 0;
    std::size_t val_end = 0;

    std::size_t begin(Split s) const {
        return s == Split::Train ? 0 : (s == Split::Val ? train_end : val_end);
    }
    std::size_t end(Split s) const {
        return s == Split::Train ? train_end : (s == Split::Val ? val_end : n);
    }
    std::size_t region_len(Split s) const { return end(s) - begin(s); }
};

inline SplitRanges split_series(std::size_t n, const SplitSpec& spec, std::size_t lookback,
                                std::size_t horizon) {
    spec.validate();
    SplitRanges r;
    r.n = n;
    r.train_end = static_cast<std::size_t>(std::floor(static_cast<double>(n) * spec.train));
    r.val_end =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * (spec.train + spec.val)));
    const std::size_t need = lookback + horizon;
    for (Split s : {Split::Train, Split::Val, Split::Test}) {
        if (r.region_len(s) < need) {
            throw ConfigError(std::string("split: ") + split_name(s) + " region has " +
                              std::to_string(r.region_len(s)) + " rows, needs >= L+T = " +
                              std::to_string(need));
        }
    }
    return r;
}

/// Number of (input, target) windows a contiguous region of `len` rows
/// yields: len - L - T + 1, or 0 when the region is too short.
inline std::size_t window_count(std::size_t len, std::size_t lookback, std::size_t horizon) {
    return len >= lookback + horizon ? len - lookback - horizon + 1 : 0;
}

/// Start rows of all windows whose L+T rows fit inside [begin, end).
/// Sample i: input rows [s, s+L), target rows [s+L, s+L+T).
inline std::vector<std::size_t> window_starts(std::size_t begin, std::size_t end,
                                              std::size_t lookback, std::size_t horizon) {
    std::vector<std::size_t> starts;
    const std::size_t len = end > begin ? end - begin : 0;
    const std::size_t count = window_count(len, lookback, horizon);
    starts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) starts.push_back(begin + i);
    return starts;
}

/// Per-channel z-score parameters fit on the train region only.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> stddev;

    std::size_t channels() const { return mean.size(); }

    Matrix apply(const Matrix& values) const {
        if (values.cols() != channels()) {
            throw ShapeError("standardizer: fit on " + std::to_string(channels()) +
                             " channels, applied to " + std::to_string(values.cols()));
        }
        Matrix out = values;
        for (std::size_t i = 0; i < out.rows(); ++i) {
            double* row = out.row(i);
            for (std::size_t c = 0; c < out.cols(); ++c) {
                row[c] = (row[c] - mean[c]) / stddev[c];
            }
        }
        return out;
    }
};

/// Computes per-channel mean and population std over rows [0, train_end).
/// A constant train-region channel is rejected by name.
inline Standardizer fit_standardizer(const Matrix& values,
                                     const std::vector<std::string>& channel_names,
                                     std::size_t train_end) {
    if (train_end == 0 || train_end > values.rows()) {
        throw ConfigError("standardize: train range [0, " + std::to_string(train_end) +
                          ") is invalid for " + std::to_string(values.rows()) + " rows");
    }
    Standardizer s;
    const double inv_n = 1.0 / static_cast<double>(train_end);
    for (std::size_t c = 0; c < values.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < train_end; ++i) sum += values(i, c);
        const double mean = sum * inv_n;
        double sq = 0.0;
        for (std::size_t i = 0; i < train_end; ++i) {
            const double d = values(i, c) - mean;
            sq += d * d;
        }
        const double std_dev = std::sqrt(sq * inv_n);
        if (std_dev == 0.0) {
            const std::string name =
                c < channel_names.size() ? channel_names[c] : std::to_string(c);
            throw DataError("standardize: channel '" + name +
                            "' is constant over the train range");
        }
        s.mean.push_back(mean);
        s.stddev.push_back(std_dev);
    }
    return s;
}

/// Standardized sliding-window samples with split provenance. Values hold
/// the whole series z-scored with train statistics; window start lists
/// carry the split assignment. Validation/test windows may reach back into
/// the preceding region for lookback context; their targets never do.
struct WindowedDataset {
    Matrix values; // standardized N x C
    std::size_t lookback = 0;
    std::size_t horizon = 0;
    SplitRanges ranges;
    Standardizer scaler;
    std::vector<std::size_t> train_starts, val_starts, test_starts;

    std::size_t channels() const { return values.cols(); }

    const std::vector<std::size_t>& starts(Split s) const {
        return s == Split::Train ? train_starts
                                 : (s == Split::Val ? val_starts : test_starts);
    }

    /// Assembles (input B x L x C, target B x T x C) for the given window
    /// start rows.
    std::pair<Tensor3, Tensor3> gather(const std::vector<std::size_t>& window_rows,
                                       std::size_t from, std::size_t count) const {
        Tensor3 x(count, lookback, channels());
        Tensor3 y(count, horizon, channels());
        for (std::size_t b = 0; b < count; ++b) {
            const std::size_t s = window_rows[from + b];
            for (std::size_t t = 0; t < lookback; ++t) {
                const double* row = values.row(s + t);
                for (std::size_t c = 0; c < channels(); ++c) x.at(b, t, c) = row[c];
            }
            for (std::size_t t = 0; t < horizon; ++t) {
                const double* row = values.row(s + lookback + t);
                for (std::size_t c = 0; c < channels(); ++c) y.at(b, t, c) = row[c];
            }
        }
        return {std::move(x), std::move(y)};
    }
};

inline WindowedDataset make_windowed_dataset(const RawSeries& series, const SplitSpec& spec,
                                             std::size_t lookback, std::size_t horizon) {
    WindowedDataset d;
    d.lookback = lookback;
    d.horizon = horizon;
    d.ranges = split_series(series.length(), spec, lookback, horizon);
    d.scaler = fit_standardizer(series.values, series.channel_names, d.ranges.train_end);
    d.values = d.scaler.apply(series.values);
    d.train_starts = window_starts(0, d.ranges.train_end, lookback, horizon);
    // Lookback context may cross the boundary; targets stay inside.
    d.val_starts =
        window_starts(d.ranges.train_end - lookback, d.ranges.val_end, lookback, horizon);
    d.test_starts =
        window_starts(d.ranges.val_end - lookback, d.ranges.n, lookback, horizon);
    return d;
}

} // namespace tslin
