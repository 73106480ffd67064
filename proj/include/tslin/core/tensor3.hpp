#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/matrix.hpp"

namespace tslin {

/// Batch-major numeric array (batch x steps x channels), contiguous with
/// channel fastest. Carries lookback windows (steps = L) on the input side
/// and forecasts (steps = T) on the output side.
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(std::size_t batch, std::size_t steps, std::size_t channels, double fill = 0.0)
        : b_(batch), s_(steps), c_(channels), v_(batch * steps * channels, fill) {}

    std::size_t batch() const { return b_; }
    std::size_t steps() const { return s_; }
    std::size_t channels() const { return c_; }
    std::size_t size() const { return v_.size(); }

    double& at(std::size_t b, std::size_t t, std::size_t c) {
        return v_[(b * s_ + t) * c_ + c];
    }
    double at(std::size_t b, std::size_t t, std::size_t c) const {
        return v_[(b * s_ + t) * c_ + c];
    }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    std::vector<double>& values() { return v_; }
    const std::vector<double>& values() const { return v_; }

    std::string shape_str() const {
        return std::to_string(b_) + "x" + std::to_string(s_) + "x" + std::to_string(c_);
    }

    bool same_shape(const Tensor3& o) const {
        return b_ == o.b_ && s_ == o.s_ && c_ == o.c_;
    }

    bool all_finite() const {
        for (double x : v_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    /// Copy channel c out as a (batch x steps) matrix.
    Matrix channel(std::size_t c) const {
        Matrix m(b_, s_);
        for (std::size_t b = 0; b < b_; ++b) {
            const double* src = v_.data() + (b * s_) * c_ + c;
            double* dst = m.row(b);
            for (std::size_t t = 0; t < s_; ++t) dst[t] = src[t * c_];
        }
        return m;
    }

    /// Scatter a (batch x steps) matrix into channel c.
    void set_channel(std::size_t c, const Matrix& m) {
        if (m.rows() != b_ || m.cols() != s_) {
            throw ShapeError("set_channel: " + m.shape_str() + " into tensor " + shape_str());
        }
        for (std::size_t b = 0; b < b_; ++b) {
            double* dst = v_.data() + (b * s_) * c_ + c;
            const double* src = m.row(b);
            for (std::size_t t = 0; t < s_; ++t) dst[t * c_] = src[t];
        }
    }

    bool operator==(const Tensor3& o) const {
        return same_shape(o) && v_ == o.v_;
    }

private:
    std::size_t b_ = 0;
    std::size_t s_ = 0;
    std::size_t c_ = 0;
    std::vector<double> v_;
};

inline void require_same_shape(const Tensor3& a, const Tensor3& b, const char* what) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(what) + ": shapes disagree, " + a.shape_str() +
                         " vs " + b.shape_str());
    }
}

} // namespace tslin
