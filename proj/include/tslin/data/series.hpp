#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/matrix.hpp"

namespace tslin {

/// A loaded multivariate series: N strictly increasing timestamps, an
/// N x C value matrix and channel labels. Timestamps are kept both as raw
/// text (for round-trip serialization) and as a monotone ordering key.
struct RawSeries {
    std::vector<std::string> timestamps;
    std::vector<std::int64_t> time_keys;
    Matrix values; // N x C
    std::vector<std::string> channel_names;
    std::string granularity = "unknown";

    std::size_t length() const { return values.rows(); }
    std::size_t channels() const { return values.cols(); }
};

namespace detail {

/// Parses "YYYY-MM-DD[ HH:MM:SS]" or a plain integer into a monotone key.
/// The key preserves chronological order; it is not a true epoch time.
inline bool parse_time_key(const std::string& s, std::int64_t& key) {
    if (s.empty()) return false;
    // Plain integer index.
    {
        bool all_digits = true;
        std::size_t start = (s[0] == '-') ? 1 : 0;
        if (start == s.size()) all_digits = false;
        for (std::size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                all_digits = false;
                break;
            }
        }
        if (all_digits) {
            key = std::stoll(s);
            return true;
        }
    }
    // Date, optionally with time ("YYYY-MM-DD HH:MM:SS" or with 'T').
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
    const char* p = s.c_str();
    int consumed = 0;
    int fields = std::sscanf(p, "%d-%d-%d%n", &y, &mo, &d, &consumed);
    if (fields != 3) return false;
    const char* rest = p + consumed;
    if (*rest == ' ' || *rest == 'T') {
        if (std::sscanf(rest + 1, "%d:%d:%d", &h, &mi, &sec) != 3) return false;
    } else if (*rest != '\0') {
        return false;
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
        sec < 0 || sec > 60) {
        return false;
    }
    const std::int64_t days =
        static_cast<std::int64_t>(y) * 372 + (mo - 1) * 31 + (d - 1);
    key = days * 86400 + h * 3600 + mi * 60 + sec;
    return true;
}

inline std::string describe_granularity(const std::vector<std::int64_t>& keys) {
    if (keys.size() < 2) return "unknown";
    const std::int64_t d = keys[1] - keys[0];
    switch (d) {
        case 1: return "index";
        case 60: return "1 minute";
        case 600: return "10 minutes";
        case 900: return "15 minutes";
        case 3600: return "1 hour";
        case 86400: return "1 day";
        default: return "custom";
    }
}

} // namespace detail

} // namespace tslin
