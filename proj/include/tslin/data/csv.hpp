#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/data/series.hpp"

namespace tslin {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

} // namespace detail

/// Loads a header-bearing CSV: first column a timestamp ("date"), every
/// other column one numeric channel. Blank or unparseable cells and
/// non-increasing timestamps are load-time errors naming the offender.
inline RawSeries load_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("load_csv: cannot open " + path);

    std::string line;
    if (!std::getline(is, line)) throw DataError("load_csv: " + path + " is empty");
    std::vector<std::string> header = detail::split_csv_line(line);
    if (header.size() < 2) {
        throw DataError("load_csv: " + path + " needs a timestamp column and >= 1 channel");
    }

    RawSeries series;
    series.channel_names.assign(header.begin() + 1, header.end());
    for (auto& n : series.channel_names) n = detail::trim(n);
    const std::size_t channels = series.channel_names.size();

    std::vector<double> flat;
    std::size_t row = 1; // header was row 0
    while (std::getline(is, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            ++row;
            continue;
        }
        std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != channels + 1) {
            throw DataError("load_csv: row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(channels + 1));
        }
        const std::string stamp = detail::trim(cells[0]);
        std::int64_t key = 0;
        if (stamp.empty() || !detail::parse_time_key(stamp, key)) {
            throw DataError("load_csv: unparseable timestamp at row " + std::to_string(row) +
                            ", column 0: '" + stamp + "'");
        }
        if (!series.time_keys.empty() && key <= series.time_keys.back()) {
            throw DataError("load_csv: timestamps not strictly increasing at row " +
                            std::to_string(row));
        }
        for (std::size_t c = 0; c < channels; ++c) {
            const std::string cell = detail::trim(cells[c + 1]);
            if (cell.empty()) {
                throw DataError("load_csv: blank cell at row " + std::to_string(row) +
                                ", column " + std::to_string(c + 1));
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
                throw DataError("load_csv: unparseable value at row " + std::to_string(row) +
                                ", column " + std::to_string(c + 1) + ": '" + cell + "'");
            }
            flat.push_back(v);
        }
        series.timestamps.push_back(stamp);
        series.time_keys.push_back(key);
        ++row;
    }
    if (series.timestamps.empty()) {
        throw DataError("load_csv: " + path + " has no data rows");
    }
    series.values = Matrix(series.timestamps.size(), channels, std::move(flat));
    series.granularity = detail::describe_granularity(series.time_keys);
    return series;
}

/// Writes the series back out in the same layout. Values are printed with
/// 17 significant digits so a reload reproduces them bit-for-bit.
inline void save_csv(const RawSeries& series, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("save_csv: cannot open " + path + " for writing");
    os << "date";
    for (const auto& n : series.channel_names) os << ',' << n;
    os << '\n';
    char buf[40];
    for (std::size_t i = 0; i < series.length(); ++i) {
        os << series.timestamps[i];
        for (std::size_t c = 0; c < series.channels(); ++c) {
            std::snprintf(buf, sizeof(buf), "%.17g", series.values(i, c));
            os << ',' << buf;
        }
        os << '\n';
    }
    if (!os) throw IoError("save_csv: write failed for " + path);
}

} // namespace tslin
