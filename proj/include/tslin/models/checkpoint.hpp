#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "tslin/core/errors.hpp"
#include "tslin/models/param_set.hpp"

namespace tslin {

/// Checkpoint layout (binary, little-endian):
///   magic "TSLINCP1"
///   u32 entry count
///   per entry: u32 name length, name bytes,
///              u32 rows, u32 cols, rows*cols f64 values (row-major)
/// Entry names follow the ParamSet layout, e.g. "glinear.c3.w1",
/// "dlinear.w_trend", "revin.gamma".

namespace detail {

inline constexpr char kCheckpointMagic[8] = {'T', 'S', 'L', 'I', 'N', 'C', 'P', '1'};

inline void write_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                          static_cast<unsigned char>((v >> 8) & 0xff),
                          static_cast<unsigned char>((v >> 16) & 0xff),
                          static_cast<unsigned char>((v >> 24) & 0xff)};
    os.write(reinterpret_cast<const char*>(b), 4);
}

inline std::uint32_t read_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline void write_f64(std::ostream& os, double x) {
    std::uint64_t bits;
    std::memcpy(&bits, &x, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
    os.write(reinterpret_cast<const char*>(b), 8);
}

inline double read_f64(std::istream& is) {
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    double x;
    std::memcpy(&x, &bits, 8);
    return x;
}

} // namespace detail

inline void save_checkpoint(const ParamSet& params, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("save_checkpoint: cannot open " + path + " for writing");
    os.write(detail::kCheckpointMagic, 8);
    detail::write_u32(os, static_cast<std::uint32_t>(params.entries.size()));
    for (const auto& e : params.entries) {
        detail::write_u32(os, static_cast<std::uint32_t>(e.name.size()));
        os.write(e.name.data(), static_cast<std::streamsize>(e.name.size()));
        detail::write_u32(os, static_cast<std::uint32_t>(e.value.rows()));
        detail::write_u32(os, static_cast<std::uint32_t>(e.value.cols()));
        for (double x : e.value.values()) detail::write_f64(os, x);
    }
    if (!os) throw IoError("save_checkpoint: write failed for " + path);
}

inline ParamSet load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("load_checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, detail::kCheckpointMagic, 8) != 0) {
        throw IoError("load_checkpoint: " + path + " is not a tslin checkpoint");
    }
    const std::uint32_t count = detail::read_u32(is);
    ParamSet p;
    p.entries.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint32_t name_len = detail::read_u32(is);
        std::string name(name_len, '\0');
        is.read(name.data(), name_len);
        const std::uint32_t rows = detail::read_u32(is);
        const std::uint32_t cols = detail::read_u32(is);
        Matrix m(rows, cols);
        for (double& x : m.values()) x = detail::read_f64(is);
        if (!is) throw IoError("load_checkpoint: truncated file " + path);
        p.entries.push_back({std::move(name), std::move(m)});
    }
    return p;
}

} // namespace tslin
