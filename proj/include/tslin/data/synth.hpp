#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "tslin/core/errors.hpp"
#include "tslin/core/rng.hpp"
#include "tslin/data/series.hpp"

namespace tslin {

/// Deterministic synthetic generators, desk-scale stand-ins for the
/// benchmark datasets. Closed forms (phi_c = phase_step * c,
/// eps ~ N(0,1) drawn in (t, c) order when noise > 0):
///   sinusoid:   x[t,c] = A sin(2 pi t / P + phi_c) + noise * eps
///   sinusoid-trend:     sinusoid + slope * t
///   amp-mod:    A (1 + depth sin(2 pi t / Pm)) sin(2 pi t / P + phi_c) + noise * eps
///   level-shift: sinusoid + shift * [t >= floor(shift_frac * n)]
enum class SynthKind { Sinusoid, SinusoidTrend, AmplitudeModulated, LevelShift };

struct SynthSpec {
    SynthKind kind = SynthKind::Sinusoid;
    std::size_t n = 2000;
    std::size_t channels = 1;
    double period = 24.0;
    double amplitude = 1.0;
    double noise = 0.0;
    double phase_step = 0.5;
    double trend_slope = 0.002;
    double mod_period = 240.0;
    double mod_depth = 0.5;
    double shift_frac = 0.75;
    double shift = 3.0;
    std::uint64_t seed = 1;

    void validate() const {
        if (n < 1 || channels < 1) {
            throw ConfigError("synth spec: n and c must be >= 1");
        }
        if (!(period > 0.0)) throw ConfigError("synth spec: period must be positive");
    }
};

inline const char* synth_kind_name(SynthKind k) {
    switch (k) {
        case SynthKind::Sinusoid: return "sinusoid";
        case SynthKind::SinusoidTrend: return "sinusoid-trend";
        case SynthKind::AmplitudeModulated: return "amp-mod";
        case SynthKind::LevelShift: return "level-shift";
    }
    return "?";
}

inline SynthKind synth_kind_from_name(const std::string& name) {
    if (name == "sinusoid") return SynthKind::Sinusoid;
    if (name == "sinusoid-trend" || name == "trend") return SynthKind::SinusoidTrend;
    if (name == "amp-mod" || name == "amplitude-modulated") return SynthKind::AmplitudeModulated;
    if (name == "level-shift" || name == "levelshift") return SynthKind::LevelShift;
    throw ConfigError("unknown synthetic generator kind: " + name);
}

inline RawSeries synth_generate(const SynthSpec& spec) {
    spec.validate();
    const double two_pi = 2.0 * 3.14159265358979323846;
    Rng rng(spec.seed);
    RawSeries s;
    s.values = Matrix(spec.n, spec.channels);
    s.channel_names.reserve(spec.channels);
    for (std::size_t c = 0; c < spec.channels; ++c) {
        s.channel_names.push_back("ch" + std::to_string(c));
    }
    const std::size_t shift_at =
        static_cast<std::size_t>(std::floor(spec.shift_frac * static_cast<double>(spec.n)));
    for (std::size_t t = 0; t < spec.n; ++t) {
        s.timestamps.push_back(std::to_string(t));
        s.time_keys.push_back(static_cast<std::int64_t>(t));
        const double ft = static_cast<double>(t);
        for (std::size_t c = 0; c < spec.channels; ++c) {
            const double phase = spec.phase_step * static_cast<double>(c);
            double v = spec.amplitude * std::sin(two_pi * ft / spec.period + phase);
            switch (spec.kind) {
                case SynthKind::Sinusoid: break;
                case SynthKind::SinusoidTrend: v += spec.trend_slope * ft; break;
                case SynthKind::AmplitudeModulated:
                    v = spec.amplitude *
                        (1.0 + spec.mod_depth * std::sin(two_pi * ft / spec.mod_period)) *
                        std::sin(two_pi * ft / spec.period + phase);
                    break;
                case SynthKind::LevelShift:
                    if (t >= shift_at) v += spec.shift;
                    break;
            }
            if (spec.noise > 0.0) v += spec.noise * rng.normal();
            s.values(t, c) = v;
        }
    }
    s.granularity = "index";
    return s;
}

/// Parses "kind:param=value,..." strings, e.g.
/// "sinusoid:n=2000,c=3,period=24,noise=0.1,seed=7".
inline SynthSpec parse_synth_spec(const std::string& text) {
    SynthSpec spec;
    const std::size_t colon = text.find(':');
    const std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
    spec.kind = synth_kind_from_name(kind);
    if (colon == std::string::npos) return spec;
    std::string rest = text.substr(colon + 1);
    std::size_t pos = 0;
    while (pos < rest.size()) {
        std::size_t comma = rest.find(',', pos);
        if (comma == std::string::npos) comma = rest.size();
        const std::string pair = rest.substr(pos, comma - pos);
        pos = comma + 1;
        if (pair.empty()) continue;
        const std::size_t eq = pair.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("synth spec: expected key=value, got '" + pair + "'");
        }
        const std::string key = pair.substr(0, eq);
        const std::string value = pair.substr(eq + 1);
        try {
            if (key == "n") spec.n = std::stoull(value);
            else if (key == "c") spec.channels = std::stoull(value);
            else if (key == "period") spec.period = std::stod(value);
            else if (key == "amp") spec.amplitude = std::stod(value);
            else if (key == "noise") spec.noise = std::stod(value);
            else if (key == "phase-step") spec.phase_step = std::stod(value);
            else if (key == "slope") spec.trend_slope = std::stod(value);
            else if (key == "mod-period") spec.mod_period = std::stod(value);
            else if (key == "mod-depth") spec.mod_depth = std::stod(value);
            else if (key == "shift-frac") spec.shift_frac = std::stod(value);
            else if (key == "shift") spec.shift = std::stod(value);
            else if (key == "seed") spec.seed = std::stoull(value);
            else throw ConfigError("synth spec: unknown parameter '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ConfigError("synth spec: bad value for '" + key + "': '" + value + "'");
        }
    }
    return spec;
}

} // namespace tslin
