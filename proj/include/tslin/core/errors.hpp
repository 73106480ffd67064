#pragma once

#include <stdexcept>
#include <string>

namespace tslin {

// Dimension disagreement between operands; the message names both shapes.
class ShapeError : public std::runtime_error {
public:
    explicit ShapeError(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid configuration value (bad kernel size, empty split, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or inconsistent input data (CSV cells, timestamps, constant channels).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite values or degenerate parameters encountered during numeric work.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Backward invoked with a cache that does not match the forward that
// produced it, or other lifecycle misuse.
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

// Divergence or aborted optimization inside the training loop.
class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem failures while reading or writing artifacts.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Timing preconditions not met (too few epochs to average).
class MeasurementError : public std::runtime_error {
public:
    explicit MeasurementError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tslin
