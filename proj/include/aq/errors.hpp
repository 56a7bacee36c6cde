#pragma once

#include <stdexcept>
#include <string>

namespace aq {

// Invalid argument values (bit-widths, empty shapes, bad config).
struct ParamError : std::invalid_argument {
    explicit ParamError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Dimension / channel-count mismatches between tensors, params and weights.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Undefined metric inputs (zero reference norm, zero variance).
struct MetricError : std::domain_error {
    explicit MetricError(const std::string& msg) : std::domain_error(msg) {}
};

// File format / filesystem failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// A runtime consistency assertion did not hold (e.g. the two accumulation
// paths drifted apart).
struct CheckError : std::runtime_error {
    explicit CheckError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace aq
