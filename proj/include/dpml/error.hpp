#pragma once

#include <stdexcept>
#include <string>

namespace dpml {

/// Dimension mismatch between operands (names the offending sizes).
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Invalid argument value (bad label, bad index, bad state name, ...).
struct ValueError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Training objective became NaN or blew up.
struct DivergenceError : std::runtime_error {
    explicit DivergenceError(const std::string& what, std::size_t epoch)
        : std::runtime_error(what), epoch(epoch) {}
    std::size_t epoch;
};

/// Malformed data file; carries the 1-based line number when known.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(what), line(line) {}
    std::size_t line;
};

/// Invalid experiment configuration; message names the field path.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace dpml
