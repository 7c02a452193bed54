#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace refswarm {

// Base class for all recoverable refswarm errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (corpus lines, bid lines, author names).
// line == 0 means "no line context" (e.g. a direct API call).
struct ParseError : Error {
    std::size_t line = 0;

    explicit ParseError(const std::string& what, std::size_t line_no = 0)
        : Error(line_no ? "line " + std::to_string(line_no) + ": " + what : what),
          line(line_no) {}
};

// Graph file has a bad magic / unsupported version.
struct FormatError : Error {
    using Error::Error;
};

// Graph file is structurally damaged (truncated, inconsistent counts).
struct CorruptionError : Error {
    using Error::Error;
};

// No referenced author of the manuscript exists in the graph; the swarm
// has nowhere to start.
struct NoSeedsError : Error {
    using Error::Error;
};

// The energy vector has no strictly positive entry; no referees found.
struct NoEnergyError : Error {
    using Error::Error;
};

// Cross-file references do not line up (e.g. bids naming unknown manuscripts).
struct ConsistencyError : Error {
    using Error::Error;
};

}  // namespace refswarm
