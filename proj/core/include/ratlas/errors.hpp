#pragma once

#include <stdexcept>
#include <string>

namespace ratlas {

/// Bad user input: malformed graphs, inconsistent shapes, violated preconditions.
struct ValidationError : std::invalid_argument {
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A configured size cap was exceeded (plane count, neuron count, K-set size).
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// The feasibility solver gave up; the message carries the partial basis.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ratlas
