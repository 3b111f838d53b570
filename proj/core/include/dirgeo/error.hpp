#pragma once

#include <stdexcept>
#include <string>

namespace dirgeo {

// Fewer usable input points than an estimator needs.
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Singular-value spectrum has no tangent/normal gap at the probed radius.
struct NoGapError : std::runtime_error {
    explicit NoGapError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dirgeo
