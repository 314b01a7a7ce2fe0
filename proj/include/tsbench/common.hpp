#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tsbench {

/// Seconds since the Unix epoch for ISO-8601 input, or the raw integer for epoch input.
using Instant = std::int64_t;

/// Row-major so that one row is one timestamp's feature vector.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Shared floor for standard deviations (normalization and rolling likelihood).
inline constexpr double kStdFloor = 1e-8;

/// Malformed or inconsistent input data (files, label documents, error imports).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration or parameter block.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Half-open index interval [begin, end).
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end > begin ? end - begin : 0; }
    bool empty() const { return end <= begin; }
    bool contains(std::size_t i) const { return i >= begin && i < end; }

    bool operator==(const IndexRange&) const = default;
};

} // namespace tsbench
