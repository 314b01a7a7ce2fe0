#pragma once

#include <cstdint>

#include "tsbench/dataset.hpp"
#include "tsbench/error_series.hpp"

namespace tsbench {

struct PcaOptions {
    double retained_variance = 0.70;
    /// Exact symmetric eigendecomposition up to this many features; randomized subspace iteration above.
    std::size_t exact_dimension_limit = 4096;
    std::uint64_t seed = 0;
};

struct PcaModel {
    Vector mean;
    /// k x d, orthonormal rows, ordered by decreasing explained variance.
    Matrix components;
    /// Achieved cumulative explained-variance ratio (>= the requested ratio).
    double retained_variance_ratio = 1.0;

    std::size_t rank() const { return static_cast<std::size_t>(components.rows()); }
    Vector reconstruct(const Vector& x) const;

    bool operator==(const PcaModel& other) const
    {
        return mean.size() == other.mean.size() && mean == other.mean && components.rows() == other.components.rows() &&
               components.cols() == other.components.cols() && components == other.components &&
               retained_variance_ratio == other.retained_variance_ratio;
    }
};

/// Principal directions of the training-period rows (sample covariance). The fewest leading
/// components whose cumulative eigenvalue share reaches `retained_variance` are kept;
/// eigenvalues below 1e-6 of the largest count as zero. Each component's largest-magnitude
/// entry is made positive. Zero-variance data yields k = 0.
PcaModel fit_pca(const SeriesFile& file, const SplitView& view, const PcaOptions& options = {});

/// s_t = ||x_t - reconstruct(x_t)||^2 / d.
ErrorSeries pca_error(const PcaModel& model, const SeriesFile& file, std::string detector_id = "pca");

} // namespace tsbench
