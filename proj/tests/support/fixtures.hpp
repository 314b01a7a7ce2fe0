#pragma once

#include <filesystem>
#include <string>

#include "tsbench/calibration.hpp"
#include "tsbench/dataset.hpp"
#include "tsbench/isolation_forest.hpp"
#include "tsbench/rng.hpp"

namespace tsbench::fixture {

std::filesystem::path source_dir();
std::filesystem::path fresh_temp_dir(const std::string& name);

/// n rows of iid N(0,1) in d dims; timestamps start, start+step, ...
SeriesFile gaussian_series(Rng& rng, std::size_t n, std::size_t d, std::string id = "f", Instant start = 0,
                           Instant step = 60);

/// 1..max_windows disjoint windows of random row lengths placed over the given timestamps.
AnomalyWindowSet random_windows(Rng& rng, const std::vector<Instant>& ts, std::size_t max_windows,
                                std::size_t max_len);

/// Multivariate telemetry with short level-shift incidents in the validation and test slices.
/// The test slice keeps the training distribution.
SeriesFile stationary_incident_series(std::uint64_t seed);
/// Same incident pattern, but every feature drifts steadily away from its training level over the
/// test slice.
SeriesFile drifting_incident_series(std::uint64_t seed);

struct FileOutcome {
    CalibrationResult calibration;
    NabReport test;
    double shift_ratio = 0.0;
};

/// normalize on the training period -> isolation forest errors -> calibrate on validation ->
/// one test evaluation, plus the centroid drift summary of the raw features.
FileOutcome evaluate_with_isolation_forest(const SeriesFile& file, const SearchSpace& space,
                                           const IsolationForestConfig& forest);

} // namespace tsbench::fixture
