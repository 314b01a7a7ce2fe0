#include "fixtures.hpp"

#include <algorithm>
#include <unistd.h>

#include "tsbench/analysis.hpp"

namespace tsbench::fixture {

namespace fs = std::filesystem;

fs::path source_dir()
{
    return TSBENCH_SOURCE_DIR;
}

fs::path fresh_temp_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("tsbench_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SeriesFile gaussian_series(Rng& rng, std::size_t n, std::size_t d, std::string id, Instant start, Instant step)
{
    std::vector<Instant> ts(n);
    Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = start + static_cast<Instant>(i) * step;
        for (std::size_t j = 0; j < d; ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal();
    }
    return SeriesFile(std::move(id), std::move(ts), std::move(x));
}

AnomalyWindowSet random_windows(Rng& rng, const std::vector<Instant>& ts, std::size_t max_windows, std::size_t max_len)
{
    const std::size_t count = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_windows)));
    const std::size_t slot = ts.size() / count;
    std::vector<AnomalyWindow> windows;
    for (std::size_t w = 0; w < count; ++w) {
        // One window per slot, leaving at least one row free between slots.
        const std::size_t len = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min(max_len, slot - 1))));
        const std::size_t begin = w * slot + static_cast<std::size_t>(rng.below(slot - len));
        windows.push_back({ts[begin], ts[begin + len - 1]});
    }
    return AnomalyWindowSet(std::move(windows));
}

namespace {

constexpr std::size_t kRows = 3000;
constexpr std::size_t kDims = 6;

struct Incident {
    std::size_t begin;
    std::size_t length;
};

SeriesFile incident_series(std::uint64_t seed, bool drift)
{
    Rng rng(seed);
    SeriesFile base = gaussian_series(rng, kRows, kDims, drift ? "drifting" : "stationary", 1'600'000'000, 60);
    Matrix x = base.values();
    const SplitView view = chronological_split(kRows);

    // Per-feature scale and offset, so raw features are not already standardized.
    for (std::size_t j = 0; j < kDims; ++j) {
        const double scale = 1.0 + static_cast<double>(j);
        const double offset = 10.0 * static_cast<double>(j);
        x.col(static_cast<Eigen::Index>(j)) = x.col(static_cast<Eigen::Index>(j)) * scale +
                                              Vector::Constant(static_cast<Eigen::Index>(kRows), offset);
    }

    std::vector<Incident> incidents;
    const auto place = [&](IndexRange slice, std::size_t count) {
        const std::size_t slot = slice.size() / count;
        for (std::size_t k = 0; k < count; ++k)
            incidents.push_back({slice.begin + k * slot + slot / 3 + static_cast<std::size_t>(rng.below(slot / 4)), 25});
    };
    place(view.validation, 2);
    place(view.test, 3);

    std::vector<AnomalyWindow> windows;
    const auto& ts = base.timestamps();
    for (const auto& inc : incidents) {
        for (std::size_t i = inc.begin; i < inc.begin + inc.length; ++i)
            for (std::size_t j = 0; j < kDims; ++j)
                x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += 5.0 * (1.0 + static_cast<double>(j));
        windows.push_back({ts[inc.begin - 5], ts[inc.begin + inc.length + 5]});
    }

    if (drift) {
        // The test slice alternates between the training level and a level shifted by 8 feature
        // scales, in segments of 30..70 rows, so the test distribution moves away globally.
        bool shifted = true;
        for (std::size_t i = view.test.begin; i < view.test.end;) {
            const std::size_t len = static_cast<std::size_t>(rng.between(30, 70));
            for (std::size_t k = i; k < std::min(i + len, view.test.end); ++k)
                for (std::size_t j = 0; j < kDims; ++j)
                    x(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) +=
                        shifted ? 8.0 * (1.0 + static_cast<double>(j)) : 0.0;
            shifted = !shifted;
            i += len;
        }
    }
    return SeriesFile(base.id(), base.timestamps(), std::move(x), AnomalyWindowSet(std::move(windows)));
}

} // namespace

SeriesFile stationary_incident_series(std::uint64_t seed)
{
    return incident_series(seed, false);
}

SeriesFile drifting_incident_series(std::uint64_t seed)
{
    return incident_series(seed, true);
}

FileOutcome evaluate_with_isolation_forest(const SeriesFile& file, const SearchSpace& space,
                                           const IsolationForestConfig& forest)
{
    const SplitView view = chronological_split(file);
    const SeriesFile normalized = apply_normalizer(file, fit_normalizer(file, view));
    const ErrorSeries errors = score_isolation_forest(fit_isolation_forest(normalized, view, forest), normalized);
    FileOutcome out;
    out.calibration = calibrate(errors, file, view, space);
    out.test = evaluate_test(errors, file, view, out.calibration.best);
    out.shift_ratio = drift_summary(centroid_diagnostics(file, view)).shift_ratio;
    return out;
}

} // namespace tsbench::fixture
