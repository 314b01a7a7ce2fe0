#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsbench/dataset.hpp"

namespace tsbench {

/// Raw anomaly signal s_t aligned with a series' timestamps. Larger means more anomalous.
/// The first `warmup` positions are undefined (stored as NaN); every other entry is finite and >= 0.
class ErrorSeries {
public:
    ErrorSeries() = default;
    ErrorSeries(std::string file_id, std::string detector_id, std::vector<double> values, std::size_t warmup = 0);

    const std::string& file_id() const { return file_id_; }
    const std::string& detector_id() const { return detector_id_; }
    const std::vector<double>& values() const& { return values_; }
    std::vector<double> values() && { return std::move(values_); }
    std::size_t size() const { return values_.size(); }
    std::size_t warmup() const { return warmup_; }
    bool defined(std::size_t i) const { return i >= warmup_ && i < values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    bool operator==(const ErrorSeries& other) const;

private:
    std::string file_id_;
    std::string detector_id_;
    std::vector<double> values_;
    std::size_t warmup_ = 0;
};

/// s_t = mean over features of (x_t - mean of the previous `window` rows)^2.
/// The first `window` positions are warm-up. Throws if window is 0 or >= series length.
ErrorSeries rolling_predictor_error(const SeriesFile& file, std::size_t window, std::string detector_id = "rolling");

/// Reads a `timestamp,error` CSV. Imported timestamps must be a contiguous suffix of the
/// file's timestamps; the missing prefix becomes warm-up. Rows with an empty error cell
/// count as missing.
ErrorSeries import_error_series(const std::filesystem::path& path, const SeriesFile& file, TimestampFormat format,
                                std::string detector_id = "import");
ErrorSeries import_error_series_text(std::string_view text, const SeriesFile& file, TimestampFormat format,
                                     std::string detector_id = "import");

/// `timestamp,error` with an empty error cell for warm-up positions.
void write_error_csv(std::ostream& out, const ErrorSeries& errors, std::span<const Instant> timestamps,
                     TimestampFormat format);

} // namespace tsbench
