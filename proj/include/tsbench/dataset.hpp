#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tsbench/common.hpp"
#include "tsbench/timestamp.hpp"

namespace tsbench {

/// Inclusive time interval.
struct AnomalyWindow {
    Instant start = 0;
    Instant end = 0;

    bool contains(Instant t) const { return t >= start && t <= end; }
    bool operator==(const AnomalyWindow&) const = default;
};

/// Sorted, non-overlapping set of anomaly windows. Overlapping input windows are merged.
class AnomalyWindowSet {
public:
    AnomalyWindowSet() = default;
    explicit AnomalyWindowSet(std::vector<AnomalyWindow> windows);

    const std::vector<AnomalyWindow>& windows() const { return windows_; }
    std::size_t size() const { return windows_.size(); }
    bool empty() const { return windows_.empty(); }
    bool contains(Instant t) const;

    /// Windows intersecting [lo, hi], clipped to it.
    AnomalyWindowSet clipped(Instant lo, Instant hi) const;

    bool operator==(const AnomalyWindowSet&) const = default;

private:
    std::vector<AnomalyWindow> windows_;
};

/// One telemetry trace: strictly increasing timestamps, an n x d value matrix, and labels.
class SeriesFile {
public:
    SeriesFile() = default;
    SeriesFile(std::string id, std::vector<Instant> timestamps, Matrix values, AnomalyWindowSet labels = {});

    const std::string& id() const { return id_; }
    const std::vector<Instant>& timestamps() const { return timestamps_; }
    const Matrix& values() const { return values_; }
    const AnomalyWindowSet& labels() const { return labels_; }
    std::size_t size() const { return timestamps_.size(); }
    std::size_t dims() const { return static_cast<std::size_t>(values_.cols()); }

    SeriesFile with_labels(AnomalyWindowSet labels) const;
    SeriesFile with_values(Matrix values) const;

    bool operator==(const SeriesFile& other) const;

private:
    std::string id_;
    std::vector<Instant> timestamps_;
    Matrix values_;
    AnomalyWindowSet labels_;
};

struct Subgroup {
    std::string name;
    std::vector<SeriesFile> files;
};

struct TimeSeriesDataset {
    std::string name;
    std::vector<Subgroup> subgroups;

    /// Throws InputError on duplicate subgroup names or duplicate file ids within a subgroup.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Ingestion

struct CsvSchema {
    std::string timestamp_column = "timestamp";
    /// Empty means every column other than the timestamp.
    std::vector<std::string> value_columns;
    TimestampFormat timestamp_format = TimestampFormat::iso8601;
};

struct IngestReport {
    std::size_t rows_read = 0;
    /// Includes duplicates.
    std::size_t rows_dropped = 0;
    std::size_t duplicates = 0;
    std::size_t label_dropped = 0;
};

struct IngestResult {
    SeriesFile file;
    IngestReport report;
};

/// Drops rows with malformed timestamps, non-numeric or non-finite values, or a wrong field
/// count; sorts by timestamp. Among rows sharing a timestamp the lexicographically smallest
/// value row is kept, so the result does not depend on input row order.
IngestResult ingest_csv_text(std::string_view text, const CsvSchema& schema, std::string file_id);
IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema, std::string file_id = {});

// ---------------------------------------------------------------------------
// Labels

using WindowLabels = std::vector<AnomalyWindow>;
using PointLabels = std::vector<Instant>;
using LabelSpec = std::variant<WindowLabels, PointLabels>;

struct LabelAttachment {
    SeriesFile file;
    std::size_t dropped = 0;
};

/// Window labels are attached as given; windows that miss [first, last] entirely are dropped.
/// Point labels become [t - expansion*delta, t + expansion*delta] with delta the median
/// sampling interval, then overlapping windows are merged. Points outside the series are dropped.
LabelAttachment attach_labels(const SeriesFile& file, const LabelSpec& labels, std::size_t expansion);

/// Label document: {"file id": [[start, end], ...]} or {"file id": [t, ...]}.
/// Timestamps may be strings or integers.
std::map<std::string, LabelSpec> parse_label_document(const nlohmann::json& doc, TimestampFormat format);
std::map<std::string, LabelSpec> read_label_document(const std::filesystem::path& path, TimestampFormat format);

/// Median positive spacing between consecutive timestamps (lower median); 0 for fewer than 2 rows.
Instant median_sampling_interval(std::span<const Instant> timestamps);

// ---------------------------------------------------------------------------
// Splitting and normalization

struct SplitSpec {
    double train_fraction = 0.70;
    double validation_fraction_of_train = 0.10;

    void validate() const;
};

/// The training period is [train_core.begin, validation.end); validation is its trailing slice.
struct SplitView {
    IndexRange train_core;
    IndexRange validation;
    IndexRange test;

    IndexRange training_period() const { return {train_core.begin, validation.end}; }
    bool operator==(const SplitView&) const = default;
};

/// Training length round(train_fraction*n), validation round(validation_fraction*training),
/// both rounded half away from zero. Throws InputError if any range would be empty.
SplitView chronological_split(std::size_t n, const SplitSpec& spec = {});
SplitView chronological_split(const SeriesFile& file, const SplitSpec& spec = {});

struct NormalizationStats {
    Vector mean;
    Vector stddev;

    bool operator==(const NormalizationStats& other) const
    {
        return mean.size() == other.mean.size() && mean == other.mean && stddev == other.stddev;
    }
};

/// Per-feature mean and sample std over the training period only, std floored at kStdFloor.
NormalizationStats fit_normalizer(const SeriesFile& file, const SplitView& view);
SeriesFile apply_normalizer(const SeriesFile& file, const NormalizationStats& stats);

} // namespace tsbench
