#include "tsbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include <nlohmann/json.hpp>

#include "tsbench/csv.hpp"

namespace tsbench {

// ---------------------------------------------------------------------------
// AnomalyWindowSet

AnomalyWindowSet::AnomalyWindowSet(std::vector<AnomalyWindow> windows)
{
    for (const auto& w : windows)
        if (w.start > w.end)
            throw InputError("anomaly window start after end");
    std::sort(windows.begin(), windows.end(),
              [](const AnomalyWindow& a, const AnomalyWindow& b) { return a.start < b.start || (a.start == b.start && a.end < b.end); });
    for (const auto& w : windows) {
        if (!windows_.empty() && w.start <= windows_.back().end)
            windows_.back().end = std::max(windows_.back().end, w.end);
        else
            windows_.push_back(w);
    }
}

bool AnomalyWindowSet::contains(Instant t) const
{
    auto it = std::upper_bound(windows_.begin(), windows_.end(), t,
                               [](Instant v, const AnomalyWindow& w) { return v < w.start; });
    return it != windows_.begin() && std::prev(it)->contains(t);
}

AnomalyWindowSet AnomalyWindowSet::clipped(Instant lo, Instant hi) const
{
    std::vector<AnomalyWindow> out;
    for (const auto& w : windows_)
        if (w.end >= lo && w.start <= hi)
            out.push_back({std::max(w.start, lo), std::min(w.end, hi)});
    return AnomalyWindowSet(std::move(out));
}

// ---------------------------------------------------------------------------
// SeriesFile

SeriesFile::SeriesFile(std::string id, std::vector<Instant> timestamps, Matrix values, AnomalyWindowSet labels)
    : id_(std::move(id)), timestamps_(std::move(timestamps)), values_(std::move(values)), labels_(std::move(labels))
{
    if (static_cast<std::size_t>(values_.rows()) != timestamps_.size())
        throw InputError("series " + id_ + ": row count does not match timestamp count");
    if (values_.cols() < 1 && !timestamps_.empty())
        throw InputError("series " + id_ + ": no value columns");
    for (std::size_t i = 1; i < timestamps_.size(); ++i)
        if (timestamps_[i] <= timestamps_[i - 1])
            throw InputError("series " + id_ + ": timestamps not strictly increasing");
    if (!values_.allFinite())
        throw InputError("series " + id_ + ": non-finite value");
}

SeriesFile SeriesFile::with_labels(AnomalyWindowSet labels) const
{
    SeriesFile copy = *this;
    copy.labels_ = std::move(labels);
    return copy;
}

SeriesFile SeriesFile::with_values(Matrix values) const
{
    return SeriesFile(id_, timestamps_, std::move(values), labels_);
}

bool SeriesFile::operator==(const SeriesFile& other) const
{
    return id_ == other.id_ && timestamps_ == other.timestamps_ && values_.rows() == other.values_.rows() &&
           values_.cols() == other.values_.cols() && values_ == other.values_ && labels_ == other.labels_;
}

void TimeSeriesDataset::validate() const
{
    std::set<std::string> names;
    for (const auto& sg : subgroups) {
        if (!names.insert(sg.name).second)
            throw InputError("dataset " + name + ": duplicate subgroup " + sg.name);
        std::set<std::string> ids;
        for (const auto& f : sg.files)
            if (!ids.insert(f.id()).second)
                throw InputError("subgroup " + sg.name + ": duplicate file id " + f.id());
    }
}

// ---------------------------------------------------------------------------
// Ingestion

namespace {

std::optional<double> parse_number(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    if (s.empty())
        return std::nullopt;
    if (s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v))
        return std::nullopt;
    return v;
}

struct ParsedRow {
    Instant t;
    std::vector<double> values;
};

} // namespace

IngestResult ingest_csv_text(std::string_view text, const CsvSchema& schema, std::string file_id)
{
    const CsvTable table = parse_csv(text);
    const int ts_col = table.column(schema.timestamp_column);
    if (ts_col < 0)
        throw InputError("missing timestamp column '" + schema.timestamp_column + "' in " + file_id);

    std::vector<int> value_cols;
    if (schema.value_columns.empty()) {
        for (std::size_t i = 0; i < table.header.size(); ++i)
            if (static_cast<int>(i) != ts_col)
                value_cols.push_back(static_cast<int>(i));
    } else {
        for (const auto& name : schema.value_columns) {
            const int c = table.column(name);
            if (c < 0)
                throw InputError("missing value column '" + name + "' in " + file_id);
            value_cols.push_back(c);
        }
    }
    if (value_cols.empty())
        throw InputError("no value columns in " + file_id);

    IngestReport report;
    std::vector<ParsedRow> rows;
    rows.reserve(table.rows.size());
    for (const auto& fields : table.rows) {
        ++report.rows_read;
        if (fields.size() != table.header.size()) {
            ++report.rows_dropped;
            continue;
        }
        const auto t = parse_timestamp(fields[static_cast<std::size_t>(ts_col)], schema.timestamp_format);
        if (!t) {
            ++report.rows_dropped;
            continue;
        }
        ParsedRow row{*t, {}};
        row.values.reserve(value_cols.size());
        bool ok = true;
        for (const int c : value_cols) {
            const auto v = parse_number(fields[static_cast<std::size_t>(c)]);
            if (!v) {
                ok = false;
                break;
            }
            row.values.push_back(*v);
        }
        if (!ok) {
            ++report.rows_dropped;
            continue;
        }
        rows.push_back(std::move(row));
    }

    std::sort(rows.begin(), rows.end(),
              [](const ParsedRow& a, const ParsedRow& b) { return a.t < b.t || (a.t == b.t && a.values < b.values); });
    std::vector<ParsedRow> unique;
    unique.reserve(rows.size());
    for (auto& r : rows) {
        if (!unique.empty() && unique.back().t == r.t) {
            ++report.duplicates;
            ++report.rows_dropped;
            continue;
        }
        unique.push_back(std::move(r));
    }
    if (unique.empty())
        throw InputError("no valid rows in " + file_id);

    std::vector<Instant> timestamps;
    timestamps.reserve(unique.size());
    Matrix values(static_cast<Eigen::Index>(unique.size()), static_cast<Eigen::Index>(value_cols.size()));
    for (std::size_t i = 0; i < unique.size(); ++i) {
        timestamps.push_back(unique[i].t);
        for (std::size_t j = 0; j < value_cols.size(); ++j)
            values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = unique[i].values[j];
    }
    return {SeriesFile(std::move(file_id), std::move(timestamps), std::move(values)), report};
}

IngestResult ingest_csv(const std::filesystem::path& path, const CsvSchema& schema, std::string file_id)
{
    if (file_id.empty())
        file_id = path.filename().string();
    return ingest_csv_text(read_text_file(path), schema, std::move(file_id));
}

// ---------------------------------------------------------------------------
// Labels

Instant median_sampling_interval(std::span<const Instant> timestamps)
{
    if (timestamps.size() < 2)
        return 0;
    std::vector<Instant> diffs;
    diffs.reserve(timestamps.size() - 1);
    for (std::size_t i = 1; i < timestamps.size(); ++i)
        diffs.push_back(timestamps[i] - timestamps[i - 1]);
    const auto mid = diffs.begin() + static_cast<std::ptrdiff_t>((diffs.size() - 1) / 2);
    std::nth_element(diffs.begin(), mid, diffs.end());
    return *mid;
}

LabelAttachment attach_labels(const SeriesFile& file, const LabelSpec& labels, std::size_t expansion)
{
    LabelAttachment out{file, 0};
    if (file.size() == 0)
        return out;
    const Instant first = file.timestamps().front();
    const Instant last = file.timestamps().back();

    std::vector<AnomalyWindow> windows;
    if (const auto* given = std::get_if<WindowLabels>(&labels)) {
        for (const auto& w : *given) {
            if (w.start > w.end)
                throw InputError("label window start after end for " + file.id());
            if (w.end < first || w.start > last) {
                ++out.dropped;
                continue;
            }
            windows.push_back(w);
        }
    } else {
        const auto& points = std::get<PointLabels>(labels);
        const Instant half = static_cast<Instant>(expansion) * median_sampling_interval(file.timestamps());
        for (const Instant t : points) {
            if (t < first || t > last) {
                ++out.dropped;
                continue;
            }
            windows.push_back({t - half, t + half});
        }
    }
    out.file = file.with_labels(AnomalyWindowSet(std::move(windows)));
    return out;
}

namespace {

Instant json_instant(const nlohmann::json& v, TimestampFormat format, const std::string& key)
{
    if (v.is_number_integer())
        return v.get<Instant>();
    if (v.is_string()) {
        if (auto t = parse_timestamp(v.get<std::string>(), format))
            return *t;
    }
    throw InputError("bad label timestamp for '" + key + "': " + v.dump());
}

} // namespace

std::map<std::string, LabelSpec> parse_label_document(const nlohmann::json& doc, TimestampFormat format)
{
    if (!doc.is_object())
        throw InputError("label document must be a JSON object");
    std::map<std::string, LabelSpec> out;
    for (const auto& [key, value] : doc.items()) {
        if (!value.is_array())
            throw InputError("labels for '" + key + "' must be an array");
        const bool windows = !value.empty() && value.front().is_array();
        if (windows) {
            WindowLabels ws;
            for (const auto& pair : value) {
                if (!pair.is_array() || pair.size() != 2)
                    throw InputError("label window for '" + key + "' must be a [start, end] pair");
                ws.push_back({json_instant(pair[0], format, key), json_instant(pair[1], format, key)});
            }
            out.emplace(key, std::move(ws));
        } else if (value.empty()) {
            out.emplace(key, WindowLabels{});
        } else {
            PointLabels ps;
            for (const auto& p : value)
                ps.push_back(json_instant(p, format, key));
            out.emplace(key, std::move(ps));
        }
    }
    return out;
}

std::map<std::string, LabelSpec> read_label_document(const std::filesystem::path& path, TimestampFormat format)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("cannot parse label document " + path.string() + ": " + e.what());
    }
    return parse_label_document(doc, format);
}

// ---------------------------------------------------------------------------
// Split and normalization

void SplitSpec::validate() const
{
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw ConfigError("train_fraction must be in (0, 1)");
    if (!(validation_fraction_of_train > 0.0 && validation_fraction_of_train < 1.0))
        throw ConfigError("validation_fraction_of_train must be in (0, 1)");
}

SplitView chronological_split(std::size_t n, const SplitSpec& spec)
{
    spec.validate();
    const auto training = static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
    const auto validation =
        static_cast<std::size_t>(std::llround(spec.validation_fraction_of_train * static_cast<double>(training)));
    if (training >= n || validation == 0 || validation >= training)
        throw InputError("series of " + std::to_string(n) + " rows is too short for a train/validation/test split");
    return SplitView{{0, training - validation}, {training - validation, training}, {training, n}};
}

SplitView chronological_split(const SeriesFile& file, const SplitSpec& spec)
{
    return chronological_split(file.size(), spec);
}

NormalizationStats fit_normalizer(const SeriesFile& file, const SplitView& view)
{
    const IndexRange train = view.training_period();
    if (train.empty() || train.end > file.size())
        throw InputError("empty or out-of-range training period for " + file.id());

    const auto rows = file.values().middleRows(static_cast<Eigen::Index>(train.begin), static_cast<Eigen::Index>(train.size()));
    NormalizationStats stats;
    stats.mean = rows.colwise().mean().transpose();
    stats.stddev = Vector::Constant(rows.cols(), kStdFloor);
    if (rows.rows() > 1) {
        const Matrix centered = rows.rowwise() - stats.mean.transpose();
        const Vector var = centered.colwise().squaredNorm().transpose() / static_cast<double>(rows.rows() - 1);
        for (Eigen::Index j = 0; j < var.size(); ++j) {
            const double s = std::sqrt(var(j));
            stats.stddev(j) = s < kStdFloor ? kStdFloor : s;
        }
    }
    return stats;
}

SeriesFile apply_normalizer(const SeriesFile& file, const NormalizationStats& stats)
{
    if (static_cast<std::size_t>(stats.mean.size()) != file.dims() || stats.stddev.size() != stats.mean.size())
        throw InputError("normalizer dimension does not match series " + file.id());
    Matrix scaled = (file.values().rowwise() - stats.mean.transpose()).array().rowwise() /
                    stats.stddev.transpose().array();
    return file.with_values(std::move(scaled));
}

} // namespace tsbench
