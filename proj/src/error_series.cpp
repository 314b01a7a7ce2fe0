#include "tsbench/error_series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "tsbench/csv.hpp"

namespace tsbench {

ErrorSeries::ErrorSeries(std::string file_id, std::string detector_id, std::vector<double> values, std::size_t warmup)
    : file_id_(std::move(file_id)), detector_id_(std::move(detector_id)), values_(std::move(values)), warmup_(warmup)
{
    if (warmup_ > values_.size())
        throw InputError("error series warm-up longer than the series");
    for (std::size_t i = 0; i < warmup_; ++i)
        values_[i] = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = warmup_; i < values_.size(); ++i)
        if (!std::isfinite(values_[i]) || values_[i] < 0.0)
            throw InputError("error series " + file_id_ + "/" + detector_id_ + ": invalid value at position " +
                             std::to_string(i));
}

bool ErrorSeries::operator==(const ErrorSeries& other) const
{
    if (file_id_ != other.file_id_ || detector_id_ != other.detector_id_ || warmup_ != other.warmup_ ||
        values_.size() != other.values_.size())
        return false;
    for (std::size_t i = warmup_; i < values_.size(); ++i)
        if (values_[i] != other.values_[i])
            return false;
    return true;
}

ErrorSeries rolling_predictor_error(const SeriesFile& file, std::size_t window, std::string detector_id)
{
    if (window == 0)
        throw ConfigError("rolling predictor window must be positive");
    if (window >= file.size())
        throw InputError("rolling predictor window " + std::to_string(window) + " >= series length for " + file.id());

    const Matrix& x = file.values();
    const auto d = static_cast<double>(file.dims());
    std::vector<double> out(file.size(), 0.0);
    for (std::size_t t = window; t < file.size(); ++t) {
        const Vector predicted =
            x.middleRows(static_cast<Eigen::Index>(t - window), static_cast<Eigen::Index>(window)).colwise().mean().transpose();
        out[t] = (x.row(static_cast<Eigen::Index>(t)).transpose() - predicted).squaredNorm() / d;
    }
    return ErrorSeries(file.id(), std::move(detector_id), std::move(out), window);
}

ErrorSeries import_error_series_text(std::string_view text, const SeriesFile& file, TimestampFormat format,
                                     std::string detector_id)
{
    const CsvTable table = parse_csv(text);
    const int ts_col = table.column("timestamp");
    const int err_col = table.column("error");
    if (ts_col < 0 || err_col < 0)
        throw InputError("error import needs a `timestamp,error` header");

    std::vector<std::pair<Instant, double>> rows;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& fields = table.rows[r];
        if (fields.size() != table.header.size())
            throw InputError("error import: ragged row " + std::to_string(r + 2));
        const auto t = parse_timestamp(fields[static_cast<std::size_t>(ts_col)], format);
        if (!t)
            throw InputError("error import: bad timestamp on row " + std::to_string(r + 2));
        const auto& cell = fields[static_cast<std::size_t>(err_col)];
        if (cell.empty())
            continue; // exported warm-up position
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
            throw InputError("error import: non-numeric error on row " + std::to_string(r + 2));
        if (v < 0.0)
            throw InputError("error import: negative error on row " + std::to_string(r + 2));
        rows.emplace_back(*t, v);
    }
    if (rows.empty())
        throw InputError("error import: no rows");
    std::sort(rows.begin(), rows.end());

    const auto& ts = file.timestamps();
    auto first = std::lower_bound(ts.begin(), ts.end(), rows.front().first);
    if (first == ts.end() || *first != rows.front().first)
        throw InputError("error import: unknown timestamp " + format_timestamp(rows.front().first, format));
    const auto warmup = static_cast<std::size_t>(first - ts.begin());

    std::vector<double> values(ts.size(), 0.0);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = warmup + k;
        if (i >= ts.size() || ts[i] != rows[k].first) {
            if (!std::binary_search(ts.begin(), ts.end(), rows[k].first))
                throw InputError("error import: unknown timestamp " + format_timestamp(rows[k].first, format));
            throw InputError("error import: gap at " + format_timestamp(ts[i], format) + " (index " + std::to_string(i) + ")");
        }
        values[i] = rows[k].second;
    }
    if (warmup + rows.size() != ts.size())
        throw InputError("error import: gap at " + format_timestamp(ts[warmup + rows.size()], format) + " (index " +
                         std::to_string(warmup + rows.size()) + ")");
    return ErrorSeries(file.id(), std::move(detector_id), std::move(values), warmup);
}

ErrorSeries import_error_series(const std::filesystem::path& path, const SeriesFile& file, TimestampFormat format,
                                std::string detector_id)
{
    return import_error_series_text(read_text_file(path), file, format, std::move(detector_id));
}

void write_error_csv(std::ostream& out, const ErrorSeries& errors, std::span<const Instant> timestamps,
                     TimestampFormat format)
{
    out << "timestamp,error\n";
    char buf[32];
    for (std::size_t i = 0; i < errors.size(); ++i) {
        out << format_timestamp(timestamps[i], format) << ',';
        if (errors.defined(i)) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, errors[i]);
            out.write(buf, ptr - buf);
        }
        out << '\n';
    }
}

} // namespace tsbench
