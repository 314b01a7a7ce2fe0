#include "tsbench/nab.hpp"

#include <algorithm>
#include <cmath>

namespace tsbench {

void ScoringProfile::validate() const
{
    if (tp_weight < 0.0 || fp_weight < 0.0 || fn_weight < 0.0)
        throw ConfigError("scoring profile weights must be >= 0");
    if (!(sigmoid_steepness > 0.0))
        throw ConfigError("sigmoid steepness must be > 0");
}

double scaled_sigmoid(double y, double steepness)
{
    return 2.0 / (1.0 + std::exp(steepness * y)) - 1.0;
}

double perfect_raw_score(std::size_t window_count, const ScoringProfile& profile)
{
    return profile.tp_weight * scaled_sigmoid(-1.0, profile.sigmoid_steepness) * static_cast<double>(window_count);
}

double null_raw_score(std::size_t window_count, const ScoringProfile& profile)
{
    return -profile.fn_weight * static_cast<double>(window_count);
}

namespace {

double normalize_with_anchors(double raw, double null_score, double perfect_score, std::size_t window_count,
                              const ScoringProfile& profile)
{
    if (window_count == 0) {
        const double denom = profile.tp_weight * scaled_sigmoid(-1.0, profile.sigmoid_steepness) + profile.fn_weight;
        return denom > 0.0 ? 100.0 * raw / denom : 0.0;
    }
    const double denom = perfect_score - null_score;
    return denom > 0.0 ? 100.0 * (raw - null_score) / denom : 0.0;
}

struct RowSpan {
    std::size_t first;
    std::size_t last;
    std::size_t rows() const { return last - first + 1; }
};

} // namespace

double normalize(double raw, std::size_t window_count, const ScoringProfile& profile)
{
    return normalize_with_anchors(raw, null_raw_score(window_count, profile), perfect_raw_score(window_count, profile),
                                  window_count, profile);
}

NabReport score_raw(std::span<const Instant> timestamps, const DetectionSeries& detections,
                    const AnomalyWindowSet& truth, const ScoringProfile& profile)
{
    profile.validate();
    if (detections.size() != timestamps.size())
        throw InputError("detections are not aligned with timestamps");

    NabReport report;
    const double k = profile.sigmoid_steepness;

    // Map each window to the rows it covers.
    std::vector<RowSpan> spans;
    for (const auto& w : truth.windows()) {
        const auto lo = std::lower_bound(timestamps.begin(), timestamps.end(), w.start);
        const auto hi = std::upper_bound(timestamps.begin(), timestamps.end(), w.end);
        if (lo >= hi) {
            ++report.unscorable_windows;
            continue;
        }
        spans.push_back({static_cast<std::size_t>(lo - timestamps.begin()), static_cast<std::size_t>(hi - timestamps.begin()) - 1});
        report.per_window.push_back({w, std::nullopt, 0.0});
    }

    double median_rows = 1.0;
    if (!spans.empty()) {
        std::vector<std::size_t> lengths;
        for (const auto& s : spans)
            lengths.push_back(s.rows());
        std::sort(lengths.begin(), lengths.end());
        const std::size_t m = lengths.size();
        median_rows = m % 2 == 1 ? static_cast<double>(lengths[m / 2])
                                 : 0.5 * static_cast<double>(lengths[m / 2 - 1] + lengths[m / 2]);
    }

    double raw = 0.0;
    std::size_t next_window = 0; // first window whose last row is >= i
    for (std::size_t i = 0; i < detections.size(); ++i) {
        while (next_window < spans.size() && spans[next_window].last < i)
            ++next_window;
        if (!detections.flags[i])
            continue;
        ++report.detection_count;

        if (next_window < spans.size() && spans[next_window].first <= i) {
            auto& outcome = report.per_window[next_window];
            if (outcome.earliest_detection)
                continue;
            const auto& span = spans[next_window];
            const double y = span.last == span.first
                                 ? -1.0
                                 : (static_cast<double>(i) - static_cast<double>(span.last)) /
                                       static_cast<double>(span.last - span.first);
            outcome.earliest_detection = timestamps[i];
            outcome.credit = profile.tp_weight * scaled_sigmoid(y, k);
            raw += outcome.credit;
            continue;
        }

        double penalty = -profile.fp_weight;
        if (!spans.empty()) {
            double y = 0.0;
            if (next_window > 0) {
                const auto& prev = spans[next_window - 1];
                y = static_cast<double>(i - prev.last) / static_cast<double>(prev.rows());
            } else {
                y = static_cast<double>(spans.front().first - i) / median_rows;
            }
            if (y <= 1.0)
                penalty = -profile.fp_weight * std::abs(scaled_sigmoid(y, k));
        }
        report.fp_events.push_back({timestamps[i], penalty});
        raw += penalty;
    }

    for (const auto& outcome : report.per_window) {
        if (!outcome.earliest_detection) {
            ++report.fn_count;
            raw -= profile.fn_weight;
        }
    }

    report.raw_score = raw;
    report.null_score = null_raw_score(report.per_window.size(), profile);
    report.perfect_score = perfect_raw_score(report.per_window.size(), profile);
    report.normalized_score =
        normalize_with_anchors(raw, report.null_score, report.perfect_score, report.per_window.size(), profile);
    return report;
}

SubgroupScore score_subgroup(std::span<const NabReport> reports, const ScoringProfile& profile)
{
    if (reports.empty())
        throw InputError("subgroup scoring needs at least one file");
    SubgroupScore total;
    for (const auto& r : reports) {
        total.raw_score += r.raw_score;
        total.null_score += r.null_score;
        total.perfect_score += r.perfect_score;
        total.window_count += r.window_count();
        total.detection_count += r.detection_count;
    }
    total.normalized_score =
        normalize_with_anchors(total.raw_score, total.null_score, total.perfect_score, total.window_count, profile);
    return total;
}

} // namespace tsbench
