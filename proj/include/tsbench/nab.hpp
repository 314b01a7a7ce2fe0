#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tsbench/dataset.hpp"
#include "tsbench/likelihood.hpp"

namespace tsbench {

/// Defaults are the NAB "standard" profile.
struct ScoringProfile {
    double tp_weight = 1.0;
    double fp_weight = 0.11;
    double fn_weight = 1.0;
    double sigmoid_steepness = 5.0;

    void validate() const;
};

/// 2 / (1 + e^(k y)) - 1. Positive for y < 0, zero at y = 0, negative for y > 0.
double scaled_sigmoid(double y, double steepness);

struct WindowOutcome {
    AnomalyWindow window;
    std::optional<Instant> earliest_detection;
    double credit = 0.0;
};

struct FalsePositive {
    Instant timestamp = 0;
    double penalty = 0.0;
};

struct NabReport {
    double raw_score = 0.0;
    double normalized_score = 0.0;
    /// Normalization anchors: raw score of the null and of the perfect detector.
    double null_score = 0.0;
    double perfect_score = 0.0;
    std::vector<WindowOutcome> per_window;
    std::vector<FalsePositive> fp_events;
    std::size_t fn_count = 0;
    std::size_t detection_count = 0;
    /// Truth windows containing no row of the scored series; they cannot be detected and are not scored.
    std::size_t unscorable_windows = 0;

    std::size_t window_count() const { return per_window.size(); }
    /// No truth windows and no detections: the correct outcome for an anomaly-free slice.
    bool correct_non_detection() const { return per_window.empty() && detection_count == 0; }
};

/// NAB window scoring over row positions. A window covers rows a..b (timestamps inside it).
///  - The earliest detection at row i in a window earns tp_weight * sigmoid(y),
///    y = (i - b) / (b - a) (y = -1 when a == b); later detections in the same window are ignored.
///  - A detection outside every window costs fp_weight * |sigmoid(y)| where y is the distance
///    past the nearest preceding window end in units of that window's row count, or, before the
///    first window, the distance to the first window start in units of the median window row
///    count. Beyond y = 1 the penalty is the flat fp_weight. Without windows every FP costs fp_weight.
///  - Each window without a detection costs fn_weight.
/// normalized_score is filled using normalize().
NabReport score_raw(std::span<const Instant> timestamps, const DetectionSeries& detections,
                    const AnomalyWindowSet& truth, const ScoringProfile& profile = {});

/// Raw score of an ideal detector on `window_count` windows.
double perfect_raw_score(std::size_t window_count, const ScoringProfile& profile);
double null_raw_score(std::size_t window_count, const ScoringProfile& profile);

/// 100 * (raw - null) / (perfect - null). With zero windows: 100 * raw / (tp_weight*sigmoid(-1) + fn_weight).
double normalize(double raw, std::size_t window_count, const ScoringProfile& profile = {});

struct SubgroupScore {
    double raw_score = 0.0;
    double null_score = 0.0;
    double perfect_score = 0.0;
    double normalized_score = 0.0;
    std::size_t window_count = 0;
    std::size_t detection_count = 0;
};

/// Sums raw, null and perfect over files and normalizes the totals.
SubgroupScore score_subgroup(std::span<const NabReport> reports, const ScoringProfile& profile = {});

} // namespace tsbench
