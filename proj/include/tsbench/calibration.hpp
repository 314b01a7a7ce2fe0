#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tsbench/dataset.hpp"
#include "tsbench/error_series.hpp"
#include "tsbench/likelihood.hpp"
#include "tsbench/nab.hpp"

namespace tsbench {

struct IntInterval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
};

struct RealInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchSpace {
    IntInterval long_window{64, 512};
    IntInterval short_window{3, 32};
    RealInterval threshold{0.90, 0.9995};
    std::size_t trial_budget = 100;
    std::uint64_t seed = 0;

    /// Throws ConfigError for empty ranges, thresholds outside (0, 1), a zero budget,
    /// or when no (long, short) pair satisfies short < long.
    void validate() const;
};

struct CalibrationTrial {
    LikelihoodParams params;
    double validation_score = 0.0;
    std::size_t trial_index = 0;
    std::size_t detections = 0;
};

struct CalibrationResult {
    LikelihoodParams best;
    double best_score = 0.0;
    std::vector<CalibrationTrial> trials;
    std::string selection_rule;
};

/// One file's contribution to a (pooled) calibration.
struct CalibrationInput {
    const ErrorSeries& errors;
    const SeriesFile& file; // timestamps and truth windows
    SplitView view;
};

inline constexpr const char* kSelectionRule =
    "max validation NAB score; ties: higher threshold, larger long window, smaller short window, lower trial index";

/// Draws the trial parameters. Long window uniform in [max(lo, short.lo + 1), hi], short window
/// uniform in [short.lo, min(short.hi, long - 1)], threshold uniform in [lo, hi).
std::vector<LikelihoodParams> draw_trials(const SearchSpace& space);

/// Seeded random search over (long, short, threshold). Each trial runs likelihood -> detect -> NAB
/// on every input's validation slice, with rolling-window history taken from earlier training
/// rows, against truth clipped to the validation time range; per-file reports are pooled with
/// score_subgroup(). Only training-period errors and labels are read.
CalibrationResult calibrate(std::span<const CalibrationInput> inputs, const SearchSpace& space,
                            const ScoringProfile& profile = {});
CalibrationResult calibrate(const ErrorSeries& errors, const SeriesFile& file, const SplitView& view,
                            const SearchSpace& space, const ScoringProfile& profile = {});

/// Scores `params` once on the test slice. The first test decision uses the trailing
/// long_window - 1 training errors plus the first test error. Truth is clipped to the test time range.
NabReport evaluate_test(const ErrorSeries& errors, const SeriesFile& file, const SplitView& view,
                        const LikelihoodParams& params, const ScoringProfile& profile = {});

} // namespace tsbench
