#include "tsbench/calibration.hpp"

#include <algorithm>
#include <tuple>

#include "tsbench/rng.hpp"

namespace tsbench {

void SearchSpace::validate() const
{
    if (long_window.lo > long_window.hi || short_window.lo > short_window.hi)
        throw ConfigError("search space window range is empty");
    if (short_window.lo < 1 || long_window.lo < 2)
        throw ConfigError("search space needs short >= 1 and long >= 2");
    if (!(threshold.lo > 0.0 && threshold.hi < 1.0 && threshold.lo <= threshold.hi))
        throw ConfigError("threshold range must lie inside (0, 1)");
    if (trial_budget == 0)
        throw ConfigError("trial budget must be positive");
    if (std::max(long_window.lo, short_window.lo + 1) > long_window.hi)
        throw ConfigError("no (long, short) window pair with short < long");
}

std::vector<LikelihoodParams> draw_trials(const SearchSpace& space)
{
    space.validate();
    Rng rng(space.seed);
    const std::int64_t long_lo = std::max(space.long_window.lo, space.short_window.lo + 1);
    std::vector<LikelihoodParams> out;
    out.reserve(space.trial_budget);
    for (std::size_t i = 0; i < space.trial_budget; ++i) {
        const auto W = rng.between(long_lo, space.long_window.hi);
        const auto Ws = rng.between(space.short_window.lo, std::min(space.short_window.hi, W - 1));
        const double threshold = rng.uniform(space.threshold.lo, space.threshold.hi);
        out.push_back({static_cast<std::size_t>(W), static_cast<std::size_t>(Ws), threshold});
    }
    return out;
}

namespace {

struct PreparedInput {
    const ErrorSeries* errors;
    std::span<const Instant> timestamps; // validation rows
    AnomalyWindowSet truth;              // clipped to validation
    IndexRange range;
};

bool better(const CalibrationTrial& a, const CalibrationTrial& b)
{
    if (a.validation_score != b.validation_score)
        return a.validation_score > b.validation_score;
    return std::make_tuple(a.params.threshold, a.params.long_window, b.params.short_window, b.trial_index) >
           std::make_tuple(b.params.threshold, b.params.long_window, a.params.short_window, a.trial_index);
}

} // namespace

CalibrationResult calibrate(std::span<const CalibrationInput> inputs, const SearchSpace& space,
                            const ScoringProfile& profile)
{
    space.validate();
    profile.validate();
    if (inputs.empty())
        throw InputError("calibration needs at least one series");

    std::vector<PreparedInput> prepared;
    for (const auto& in : inputs) {
        const IndexRange val = in.view.validation;
        if (val.empty() || val.end > in.file.size() || in.errors.size() != in.file.size())
            throw InputError("calibration: bad validation slice for " + in.file.id());
        const std::size_t defined_history = val.end > in.errors.warmup() ? val.end - in.errors.warmup() : 0;
        if (defined_history < static_cast<std::size_t>(space.long_window.lo))
            throw InputError("calibration: training period of " + in.file.id() +
                             " has fewer defined errors than the smallest long window");
        const auto& ts = in.file.timestamps();
        prepared.push_back({&in.errors, std::span<const Instant>(ts).subspan(val.begin, val.size()),
                            in.file.labels().clipped(ts[val.begin], ts[val.end - 1]), val});
    }

    CalibrationResult result;
    result.selection_rule = kSelectionRule;
    const auto params = draw_trials(space);
    std::vector<NabReport> reports(prepared.size());
    for (std::size_t t = 0; t < params.size(); ++t) {
        CalibrationTrial trial{params[t], 0.0, t, 0};
        for (std::size_t f = 0; f < prepared.size(); ++f) {
            const auto& p = prepared[f];
            const auto detections = detect(compute_likelihood(*p.errors, params[t], p.range), params[t].threshold);
            reports[f] = score_raw(p.timestamps, detections, p.truth, profile);
            trial.detections += reports[f].detection_count;
        }
        trial.validation_score = score_subgroup(reports, profile).normalized_score;
        result.trials.push_back(trial);
    }

    const CalibrationTrial* best = &result.trials.front();
    for (const auto& trial : result.trials)
        if (better(trial, *best))
            best = &trial;
    result.best = best->params;
    result.best_score = best->validation_score;
    return result;
}

CalibrationResult calibrate(const ErrorSeries& errors, const SeriesFile& file, const SplitView& view,
                            const SearchSpace& space, const ScoringProfile& profile)
{
    const CalibrationInput input{errors, file, view};
    return calibrate(std::span<const CalibrationInput>(&input, 1), space, profile);
}

NabReport evaluate_test(const ErrorSeries& errors, const SeriesFile& file, const SplitView& view,
                        const LikelihoodParams& params, const ScoringProfile& profile)
{
    params.validate();
    const IndexRange test = view.test;
    if (test.empty() || test.end > file.size() || errors.size() != file.size())
        throw InputError("evaluation: empty or misaligned test slice for " + file.id());
    const auto& ts = file.timestamps();
    const auto detections = detect(compute_likelihood(errors, params, test), params.threshold);
    return score_raw(std::span<const Instant>(ts).subspan(test.begin, test.size()), detections,
                     file.labels().clipped(ts[test.begin], ts[test.end - 1]), profile);
}

} // namespace tsbench
