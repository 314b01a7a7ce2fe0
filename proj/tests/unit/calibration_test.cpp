#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tsbench/calibration.hpp"

using namespace tsbench;

namespace {

struct Case {
    SeriesFile file;
    SplitView view;
    ErrorSeries errors;
};

/// |noise| errors with level shifts at the given rows; windows cover each shift.
Case level_shift_case(std::uint64_t seed, std::vector<std::size_t> shifts, std::size_t n = 1000, double height = 6.0)
{
    Rng rng(seed);
    std::vector<Instant> ts(n);
    std::vector<double> e(n);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = 1000 + static_cast<Instant>(i) * 60;
        e[i] = 1.0 + 0.2 * std::abs(rng.normal());
    }
    std::vector<AnomalyWindow> windows;
    for (const auto s : shifts) {
        for (std::size_t i = s; i < s + 10 && i < n; ++i)
            e[i] += height;
        windows.push_back({ts[s - 2], ts[std::min(n - 1, s + 12)]});
    }
    SeriesFile f("f", ts, Matrix::Zero(static_cast<Eigen::Index>(n), 1), AnomalyWindowSet(windows));
    return {f, chronological_split(f), ErrorSeries("f", "d", e)};
}

SearchSpace small_space(std::uint64_t seed = 1, std::size_t budget = 60)
{
    SearchSpace s;
    s.long_window = {20, 60};
    s.short_window = {2, 8};
    s.threshold = {0.9, 0.999};
    s.trial_budget = budget;
    s.seed = seed;
    return s;
}

} // namespace

TEST(SearchSpace, Validation)
{
    SearchSpace s = small_space();
    EXPECT_NO_THROW(s.validate());
    s.short_window = {70, 80};
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_space();
    s.threshold = {0.5, 1.0};
    EXPECT_THROW(s.validate(), ConfigError);
    s = small_space();
    s.trial_budget = 0;
    EXPECT_THROW(s.validate(), ConfigError);
}

TEST(DrawTrials, RespectConstraintsAndSeed)
{
    SearchSpace s = small_space(3, 500);
    s.short_window = {2, 40};
    s.long_window = {5, 30};
    const auto trials = draw_trials(s);
    ASSERT_EQ(trials.size(), 500u);
    for (const auto& p : trials) {
        EXPECT_LT(p.short_window, p.long_window);
        EXPECT_GE(p.long_window, 5u);
        EXPECT_LE(p.long_window, 30u);
        EXPECT_GE(p.short_window, 2u);
        EXPECT_GE(p.threshold, 0.9);
        EXPECT_LT(p.threshold, 0.999);
    }
    EXPECT_EQ(trials, draw_trials(s));
    s.seed = 4;
    EXPECT_NE(trials, draw_trials(s));
}

TEST(Calibrate, FindsValidationAnomaly)
{
    const Case c = level_shift_case(5, {660});
    const auto result = calibrate(c.errors, c.file, c.view, small_space(7, 100));
    EXPECT_EQ(result.trials.size(), 100u);
    EXPECT_GT(result.best_score, 0.0);
    double best = -1e300;
    for (const auto& t : result.trials)
        best = std::max(best, t.validation_score);
    EXPECT_EQ(result.best_score, best);
    EXPECT_EQ(result.selection_rule, kSelectionRule);

    // A coarse lattice over the same space also has a positive region.
    bool positive = false;
    for (std::size_t W : {20, 40, 60})
        for (std::size_t Ws : {2, 5, 8})
            for (double th : {0.9, 0.95, 0.99}) {
                const LikelihoodParams p{W, Ws, th};
                const auto det = detect(compute_likelihood(c.errors, p, c.view.validation), th);
                const auto& ts = c.file.timestamps();
                const auto r = score_raw(std::span<const Instant>(ts).subspan(c.view.validation.begin, c.view.validation.size()),
                                         det, c.file.labels().clipped(ts[c.view.validation.begin], ts[c.view.validation.end - 1]));
                positive = positive || r.normalized_score > 0.0;
            }
    EXPECT_TRUE(positive);
}

TEST(Calibrate, NoValidationWindowsPicksQuietConfiguration)
{
    const Case c = level_shift_case(6, {800});
    const auto result = calibrate(c.errors, c.file, c.view, small_space(2, 100));
    bool any_quiet = false;
    for (const auto& t : result.trials)
        any_quiet = any_quiet || t.detections == 0;
    ASSERT_TRUE(any_quiet);
    EXPECT_EQ(result.best_score, 0.0);
    for (const auto& t : result.trials)
        if (t.params == result.best)
            EXPECT_EQ(t.detections, 0u);
}

TEST(Calibrate, TieBreakPrefersConservativeParameters)
{
    const Case c = level_shift_case(6, {800});
    const auto result = calibrate(c.errors, c.file, c.view, small_space(2, 100));
    for (const auto& t : result.trials) {
        if (t.validation_score != result.best_score)
            continue;
        EXPECT_LE(t.params.threshold, result.best.threshold);
        if (t.params.threshold == result.best.threshold)
            EXPECT_LE(t.params.long_window, result.best.long_window);
    }
}

TEST(Calibrate, IgnoresTestSlice)
{
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        Case c = level_shift_case(100 + trial, {300, 660, 850});
        const auto before = calibrate(c.errors, c.file, c.view, small_space(trial));
        std::vector<double> e = c.errors.values();
        for (std::size_t i = c.view.test.begin; i < e.size(); ++i)
            e[i] = 50.0 * rng.uniform01();
        std::vector<AnomalyWindow> windows;
        for (const auto& w : c.file.labels().windows())
            if (w.end < c.file.timestamps()[c.view.test.begin])
                windows.push_back(w);
        windows.push_back({c.file.timestamps()[c.view.test.begin + 5], c.file.timestamps()[c.view.test.begin + 9]});
        const SeriesFile mutated = c.file.with_labels(AnomalyWindowSet(windows));
        const auto after = calibrate(ErrorSeries("f", "d", e), mutated, c.view, small_space(trial));
        ASSERT_EQ(before.trials.size(), after.trials.size());
        EXPECT_EQ(before.best, after.best);
        for (std::size_t k = 0; k < before.trials.size(); ++k)
            EXPECT_EQ(before.trials[k].validation_score, after.trials[k].validation_score);
    }
}

TEST(Calibrate, RejectsShortHistory)
{
    const Case c = level_shift_case(6, {}, 20);
    EXPECT_THROW(calibrate(c.errors, c.file, c.view, small_space()), InputError);
}

TEST(Calibrate, PooledInputsSumReports)
{
    const Case a = level_shift_case(8, {660});
    const Case b = level_shift_case(9, {300});
    const std::vector<CalibrationInput> both{{a.errors, a.file, a.view}, {b.errors, b.file, b.view}};
    const auto pooled = calibrate(both, small_space(5, 30));
    const auto alone = calibrate(a.errors, a.file, a.view, small_space(5, 30));
    // b has no validation windows, so its detections only ever subtract.
    for (std::size_t k = 0; k < pooled.trials.size(); ++k)
        EXPECT_GE(pooled.trials[k].detections, alone.trials[k].detections);
}

TEST(EvaluateTest, WarmupContinuity)
{
    const Case c = level_shift_case(10, {720, 900});
    const LikelihoodParams p{40, 4, 0.95};
    const NabReport r = evaluate_test(c.errors, c.file, c.view, p);
    // Reference: the whole-series likelihood sliced to the test range.
    const auto full = compute_likelihood(c.errors, p);
    const auto det = detect(full, p.threshold);
    std::size_t expected = 0;
    for (std::size_t i = c.view.test.begin; i < c.view.test.end; ++i)
        expected += det.flags[i] ? 1 : 0;
    EXPECT_EQ(r.detection_count, expected);
    const auto first = compute_likelihood(c.errors, p, {c.view.test.begin, c.view.test.begin + 1});
    EXPECT_TRUE(first.defined(0));
    EXPECT_EQ(first[0], full[c.view.test.begin]);
}

TEST(EvaluateTest, ZeroWindowSlices)
{
    Case c = level_shift_case(11, {300});
    const NabReport quiet = evaluate_test(c.errors, c.file, c.view, {40, 4, 0.9999999});
    EXPECT_EQ(quiet.normalized_score, 0.0);
    EXPECT_TRUE(quiet.correct_non_detection());

    std::vector<double> e = c.errors.values();
    for (std::size_t i = 0; i < 6; ++i)
        e[c.view.test.begin + 100 + i] += 50.0;
    const NabReport noisy = evaluate_test(ErrorSeries("f", "d", e), c.file, c.view, {40, 4, 0.95});
    EXPECT_GT(noisy.detection_count, 0u);
    EXPECT_LT(noisy.normalized_score, 0.0);
}

TEST(EvaluateTest, PerfectDetection)
{
    // A single spike row exactly at a one-row window start: detection lands on the window start.
    const std::size_t n = 1000;
    std::vector<Instant> ts(n);
    std::vector<double> e(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        ts[i] = static_cast<Instant>(i);
        e[i] += 0.01 * static_cast<double>(i % 3);
    }
    e[850] = 100.0;
    SeriesFile f("p", ts, Matrix::Zero(static_cast<Eigen::Index>(n), 1), AnomalyWindowSet({{850, 860}}));
    const NabReport r = evaluate_test(ErrorSeries("p", "d", e), f, chronological_split(f), {30, 1, 0.99});
    EXPECT_NEAR(r.normalized_score, 100.0, 1e-9);
}
