#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "tsbench/isolation_forest.hpp"

using namespace tsbench;

namespace {

SeriesFile from_rows(const std::vector<std::vector<double>>& rows)
{
    Matrix x(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    std::vector<Instant> ts(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ts[i] = static_cast<Instant>(i);
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return SeriesFile("rows", ts, x);
}

/// Whole series used as the training period.
SplitView all_training(std::size_t n)
{
    return {{0, n - 1}, {n - 1, n}, {n, n}};
}

} // namespace

TEST(PathLength, ClosedForms)
{
    EXPECT_EQ(average_path_length(0), 0.0);
    EXPECT_EQ(average_path_length(1), 0.0);
    EXPECT_EQ(average_path_length(2), 1.0);
    EXPECT_NEAR(average_path_length(3), 5.0 / 3.0, 1e-15);
    EXPECT_NEAR(average_path_length(256), oracle::path_length_normalizer(256), 1e-12);
    EXPECT_NEAR(harmonic_number(4), 25.0 / 12.0, 1e-15);
    // Asymptotic branch agrees with the exact sum near the switch-over.
    double h = 0.0;
    for (int k = 1; k <= 5000; ++k)
        h += 1.0 / k;
    EXPECT_NEAR(harmonic_number(5000), h, 1e-10);
    EXPECT_EQ(ceil_log2(1), 0u);
    EXPECT_EQ(ceil_log2(256), 8u);
    EXPECT_EQ(ceil_log2(257), 9u);
}

TEST(IsolationForest, IdenticalRowsScoreOneHalf)
{
    const std::vector<std::vector<double>> rows(300, std::vector<double>{1.0, -2.0});
    const SeriesFile f = from_rows(rows);
    const auto model = fit_isolation_forest(f, all_training(f.size()), {20, 256, 3});
    for (const auto& t : model.trees)
        EXPECT_EQ(t.nodes.size(), 1u);
    const ErrorSeries s = score_isolation_forest(model, f);
    for (std::size_t i = 0; i < f.size(); ++i)
        EXPECT_DOUBLE_EQ(s[i], 0.5);
}

TEST(IsolationForest, DeterministicAndDepthBounded)
{
    Rng rng(12);
    const SeriesFile f = fixture::gaussian_series(rng, 1000, 3);
    const SplitView v = chronological_split(f);
    const auto a = fit_isolation_forest(f, v, {30, 64, 99});
    const auto b = fit_isolation_forest(f, v, {30, 64, 99});
    EXPECT_EQ(a, b);
    EXPECT_NE(a, fit_isolation_forest(f, v, {30, 64, 100}));
    EXPECT_EQ(a.trees.size(), 30u);
    for (const auto& t : a.trees)
        EXPECT_LE(t.depth(), 6u);
    const ErrorSeries s = score_isolation_forest(a, f);
    for (double x : s.values()) {
        EXPECT_GT(x, 0.0);
        EXPECT_LE(x, 1.0);
    }
}

TEST(IsolationForest, SubsampleClippedToTrainingPeriod)
{
    Rng rng(1);
    const SeriesFile f = fixture::gaussian_series(rng, 50, 2);
    const auto m = fit_isolation_forest(f, chronological_split(f), {5, 256, 1});
    EXPECT_EQ(m.subsample_size, 35u);
    EXPECT_EQ(m.depth_limit(), 6u);
}

TEST(IsolationForest, DeeperPathMeansLowerScore)
{
    Rng rng(5);
    const SeriesFile f = fixture::gaussian_series(rng, 400, 2);
    const auto m = fit_isolation_forest(f, chronological_split(f), {50, 128, 4});
    for (int k = 0; k < 200; ++k) {
        const double a[2] = {rng.normal() * 2, rng.normal() * 2};
        const double b[2] = {rng.normal() * 2, rng.normal() * 2};
        const double ha = m.expected_path_length(a), hb = m.expected_path_length(b);
        if (ha > hb)
            EXPECT_LT(m.score(a), m.score(b));
        else if (ha < hb)
            EXPECT_GT(m.score(a), m.score(b));
    }
}

TEST(IsolationForest, MatchesRecursivePartitionOracle)
{
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 8 + rng.below(57);
        const std::size_t d = 1 + rng.below(3);
        std::vector<std::vector<double>> rows(n, std::vector<double>(d));
        for (auto& r : rows)
            for (auto& v : r)
                v = std::round(rng.normal() * 4.0) / 2.0; // coarse grid, so ties and constant features occur
        const SeriesFile f = from_rows(rows);
        const std::uint64_t seed = rng.next();
        const auto model = fit_isolation_forest(f, all_training(n), {1, n, seed});
        std::vector<std::vector<double>> queries = rows;
        for (int q = 0; q < 10; ++q) {
            std::vector<double> extra(d);
            for (auto& v : extra)
                v = rng.normal() * 5.0;
            queries.push_back(extra);
        }
        const auto expected = oracle::single_tree_scores(rows, queries, seed);
        for (std::size_t q = 0; q < queries.size(); ++q)
            EXPECT_EQ(model.score(queries[q].data()), expected[q]) << "trial " << trial << " query " << q;
    }
}

TEST(IsolationForest, TestRowsDoNotAffectFit)
{
    Rng rng(8);
    const SeriesFile f = fixture::gaussian_series(rng, 300, 3);
    const SplitView v = chronological_split(f);
    Matrix x = f.values();
    x.bottomRows(static_cast<Eigen::Index>(v.test.size())).setConstant(1e9);
    EXPECT_EQ(fit_isolation_forest(f, v, {10, 64, 2}), fit_isolation_forest(f.with_values(x), v, {10, 64, 2}));
}

TEST(IsolationForest, DimensionMismatchThrows)
{
    Rng rng(8);
    const SeriesFile f = fixture::gaussian_series(rng, 100, 3);
    const auto m = fit_isolation_forest(f, chronological_split(f), {2, 16, 2});
    EXPECT_THROW(score_isolation_forest(m, fixture::gaussian_series(rng, 10, 2)), InputError);
    EXPECT_THROW(fit_isolation_forest(f, chronological_split(f), {0, 16, 2}), ConfigError);
}
