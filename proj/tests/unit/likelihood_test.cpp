#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tsbench/likelihood.hpp"
#include "tsbench/rng.hpp"

using namespace tsbench;

namespace {

ErrorSeries series(std::vector<double> v, std::size_t warmup = 0)
{
    return ErrorSeries("f", "d", std::move(v), warmup);
}

} // namespace

TEST(LikelihoodParams, Validation)
{
    EXPECT_NO_THROW((LikelihoodParams{3, 1, 0.5}.validate()));
    EXPECT_THROW((LikelihoodParams{1, 1, 0.5}.validate()), ConfigError);
    EXPECT_THROW((LikelihoodParams{5, 5, 0.5}.validate()), ConfigError);
    EXPECT_THROW((LikelihoodParams{5, 0, 0.5}.validate()), ConfigError);
    EXPECT_THROW((LikelihoodParams{5, 2, 1.0}.validate()), ConfigError);
}

TEST(RollingStats, ConstantSeries)
{
    const auto stats = rolling_stats(series(std::vector<double>(10, 2.5)), {4, 2, 0.9});
    for (std::size_t t = 3; t < 10; ++t) {
        ASSERT_TRUE(stats[t]);
        EXPECT_EQ(stats[t]->mean, 2.5);
        EXPECT_EQ(stats[t]->stddev, kStdFloor);
        EXPECT_EQ(stats[t]->short_mean, 2.5);
    }
    EXPECT_FALSE(stats[2]);
}

TEST(RollingStats, HandExample)
{
    const auto stats = rolling_stats(series({1, 2, 3, 4}), {3, 1, 0.9});
    ASSERT_TRUE(stats[3]);
    EXPECT_DOUBLE_EQ(stats[3]->mean, 3.0);
    EXPECT_DOUBLE_EQ(stats[3]->stddev, 1.0);
    EXPECT_DOUBLE_EQ(stats[3]->short_mean, 4.0); // W' = 1 gives s_t
}

TEST(RollingStats, TooShortThrows)
{
    EXPECT_THROW(rolling_stats(series({1, 2}), {3, 1, 0.9}), InputError);
    EXPECT_THROW(rolling_stats(series({0, 0, 1, 2}, 2), {3, 1, 0.9}), InputError);
}

TEST(RollingStats, RangeReadsHistoryBeforeIt)
{
    const ErrorSeries e = series({1, 2, 3, 4, 5, 6});
    const auto full = rolling_stats(e, {3, 2, 0.9});
    const auto part = rolling_stats(e, {3, 2, 0.9}, {4, 6});
    ASSERT_EQ(part.size(), 2u);
    EXPECT_EQ(part[0]->mean, full[4]->mean);
    EXPECT_EQ(part[1]->short_mean, full[5]->short_mean);
}

TEST(Likelihood, CdfValues)
{
    EXPECT_EQ(normal_cdf(0.0), 0.5);
    EXPECT_EQ(likelihood({1.0, 1.0, 1.0}), 0.5);
    EXPECT_NEAR(normal_cdf(1.6449), 0.95, 1e-3);
    EXPECT_NEAR(normal_cdf(-3.0), 0.00135, 1e-4);
    for (double z : {-3.0, -1.0, 0.0, 1.0, 1.6449, 3.0})
        EXPECT_NEAR(normal_cdf(z), oracle::simpson_normal_cdf(z), 1e-10) << z;
}

TEST(Likelihood, MonotoneInShortMean)
{
    double prev = -1.0;
    for (double m = -5.0; m <= 5.0; m += 0.25) {
        const double l = likelihood({0.0, 1.0, m});
        EXPECT_GT(l, prev);
        EXPECT_GE(l, 0.0);
        EXPECT_LE(l, 1.0);
        prev = l;
    }
}

TEST(Likelihood, WarmupCount)
{
    Rng rng(2);
    std::vector<double> v(50);
    for (auto& x : v)
        x = rng.uniform01();
    const auto l = compute_likelihood(series(v, 4), {10, 3, 0.9});
    EXPECT_EQ(l.undefined_count(), 4u + 9u);
    EXPECT_FALSE(l.defined(12));
    EXPECT_TRUE(l.defined(13));
}

TEST(Detect, StrictThreshold)
{
    const LikelihoodSeries l({0.5, 0.9991, 0.9, 0.999, std::nan("")});
    EXPECT_EQ(detect(l, 0.9990).flags, (std::vector<bool>{false, true, false, false, false}));
    EXPECT_EQ(detect(LikelihoodSeries({std::nan(""), std::nan("")}), 0.5).count(), 0u);
}

TEST(Detect, RaisingThresholdNeverAddsDetections)
{
    Rng rng(3);
    std::vector<double> v(300);
    for (auto& x : v)
        x = std::abs(rng.normal());
    const auto l = compute_likelihood(series(v), {30, 5, 0.9});
    DetectionSeries prev = detect(l, 0.5);
    for (double th = 0.55; th < 1.0; th += 0.05) {
        const DetectionSeries cur = detect(l, th);
        for (std::size_t i = 0; i < cur.size(); ++i)
            if (cur.flags[i])
                EXPECT_TRUE(prev.flags[i]);
        prev = cur;
    }
}

TEST(Detect, AffineInvariance)
{
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> v(200), w(200);
        for (auto& x : v)
            x = 1.0 + std::abs(rng.normal());
        const double a = 0.5 + 3.0 * rng.uniform01(), b = 5.0 * rng.uniform01();
        for (std::size_t i = 0; i < v.size(); ++i)
            w[i] = a * v[i] + b;
        const LikelihoodParams p{20, 4, 0.95};
        EXPECT_EQ(detect(compute_likelihood(series(v), p), p.threshold),
                  detect(compute_likelihood(series(w), p), p.threshold));
    }
}

TEST(Likelihood, CsvDump)
{
    std::ostringstream out;
    write_likelihood_csv(out, series({1, 2, 3, 4}), {3, 1, 0.9}, std::vector<Instant>{1, 2, 3, 4}, TimestampFormat::epoch);
    const std::string text = out.str();
    EXPECT_EQ(text.substr(0, text.find('\n')), "timestamp,mean,stddev,short_mean,likelihood");
    EXPECT_NE(text.find("\n1,,,,\n"), std::string::npos);
    EXPECT_NE(text.find("\n3,2,1,3,"), std::string::npos);
}
