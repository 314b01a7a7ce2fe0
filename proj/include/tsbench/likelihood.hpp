#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "tsbench/error_series.hpp"

namespace tsbench {

struct LikelihoodParams {
    std::size_t long_window = 0;
    std::size_t short_window = 0;
    double threshold = 0.0;

    /// Requires long_window >= 2, 1 <= short_window < long_window, threshold in (0, 1).
    void validate() const;
    bool operator==(const LikelihoodParams&) const = default;
};

struct RollingStats {
    double mean = 0.0;       // over the last long_window errors, ending at t
    double stddev = 0.0;     // sample std of the same window, floored at kStdFloor
    double short_mean = 0.0; // over the last short_window errors, ending at t
};

/// Stats for every t in `range`; nullopt until long_window defined errors end at t.
/// Reads errors before range.begin as history and never reads at or beyond range.end.
std::vector<std::optional<RollingStats>> rolling_stats(const ErrorSeries& errors, const LikelihoodParams& params,
                                                       IndexRange range);
/// Whole-series form. Throws InputError when fewer than long_window entries are defined.
std::vector<std::optional<RollingStats>> rolling_stats(const ErrorSeries& errors, const LikelihoodParams& params);

/// Standard normal CDF via erfc.
double normal_cdf(double z);

/// Phi((short_mean - mean) / stddev), i.e. one minus the Gaussian tail probability.
double likelihood(const RollingStats& stats);

/// L_t for each index of the range it was computed over; NaN where undefined.
class LikelihoodSeries {
public:
    LikelihoodSeries() = default;
    explicit LikelihoodSeries(std::vector<double> values) : values_(std::move(values)) {}

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    bool defined(std::size_t i) const;
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t undefined_count() const;

private:
    std::vector<double> values_;
};

LikelihoodSeries compute_likelihood(const ErrorSeries& errors, const LikelihoodParams& params, IndexRange range);
LikelihoodSeries compute_likelihood(const ErrorSeries& errors, const LikelihoodParams& params);

struct DetectionSeries {
    std::vector<bool> flags;

    std::size_t size() const { return flags.size(); }
    std::size_t count() const;
    bool operator==(const DetectionSeries&) const = default;
};

/// flag_t = L_t defined and L_t > threshold (strict).
DetectionSeries detect(const LikelihoodSeries& likelihoods, double threshold);

/// `timestamp,mean,stddev,short_mean,likelihood`, empty cells during warm-up.
void write_likelihood_csv(std::ostream& out, const ErrorSeries& errors, const LikelihoodParams& params,
                          std::span<const Instant> timestamps, TimestampFormat format);

} // namespace tsbench
