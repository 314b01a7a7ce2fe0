#include "tsbench/likelihood.hpp"

#include <cmath>
#include <limits>
#include <ostream>

namespace tsbench {

void LikelihoodParams::validate() const
{
    if (long_window < 2)
        throw ConfigError("long window must be >= 2");
    if (short_window < 1 || short_window >= long_window)
        throw ConfigError("short window must satisfy 1 <= short < long");
    if (!(threshold > 0.0 && threshold < 1.0))
        throw ConfigError("threshold must be in (0, 1)");
}

std::vector<std::optional<RollingStats>> rolling_stats(const ErrorSeries& errors, const LikelihoodParams& params,
                                                       IndexRange range)
{
    params.validate();
    if (range.end > errors.size())
        throw InputError("likelihood range beyond error series");

    const std::size_t W = params.long_window;
    const std::size_t Ws = params.short_window;
    const auto& s = errors.values();
    // First t whose trailing long window is fully defined.
    const std::size_t first = errors.warmup() + W - 1;

    std::vector<std::optional<RollingStats>> out(range.size());
    for (std::size_t t = std::max(range.begin, first); t < range.end; ++t) {
        const std::size_t lo = t + 1 - W;
        double sum = 0.0;
        for (std::size_t i = lo; i <= t; ++i)
            sum += s[i];
        const double mean = sum / static_cast<double>(W);
        double ss = 0.0;
        for (std::size_t i = lo; i <= t; ++i) {
            const double dev = s[i] - mean;
            ss += dev * dev;
        }
        const double sd = std::sqrt(ss / static_cast<double>(W - 1));
        double short_sum = 0.0;
        for (std::size_t i = t + 1 - Ws; i <= t; ++i)
            short_sum += s[i];
        out[t - range.begin] = RollingStats{mean, sd < kStdFloor ? kStdFloor : sd, short_sum / static_cast<double>(Ws)};
    }
    return out;
}

std::vector<std::optional<RollingStats>> rolling_stats(const ErrorSeries& errors, const LikelihoodParams& params)
{
    if (errors.size() < errors.warmup() + params.long_window)
        throw InputError("error series shorter than the long window");
    return rolling_stats(errors, params, IndexRange{0, errors.size()});
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double likelihood(const RollingStats& stats)
{
    return normal_cdf((stats.short_mean - stats.mean) / stats.stddev);
}

bool LikelihoodSeries::defined(std::size_t i) const
{
    return i < values_.size() && !std::isnan(values_[i]);
}

std::size_t LikelihoodSeries::undefined_count() const
{
    std::size_t n = 0;
    for (const double v : values_)
        n += std::isnan(v) ? 1 : 0;
    return n;
}

LikelihoodSeries compute_likelihood(const ErrorSeries& errors, const LikelihoodParams& params, IndexRange range)
{
    const auto stats = rolling_stats(errors, params, range);
    std::vector<double> values(stats.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < stats.size(); ++i)
        if (stats[i])
            values[i] = likelihood(*stats[i]);
    return LikelihoodSeries(std::move(values));
}

LikelihoodSeries compute_likelihood(const ErrorSeries& errors, const LikelihoodParams& params)
{
    return compute_likelihood(errors, params, IndexRange{0, errors.size()});
}

std::size_t DetectionSeries::count() const
{
    std::size_t n = 0;
    for (const bool f : flags)
        n += f ? 1 : 0;
    return n;
}

DetectionSeries detect(const LikelihoodSeries& likelihoods, double threshold)
{
    DetectionSeries out;
    out.flags.resize(likelihoods.size(), false);
    for (std::size_t i = 0; i < likelihoods.size(); ++i)
        out.flags[i] = likelihoods.defined(i) && likelihoods[i] > threshold;
    return out;
}

void write_likelihood_csv(std::ostream& out, const ErrorSeries& errors, const LikelihoodParams& params,
                          std::span<const Instant> timestamps, TimestampFormat format)
{
    const auto stats = rolling_stats(errors, params, IndexRange{0, errors.size()});
    out << "timestamp,mean,stddev,short_mean,likelihood\n";
    out.precision(17);
    for (std::size_t i = 0; i < stats.size(); ++i) {
        out << format_timestamp(timestamps[i], format);
        if (stats[i])
            out << ',' << stats[i]->mean << ',' << stats[i]->stddev << ',' << stats[i]->short_mean << ','
                << likelihood(*stats[i]);
        else
            out << ",,,,";
        out << '\n';
    }
}

} // namespace tsbench
