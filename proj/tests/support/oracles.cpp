#include "oracles.hpp"

#include <cmath>
#include <functional>

#include "tsbench/isolation_forest.hpp"
#include "tsbench/rng.hpp"

namespace tsbench::oracle {

double simpson_normal_cdf(double z)
{
    // Integrate the density from -12 (mass below is < 1e-32) to z.
    const double lo = -12.0;
    if (z <= lo)
        return 0.0;
    const int n = 20000;
    const double h = (z - lo) / n;
    auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); };
    double sum = pdf(lo) + pdf(z);
    for (int i = 1; i < n; ++i)
        sum += (i % 2 ? 4.0 : 2.0) * pdf(lo + i * h);
    return sum * h / 3.0;
}

double path_length_normalizer(std::size_t n)
{
    if (n <= 1)
        return 0.0;
    if (n == 2)
        return 1.0;
    // Smallest terms first.
    double h = 0.0;
    for (std::size_t k = n - 1; k >= 1; --k)
        h += 1.0 / static_cast<double>(k);
    const double m = static_cast<double>(n);
    return 2.0 * h - 2.0 * (m - 1.0) / m;
}

std::vector<double> single_tree_scores(const std::vector<std::vector<double>>& train,
                                       const std::vector<std::vector<double>>& queries, std::uint64_t forest_seed)
{
    const std::size_t n = train.size();
    const std::size_t dims = train.front().size();
    std::size_t limit = 0;
    while ((std::size_t{1} << limit) < n)
        ++limit;

    Rng rng(isolation_tree_seed(forest_seed, 0));
    std::vector<double> depth(queries.size(), 0.0);

    std::function<void(const std::vector<std::size_t>&, const std::vector<std::size_t>&, std::size_t)> partition =
        [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& qs, std::size_t level) {
            auto settle = [&] {
                for (auto q : qs)
                    depth[q] = static_cast<double>(level) + path_length_normalizer(rows.size());
            };
            if (level >= limit || rows.size() <= 1)
                return settle();
            std::vector<std::size_t> features;
            std::vector<double> mins, maxs;
            for (std::size_t f = 0; f < dims; ++f) {
                double lo = INFINITY, hi = -INFINITY;
                for (auto r : rows) {
                    lo = std::fmin(lo, train[r][f]);
                    hi = std::fmax(hi, train[r][f]);
                }
                if (lo < hi) {
                    features.push_back(f);
                    mins.push_back(lo);
                    maxs.push_back(hi);
                }
            }
            if (features.empty())
                return settle();
            const auto k = rng.below(features.size());
            const double cut = rng.uniform(mins[k], maxs[k]);
            const std::size_t f = features[k];
            std::vector<std::size_t> lr, rr, lq, rq;
            for (auto r : rows)
                (train[r][f] < cut ? lr : rr).push_back(r);
            for (auto q : qs)
                (queries[q][f] < cut ? lq : rq).push_back(q);
            partition(lr, lq, level + 1);
            partition(rr, rq, level + 1);
        };

    std::vector<std::size_t> rows(n), qs(queries.size());
    for (std::size_t i = 0; i < n; ++i)
        rows[i] = i;
    for (std::size_t i = 0; i < qs.size(); ++i)
        qs[i] = i;
    partition(rows, qs, 0);

    std::vector<double> scores;
    const double c = path_length_normalizer(n);
    for (const double h : depth)
        scores.push_back(std::exp2(-h / c));
    return scores;
}

} // namespace tsbench::oracle
