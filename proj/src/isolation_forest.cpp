#include "tsbench/isolation_forest.hpp"

#include <cmath>
#include <numeric>

#include "tsbench/rng.hpp"

namespace tsbench {

double harmonic_number(std::size_t n)
{
    if (n < 4096) {
        double h = 0.0;
        for (std::size_t k = n; k >= 1; --k)
            h += 1.0 / static_cast<double>(k);
        return h;
    }
    const double x = static_cast<double>(n);
    return std::log(x) + 0.57721566490153286061 + 1.0 / (2.0 * x) - 1.0 / (12.0 * x * x);
}

double average_path_length(std::size_t n)
{
    if (n <= 1)
        return 0.0;
    if (n == 2)
        return 1.0;
    const double m = static_cast<double>(n);
    return 2.0 * harmonic_number(n - 1) - 2.0 * (m - 1.0) / m;
}

std::size_t ceil_log2(std::size_t n)
{
    std::size_t levels = 0;
    while ((std::size_t{1} << levels) < n)
        ++levels;
    return levels;
}

std::uint64_t isolation_tree_seed(std::uint64_t forest_seed, std::size_t tree_index)
{
    return splitmix64(forest_seed ^ splitmix64(0x1f0a3c5e7b9d2468ULL + tree_index));
}

double IsolationTree::path_length(const double* x) const
{
    std::size_t node = 0;
    double depth = 0.0;
    while (!nodes[node].is_leaf()) {
        const auto& n = nodes[node];
        node = x[n.feature] < n.split ? n.left : n.right;
        depth += 1.0;
    }
    return depth + average_path_length(nodes[node].size);
}

std::size_t IsolationTree::depth() const
{
    std::vector<std::size_t> level(nodes.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        deepest = std::max(deepest, level[i]);
        if (!nodes[i].is_leaf()) {
            level[nodes[i].left] = level[i] + 1;
            level[nodes[i].right] = level[i] + 1;
        }
    }
    return deepest;
}

std::size_t IsolationForestModel::depth_limit() const
{
    return ceil_log2(subsample_size);
}

double IsolationForestModel::expected_path_length(const double* x) const
{
    double total = 0.0;
    for (const auto& tree : trees)
        total += tree.path_length(x);
    return trees.empty() ? 0.0 : total / static_cast<double>(trees.size());
}

double IsolationForestModel::score(const double* x) const
{
    const double c = average_path_length(subsample_size);
    if (c <= 0.0)
        return 1.0;
    return std::exp2(-expected_path_length(x) / c);
}

namespace {

class TreeBuilder {
public:
    TreeBuilder(const Matrix& data, std::size_t depth_limit, Rng& rng)
        : data_(data), depth_limit_(depth_limit), rng_(rng)
    {
    }

    IsolationTree build(std::vector<std::size_t> rows)
    {
        tree_.nodes.clear();
        grow(rows, 0);
        return std::move(tree_);
    }

private:
    std::uint32_t grow(std::vector<std::size_t>& rows, std::size_t depth)
    {
        const auto index = static_cast<std::uint32_t>(tree_.nodes.size());
        tree_.nodes.push_back({-1, 0.0, 0, 0, static_cast<std::uint32_t>(rows.size())});
        if (depth >= depth_limit_ || rows.size() <= 1)
            return index;

        // Features with spread inside this node.
        std::vector<std::int32_t> candidates;
        std::vector<std::pair<double, double>> bounds;
        for (Eigen::Index f = 0; f < data_.cols(); ++f) {
            double lo = data_(static_cast<Eigen::Index>(rows[0]), f);
            double hi = lo;
            for (const auto r : rows) {
                const double v = data_(static_cast<Eigen::Index>(r), f);
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            if (hi > lo) {
                candidates.push_back(static_cast<std::int32_t>(f));
                bounds.emplace_back(lo, hi);
            }
        }
        if (candidates.empty())
            return index;

        const auto pick = static_cast<std::size_t>(rng_.below(candidates.size()));
        const std::int32_t feature = candidates[pick];
        const double split = rng_.uniform(bounds[pick].first, bounds[pick].second);

        std::vector<std::size_t> left, right;
        for (const auto r : rows)
            (data_(static_cast<Eigen::Index>(r), feature) < split ? left : right).push_back(r);
        rows.clear();
        rows.shrink_to_fit();

        const auto l = grow(left, depth + 1);
        const auto rt = grow(right, depth + 1);
        auto& node = tree_.nodes[index];
        node.feature = feature;
        node.split = split;
        node.left = l;
        node.right = rt;
        return index;
    }

    const Matrix& data_;
    std::size_t depth_limit_;
    Rng& rng_;
    IsolationTree tree_;
};

} // namespace

IsolationForestModel fit_isolation_forest(const SeriesFile& file, const SplitView& view,
                                          const IsolationForestConfig& config)
{
    if (config.tree_count == 0 || config.subsample_size == 0)
        throw ConfigError("isolation forest needs tree_count and subsample_size > 0");
    const IndexRange train = view.training_period();
    if (train.empty() || train.end > file.size())
        throw InputError("isolation forest: empty training period for " + file.id());

    IsolationForestModel model;
    model.subsample_size = std::min(config.subsample_size, train.size());
    model.tree_count = config.tree_count;
    model.seed = config.seed;
    model.dims = file.dims();
    model.trees.reserve(config.tree_count);

    std::vector<std::size_t> all(train.size());
    std::iota(all.begin(), all.end(), train.begin);

    for (std::size_t t = 0; t < config.tree_count; ++t) {
        Rng rng(isolation_tree_seed(config.seed, t));
        std::vector<std::size_t> sample;
        if (model.subsample_size >= all.size()) {
            sample = all;
        } else {
            std::vector<std::size_t> pool = all;
            for (std::size_t i = 0; i < model.subsample_size; ++i) {
                const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
                std::swap(pool[i], pool[j]);
            }
            sample.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(model.subsample_size));
        }
        TreeBuilder builder(file.values(), model.depth_limit(), rng);
        model.trees.push_back(builder.build(std::move(sample)));
    }
    return model;
}

ErrorSeries score_isolation_forest(const IsolationForestModel& model, const SeriesFile& file, std::string detector_id)
{
    if (file.dims() != model.dims)
        throw InputError("isolation forest: dimension mismatch for " + file.id());
    std::vector<double> scores(file.size());
    for (std::size_t i = 0; i < file.size(); ++i)
        scores[i] = model.score(file.values().row(static_cast<Eigen::Index>(i)).data());
    return ErrorSeries(file.id(), std::move(detector_id), std::move(scores));
}

} // namespace tsbench
