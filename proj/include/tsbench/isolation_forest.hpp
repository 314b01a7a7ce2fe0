#pragma once

#include <cstdint>
#include <vector>

#include "tsbench/dataset.hpp"
#include "tsbench/error_series.hpp"

namespace tsbench {

struct IsolationForestConfig {
    std::size_t tree_count = 100;
    std::size_t subsample_size = 256;
    std::uint64_t seed = 0;
};

/// Leaf nodes have feature == -1 and record how many training rows reached them.
struct IsolationNode {
    std::int32_t feature = -1;
    double split = 0.0;
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint32_t size = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const IsolationNode&) const = default;
};

struct IsolationTree {
    std::vector<IsolationNode> nodes; // nodes[0] is the root

    /// Edges from the root to x's leaf, plus c(leaf size).
    double path_length(const double* x) const;
    std::size_t depth() const;

    bool operator==(const IsolationTree&) const = default;
};

struct IsolationForestModel {
    std::vector<IsolationTree> trees;
    /// Effective subsample size (clipped to the training-period length).
    std::size_t subsample_size = 0;
    std::size_t tree_count = 0;
    std::uint64_t seed = 0;
    std::size_t dims = 0;

    std::size_t depth_limit() const;
    double expected_path_length(const double* x) const;
    /// 2^(-E[h(x)] / c(subsample_size)), in (0, 1].
    double score(const double* x) const;

    bool operator==(const IsolationForestModel&) const = default;
};

double harmonic_number(std::size_t n);

/// Average unsuccessful-search path length in a binary search tree of n keys:
/// c(n) = 2 H(n-1) - 2 (n-1)/n for n > 2, c(2) = 1, c(0) = c(1) = 0.
double average_path_length(std::size_t n);

/// Smallest L with 2^L >= n.
std::size_t ceil_log2(std::size_t n);

/// Seed of tree `index`'s own generator.
std::uint64_t isolation_tree_seed(std::uint64_t forest_seed, std::size_t tree_index);

/// Builds each tree from its own generator seeded by isolation_tree_seed(). When the subsample
/// covers the whole training period no sampling draw is made; otherwise the subsample is a
/// partial Fisher-Yates shuffle of the training rows. At each node the split feature is drawn
/// uniformly among features that are not constant in the node, then the split value uniformly
/// in [min, max); rows with x < split go left. Nodes at the depth limit, with <= 1 row, or with
/// no non-constant feature become leaves. Trees are built depth-first, left child first.
IsolationForestModel fit_isolation_forest(const SeriesFile& file, const SplitView& view,
                                          const IsolationForestConfig& config);

ErrorSeries score_isolation_forest(const IsolationForestModel& model, const SeriesFile& file,
                                   std::string detector_id = "isolation_forest");

} // namespace tsbench
