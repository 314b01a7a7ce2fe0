#include "tsbench/pca.hpp"

#include <algorithm>
#include <cmath>

#include "tsbench/rng.hpp"

namespace tsbench {

namespace {

constexpr double kEigenTolerance = 1e-6;

struct EigenPairs {
    Vector values;  // descending
    Matrix vectors; // one eigenvector per row
};

EigenPairs sorted_pairs(const Vector& values, const Eigen::MatrixXd& vectors_by_column)
{
    std::vector<Eigen::Index> order(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i)
        order[static_cast<std::size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return values(a) > values(b); });

    EigenPairs out;
    out.values.resize(values.size());
    out.vectors.resize(values.size(), vectors_by_column.rows());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto src = order[i];
        const auto dst = static_cast<Eigen::Index>(i);
        out.values(dst) = std::max(values(src), 0.0);
        out.vectors.row(dst) = vectors_by_column.col(src).transpose();
    }
    return out;
}

EigenPairs exact_eigen(const Matrix& centered)
{
    const double denom = static_cast<double>(std::max<Eigen::Index>(centered.rows() - 1, 1));
    const Eigen::MatrixXd cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success)
        throw InputError("pca: eigendecomposition failed");
    return sorted_pairs(solver.eigenvalues(), solver.eigenvectors());
}

// Randomized subspace iteration on C = X^T X / (n-1) without forming C.
EigenPairs randomized_eigen(const Matrix& centered, std::size_t rank, std::uint64_t seed)
{
    const double denom = static_cast<double>(std::max<Eigen::Index>(centered.rows() - 1, 1));
    const auto d = centered.cols();
    const auto width = static_cast<Eigen::Index>(std::min<std::size_t>(rank + 10, static_cast<std::size_t>(d)));

    Rng rng(seed);
    Eigen::MatrixXd omega(d, width);
    for (Eigen::Index j = 0; j < width; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            omega(i, j) = rng.normal();

    auto apply_cov = [&](const Eigen::MatrixXd& v) -> Eigen::MatrixXd {
        return centered.transpose() * (centered * v) / denom;
    };
    auto orthonormal = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    };

    Eigen::MatrixXd q = orthonormal(apply_cov(omega));
    for (int iter = 0; iter < 6; ++iter)
        q = orthonormal(apply_cov(q));

    const Eigen::MatrixXd small = q.transpose() * apply_cov(q);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(small);
    if (solver.info() != Eigen::Success)
        throw InputError("pca: eigendecomposition failed");
    return sorted_pairs(solver.eigenvalues(), q * solver.eigenvectors());
}

std::size_t components_needed(const Vector& values, double total, double retained)
{
    const double largest = values.size() > 0 ? values(0) : 0.0;
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) <= kEigenTolerance * largest)
            break;
        cumulative += values(i);
        if (cumulative >= retained * total * (1.0 - 1e-12))
            return static_cast<std::size_t>(i + 1);
    }
    return 0;
}

} // namespace

Vector PcaModel::reconstruct(const Vector& x) const
{
    const Vector centered = x - mean;
    return mean + components.transpose() * (components * centered);
}

PcaModel fit_pca(const SeriesFile& file, const SplitView& view, const PcaOptions& options)
{
    if (!(options.retained_variance > 0.0 && options.retained_variance <= 1.0))
        throw ConfigError("pca retained variance must be in (0, 1]");
    const IndexRange train = view.training_period();
    if (train.size() < 2 || train.end > file.size())
        throw InputError("pca needs at least 2 training rows for " + file.id());

    const auto rows = file.values().middleRows(static_cast<Eigen::Index>(train.begin), static_cast<Eigen::Index>(train.size()));
    PcaModel model;
    model.mean = rows.colwise().mean().transpose();
    const Matrix centered = rows.rowwise() - model.mean.transpose();
    const double denom = static_cast<double>(centered.rows() - 1);
    const double total = centered.squaredNorm() / denom;
    const auto d = static_cast<std::size_t>(centered.cols());

    if (total <= 0.0) {
        model.components.resize(0, centered.cols());
        model.retained_variance_ratio = 1.0;
        return model;
    }

    EigenPairs pairs;
    std::size_t k = 0;
    if (d <= options.exact_dimension_limit) {
        pairs = exact_eigen(centered);
        k = components_needed(pairs.values, total, options.retained_variance);
        if (k == 0)
            k = static_cast<std::size_t>(std::count_if(pairs.values.begin(), pairs.values.end(),
                                                       [&](double v) { return v > kEigenTolerance * pairs.values(0); }));
    } else {
        const std::size_t max_rank = std::min(d, static_cast<std::size_t>(centered.rows()));
        for (std::size_t rank = std::min<std::size_t>(32, max_rank);; rank = std::min(rank * 2, max_rank)) {
            pairs = randomized_eigen(centered, rank, options.seed);
            k = components_needed(pairs.values, total, options.retained_variance);
            if (k > 0 || rank == max_rank)
                break;
        }
        if (k == 0)
            k = static_cast<std::size_t>(pairs.values.size());
    }

    model.components = pairs.vectors.topRows(static_cast<Eigen::Index>(k));
    for (Eigen::Index i = 0; i < model.components.rows(); ++i) {
        Eigen::Index arg = 0;
        model.components.row(i).cwiseAbs().maxCoeff(&arg);
        if (model.components(i, arg) < 0.0)
            model.components.row(i) *= -1.0;
    }
    model.retained_variance_ratio = std::min(1.0, pairs.values.head(static_cast<Eigen::Index>(k)).sum() / total);
    return model;
}

ErrorSeries pca_error(const PcaModel& model, const SeriesFile& file, std::string detector_id)
{
    if (static_cast<std::size_t>(model.mean.size()) != file.dims())
        throw InputError("pca: dimension mismatch for " + file.id());
    const Matrix centered = file.values().rowwise() - model.mean.transpose();
    const Matrix residual = centered - (centered * model.components.transpose()) * model.components;
    std::vector<double> out(file.size());
    const auto d = static_cast<double>(file.dims());
    for (std::size_t i = 0; i < file.size(); ++i)
        out[i] = residual.row(static_cast<Eigen::Index>(i)).squaredNorm() / d;
    return ErrorSeries(file.id(), std::move(detector_id), std::move(out));
}

} // namespace tsbench
