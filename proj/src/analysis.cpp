#include "tsbench/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <set>
#include <stdexcept>

#include "tsbench/csv.hpp"

namespace tsbench {

// ---------------------------------------------------------------------------
// ScoreMatrix

std::vector<std::string> ScoreMatrix::datasets() const
{
    std::vector<std::string> out;
    for (const auto& r : rows)
        if (std::find(out.begin(), out.end(), r.dataset) == out.end())
            out.push_back(r.dataset);
    return out;
}

ScoreMatrix ScoreMatrix::restricted_to(std::string_view dataset) const
{
    ScoreMatrix out{detectors, {}};
    for (const auto& r : rows)
        if (r.dataset == dataset)
            out.rows.push_back(r);
    return out;
}

ScoreMatrix ScoreMatrix::without_detector(std::string_view detector) const
{
    const auto it = std::find(detectors.begin(), detectors.end(), detector);
    if (it == detectors.end())
        return *this;
    const auto col = static_cast<std::size_t>(it - detectors.begin());
    ScoreMatrix out = *this;
    out.detectors.erase(out.detectors.begin() + static_cast<std::ptrdiff_t>(col));
    for (auto& r : out.rows)
        r.scores.erase(r.scores.begin() + static_cast<std::ptrdiff_t>(col));
    return out;
}

void ScoreMatrix::validate() const
{
    std::set<std::string> names(detectors.begin(), detectors.end());
    if (names.size() != detectors.size())
        throw InputError("score matrix: duplicate detector column");
    std::set<std::pair<std::string, std::string>> keys;
    for (const auto& r : rows) {
        if (r.scores.size() != detectors.size())
            throw InputError("score matrix: row " + r.dataset + "/" + r.subgroup + " has the wrong cell count");
        if (!keys.insert({r.dataset, r.subgroup}).second)
            throw InputError("score matrix: duplicate row " + r.dataset + "/" + r.subgroup);
    }
}

ScoreMatrix parse_score_matrix(std::string_view csv_text)
{
    const CsvTable table = parse_csv(csv_text);
    if (table.header.size() < 4 || table.header[0] != "dataset" || table.header[1] != "subgroup" ||
        table.header[2] != "gt")
        throw InputError("score matrix header must start with dataset,subgroup,gt");

    ScoreMatrix m;
    m.detectors.assign(table.header.begin() + 3, table.header.end());
    for (const auto& fields : table.rows) {
        if (fields.size() != table.header.size())
            throw InputError("score matrix: ragged row");
        ScoreRow row{fields[0], fields[1], 0, {}};
        const auto& gt = fields[2];
        if (std::from_chars(gt.data(), gt.data() + gt.size(), row.gt).ec != std::errc{})
            throw InputError("score matrix: bad gt for " + row.subgroup);
        for (std::size_t c = 3; c < fields.size(); ++c) {
            const auto& cell = fields[c];
            if (cell.empty()) {
                row.scores.emplace_back();
                continue;
            }
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
                throw InputError("score matrix: bad score '" + cell + "' for " + row.subgroup);
            row.scores.emplace_back(v);
        }
        m.rows.push_back(std::move(row));
    }
    m.validate();
    return m;
}

ScoreMatrix read_score_matrix(const std::filesystem::path& path)
{
    return parse_score_matrix(read_text_file(path));
}

void write_score_matrix(std::ostream& out, const ScoreMatrix& matrix)
{
    auto field = [](const std::string& s) {
        return s.find_first_of(",\"") == std::string::npos ? s : "\"" + s + "\"";
    };
    out << "dataset,subgroup,gt";
    for (const auto& d : matrix.detectors)
        out << ',' << field(d);
    out << '\n';
    char buf[32];
    for (const auto& r : matrix.rows) {
        out << field(r.dataset) << ',' << field(r.subgroup) << ',' << r.gt;
        for (const auto& s : r.scores) {
            out << ',';
            if (s) {
                const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *s);
                out.write(buf, ptr - buf);
            }
        }
        out << '\n';
    }
}

// ---------------------------------------------------------------------------
// Ranking

std::string to_string(OutcomeKind kind)
{
    switch (kind) {
    case OutcomeKind::ranked:
        return "ranked";
    case OutcomeKind::all_tie_rank1:
        return "all_tie_rank1";
    case OutcomeKind::no_detection:
        return "no_detection";
    }
    return "unknown";
}

long long rounded_hundredths(double score)
{
    return std::llround(score * 100.0);
}

std::vector<int> dense_rank(std::span<const double> scores)
{
    std::vector<long long> keys;
    keys.reserve(scores.size());
    for (const double s : scores)
        keys.push_back(rounded_hundredths(s));
    std::vector<long long> distinct = keys;
    std::sort(distinct.begin(), distinct.end(), std::greater<>());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<int> ranks;
    ranks.reserve(keys.size());
    for (const auto k : keys) {
        const auto pos = std::lower_bound(distinct.begin(), distinct.end(), k, std::greater<>()) - distinct.begin();
        ranks.push_back(static_cast<int>(pos) + 1);
    }
    return ranks;
}

SubgroupOutcome rank_subgroup(std::span<const std::optional<double>> scores, std::size_t gt)
{
    std::vector<double> present;
    for (const auto& s : scores)
        if (s)
            present.push_back(*s);
    if (present.size() < 2)
        throw std::invalid_argument("ranking needs at least two scored detectors");

    SubgroupOutcome out;
    out.ranks.resize(scores.size());
    const bool all_zero =
        std::all_of(present.begin(), present.end(), [](double s) { return rounded_hundredths(s) == 0; });
    if (all_zero && gt == 0) {
        out.kind = OutcomeKind::all_tie_rank1;
        for (std::size_t i = 0; i < scores.size(); ++i)
            if (scores[i])
                out.ranks[i] = 1;
        return out;
    }
    if (all_zero) {
        out.kind = OutcomeKind::no_detection;
        return out;
    }
    const auto ranks = dense_rank(present);
    std::size_t k = 0;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i])
            out.ranks[i] = ranks[k++];
    return out;
}

std::size_t DetectorTally::rank(int r) const
{
    return r >= 1 && static_cast<std::size_t>(r) <= rank_counts.size() ? rank_counts[static_cast<std::size_t>(r - 1)] : 0;
}

std::size_t DetectorTally::total() const
{
    std::size_t n = ties + no_detection + absent;
    for (const auto c : rank_counts)
        n += c;
    return n;
}

int RankBoard::max_rank() const
{
    std::size_t m = 0;
    for (const auto& t : tallies)
        m = std::max(m, t.rank_counts.size());
    return static_cast<int>(m);
}

RankBoard build_board(const ScoreMatrix& matrix)
{
    matrix.validate();
    RankBoard board;
    board.detectors = matrix.detectors;
    board.tallies.resize(matrix.detectors.size());
    for (auto& t : board.tallies)
        t.rank_counts.assign(matrix.detectors.size(), 0);

    for (const auto& row : matrix.rows) {
        const auto present = std::count_if(row.scores.begin(), row.scores.end(), [](const auto& s) { return s.has_value(); });
        if (present < 2) {
            ++board.skipped_rows;
            continue;
        }
        auto outcome = rank_subgroup(row.scores, row.gt);
        for (std::size_t d = 0; d < row.scores.size(); ++d) {
            auto& tally = board.tallies[d];
            if (!row.scores[d]) {
                ++tally.absent;
                continue;
            }
            switch (outcome.kind) {
            case OutcomeKind::all_tie_rank1:
                ++tally.ties;
                break;
            case OutcomeKind::no_detection:
                ++tally.no_detection;
                break;
            case OutcomeKind::ranked:
                ++tally.rank_counts[static_cast<std::size_t>(*outcome.ranks[d] - 1)];
                break;
            }
        }
        board.tie_subgroups += outcome.kind == OutcomeKind::all_tie_rank1 ? 1 : 0;
        board.no_detection_subgroups += outcome.kind == OutcomeKind::no_detection ? 1 : 0;
        board.entries.push_back({row.dataset, row.subgroup, std::move(outcome)});
    }
    return board;
}

std::map<std::string, RankBoard> build_dataset_boards(const ScoreMatrix& matrix)
{
    std::map<std::string, RankBoard> out;
    for (const auto& name : matrix.datasets())
        out.emplace(name, build_board(matrix.restricted_to(name)));
    return out;
}

void write_board_csv(std::ostream& out, const RankBoard& board)
{
    const int ranks = board.max_rank();
    out << "detector";
    for (int r = 1; r <= ranks; ++r)
        out << ",rank_" << r;
    out << ",ties,no_detection,absent\n";
    for (std::size_t d = 0; d < board.detectors.size(); ++d) {
        const auto& t = board.tallies[d];
        out << board.detectors[d];
        for (int r = 1; r <= ranks; ++r)
            out << ',' << t.rank(r);
        out << ',' << t.ties << ',' << t.no_detection << ',' << t.absent << '\n';
    }
}

// ---------------------------------------------------------------------------
// Stability

StabilityStats stability(std::span<const double> scores)
{
    if (scores.size() < 2)
        throw std::invalid_argument("stability needs at least two scores");
    StabilityStats s;
    s.total_count = scores.size();
    s.score_min = *std::min_element(scores.begin(), scores.end());
    s.score_max = *std::max_element(scores.begin(), scores.end());
    double mean = 0.0;
    for (const double v : scores)
        mean += v;
    mean /= static_cast<double>(scores.size());
    double ss = 0.0;
    for (const double v : scores) {
        ss += (v - mean) * (v - mean);
        s.negative_count += v < 0.0 ? 1 : 0;
    }
    s.std_dev = std::sqrt(ss / static_cast<double>(scores.size() - 1));
    return s;
}

StabilityStats stability(const ScoreMatrix& matrix)
{
    std::vector<double> cells;
    for (const auto& r : matrix.rows)
        for (const auto& s : r.scores)
            if (s)
                cells.push_back(*s);
    return stability(cells);
}

// ---------------------------------------------------------------------------
// Drift

CentroidDiagnostics centroid_diagnostics(const SeriesFile& file, const SplitView& view, bool log_scale)
{
    const IndexRange train = view.training_period();
    if (train.empty() || train.end > file.size())
        throw InputError("centroid diagnostics: empty training period for " + file.id());

    const Matrix& x = file.values();
    const auto d = x.cols();
    Vector sum = Vector::Zero(d);
    Vector carry = Vector::Zero(d);
    for (std::size_t t = train.begin; t < train.end; ++t) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double y = x(static_cast<Eigen::Index>(t), j) - carry(j);
            const double next = sum(j) + y;
            carry(j) = (next - sum(j)) - y;
            sum(j) = next;
        }
    }

    CentroidDiagnostics diag;
    diag.centroid = sum / static_cast<double>(train.size());
    diag.view = view;
    diag.split_boundary = view.test.begin;
    diag.log_scaled = log_scale;
    diag.timestamps = file.timestamps();
    diag.distances.resize(file.size());
    diag.in_anomaly_window.resize(file.size());
    for (std::size_t t = 0; t < file.size(); ++t) {
        const double dist = (x.row(static_cast<Eigen::Index>(t)).transpose() - diag.centroid).norm();
        diag.distances[t] = log_scale ? std::log1p(dist) : dist;
        diag.in_anomaly_window[t] = file.labels().contains(file.timestamps()[t]);
    }
    return diag;
}

DriftSummary drift_summary(const CentroidDiagnostics& diag)
{
    const IndexRange train = diag.view.training_period();
    const IndexRange test = diag.view.test;
    if (train.empty() || test.empty() || test.end > diag.distances.size())
        throw InputError("drift summary needs non-empty training and test segments");
    auto mean_over = [&](IndexRange r) {
        double s = 0.0;
        for (std::size_t i = r.begin; i < r.end; ++i)
            s += diag.distances[i];
        return s / static_cast<double>(r.size());
    };
    DriftSummary out;
    out.train_mean_distance = mean_over(train);
    out.test_mean_distance = mean_over(test);
    out.shift_ratio = out.test_mean_distance / std::max(out.train_mean_distance, kStdFloor);
    return out;
}

void write_diagnostics_csv(std::ostream& out, const CentroidDiagnostics& diag, TimestampFormat format)
{
    out << "timestamp,distance,segment,in_anomaly_window\n";
    char buf[32];
    for (std::size_t t = 0; t < diag.distances.size(); ++t) {
        const char* segment = diag.view.test.contains(t) ? "test" : diag.view.validation.contains(t) ? "validation" : "train";
        const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, diag.distances[t]);
        out << format_timestamp(diag.timestamps[t], format) << ',';
        out.write(buf, ptr - buf);
        out << ',' << segment << ',' << (diag.in_anomaly_window[t] ? 1 : 0) << '\n';
    }
}

} // namespace tsbench
