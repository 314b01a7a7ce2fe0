#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tsbench/dataset.hpp"

namespace tsbench {

// ---------------------------------------------------------------------------
// Score matrix and ranking board

struct ScoreRow {
    std::string dataset;
    std::string subgroup;
    /// Ground-truth anomaly windows in the subgroup's test split.
    std::size_t gt = 0;
    /// Aligned with ScoreMatrix::detectors; nullopt marks an absent cell.
    std::vector<std::optional<double>> scores;
};

struct ScoreMatrix {
    std::vector<std::string> detectors;
    std::vector<ScoreRow> rows;

    std::vector<std::string> datasets() const; // in first-appearance order
    ScoreMatrix restricted_to(std::string_view dataset) const;
    ScoreMatrix without_detector(std::string_view detector) const;
    void validate() const;
};

/// CSV with header `dataset,subgroup,gt,<detector>...`; empty cells are absent.
ScoreMatrix parse_score_matrix(std::string_view csv_text);
ScoreMatrix read_score_matrix(const std::filesystem::path& path);
void write_score_matrix(std::ostream& out, const ScoreMatrix& matrix);

enum class OutcomeKind { ranked, all_tie_rank1, no_detection };
std::string to_string(OutcomeKind kind);

struct SubgroupOutcome {
    OutcomeKind kind = OutcomeKind::ranked;
    /// Aligned with the input scores; nullopt for absent cells and for the no-detection outcome.
    std::vector<std::optional<int>> ranks;
};

/// Scores compared after rounding to two decimals, the reporting precision.
long long rounded_hundredths(double score);

/// Dense ranks by descending score: [10, 10, 3, -2] -> [1, 1, 2, 3].
std::vector<int> dense_rank(std::span<const double> scores);

/// gt == 0 and every score 0.00 -> all_tie_rank1 (every detector rank 1);
/// gt > 0 and every score 0.00 -> no_detection; otherwise dense ranking of the present cells.
/// Throws std::invalid_argument with fewer than two present scores.
SubgroupOutcome rank_subgroup(std::span<const std::optional<double>> scores, std::size_t gt);

struct DetectorTally {
    std::vector<std::size_t> rank_counts; // rank_counts[r-1] = subgroups ranked r (general case only)
    std::size_t ties = 0;                 // all_tie_rank1 subgroups
    std::size_t no_detection = 0;
    std::size_t absent = 0;

    std::size_t rank(int r) const;
    std::size_t total() const;
};

struct BoardEntry {
    std::string dataset;
    std::string subgroup;
    SubgroupOutcome outcome;
};

struct RankBoard {
    std::vector<std::string> detectors;
    std::vector<BoardEntry> entries;
    std::vector<DetectorTally> tallies; // aligned with detectors
    std::size_t tie_subgroups = 0;
    std::size_t no_detection_subgroups = 0;
    /// Rows with fewer than two present scores, left out of the board.
    std::size_t skipped_rows = 0;

    int max_rank() const;
};

RankBoard build_board(const ScoreMatrix& matrix);
std::map<std::string, RankBoard> build_dataset_boards(const ScoreMatrix& matrix);

/// `detector,rank_1,...,rank_k,ties,no_detection,absent`
void write_board_csv(std::ostream& out, const RankBoard& board);

// ---------------------------------------------------------------------------
// Stability

struct StabilityStats {
    double score_min = 0.0;
    double score_max = 0.0;
    double std_dev = 0.0; // sample (n - 1)
    std::size_t negative_count = 0;
    std::size_t total_count = 0;
};

StabilityStats stability(std::span<const double> scores);
/// Over every present cell of the matrix (restrict it to one dataset first).
StabilityStats stability(const ScoreMatrix& matrix);

// ---------------------------------------------------------------------------
// Feature-space drift

struct CentroidDiagnostics {
    Vector centroid;
    /// ||x_t - centroid||_2, or log(1 + ||x_t - centroid||_2) when log_scaled.
    std::vector<double> distances;
    std::vector<Instant> timestamps;
    std::vector<bool> in_anomaly_window;
    SplitView view;
    std::size_t split_boundary = 0; // first test index
    bool log_scaled = false;
};

/// Centroid over training-period rows (compensated summation), distance for every row.
CentroidDiagnostics centroid_diagnostics(const SeriesFile& file, const SplitView& view, bool log_scale = false);

struct DriftSummary {
    double train_mean_distance = 0.0;
    double test_mean_distance = 0.0;
    double shift_ratio = 0.0;
};

/// Means of the stored distances over the training period and the test slice;
/// shift_ratio = test / max(train, kStdFloor).
DriftSummary drift_summary(const CentroidDiagnostics& diag);

/// `timestamp,distance,segment,in_anomaly_window` with segment one of train/validation/test.
void write_diagnostics_csv(std::ostream& out, const CentroidDiagnostics& diag, TimestampFormat format);

} // namespace tsbench
