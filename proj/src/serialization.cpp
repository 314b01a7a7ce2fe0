#include "tsbench/serialization.hpp"

namespace tsbench {

using nlohmann::json;

json to_json(const IngestReport& r)
{
    return {{"rows_read", r.rows_read},
            {"rows_dropped", r.rows_dropped},
            {"duplicates", r.duplicates},
            {"label_dropped", r.label_dropped}};
}

json to_json(const LikelihoodParams& p)
{
    return {{"long_window", p.long_window}, {"short_window", p.short_window}, {"threshold", p.threshold}};
}

LikelihoodParams likelihood_params_from_json(const json& j)
{
    LikelihoodParams p;
    p.long_window = j.at("long_window").get<std::size_t>();
    p.short_window = j.at("short_window").get<std::size_t>();
    p.threshold = j.at("threshold").get<double>();
    return p;
}

json to_json(const NabReport& r, TimestampFormat format)
{
    json windows = json::array();
    for (const auto& w : r.per_window) {
        windows.push_back({{"start", format_timestamp(w.window.start, format)},
                           {"end", format_timestamp(w.window.end, format)},
                           {"earliest_detection", w.earliest_detection ? json(format_timestamp(*w.earliest_detection, format)) : json()},
                           {"credit", w.credit}});
    }
    json fps = json::array();
    for (const auto& fp : r.fp_events)
        fps.push_back({{"timestamp", format_timestamp(fp.timestamp, format)}, {"penalty", fp.penalty}});
    return {{"raw_score", r.raw_score},
            {"normalized_score", r.normalized_score},
            {"null_score", r.null_score},
            {"perfect_score", r.perfect_score},
            {"per_window", windows},
            {"fp_events", fps},
            {"fn_count", r.fn_count},
            {"detection_count", r.detection_count},
            {"unscorable_windows", r.unscorable_windows},
            {"correct_non_detection", r.correct_non_detection()}};
}

json to_json(const SubgroupScore& s)
{
    return {{"raw_score", s.raw_score},
            {"null_score", s.null_score},
            {"perfect_score", s.perfect_score},
            {"normalized_score", s.normalized_score},
            {"window_count", s.window_count},
            {"detection_count", s.detection_count}};
}

json to_json(const CalibrationResult& r)
{
    json trials = json::array();
    for (const auto& t : r.trials) {
        json entry = to_json(t.params);
        entry["trial_index"] = t.trial_index;
        entry["validation_score"] = t.validation_score;
        entry["detections"] = t.detections;
        trials.push_back(std::move(entry));
    }
    return {{"best", to_json(r.best)}, {"best_score", r.best_score}, {"selection_rule", r.selection_rule}, {"trials", trials}};
}

json to_json(const RankBoard& b)
{
    json tallies = json::object();
    for (std::size_t d = 0; d < b.detectors.size(); ++d) {
        const auto& t = b.tallies[d];
        json ranks = json::array();
        for (int r = 1; r <= b.max_rank(); ++r)
            ranks.push_back(t.rank(r));
        tallies[b.detectors[d]] = {{"rank_counts", ranks}, {"ties", t.ties}, {"no_detection", t.no_detection}, {"absent", t.absent}};
    }
    json entries = json::array();
    for (const auto& e : b.entries) {
        json ranks = json::object();
        for (std::size_t d = 0; d < b.detectors.size(); ++d)
            ranks[b.detectors[d]] = e.outcome.ranks[d] ? json(*e.outcome.ranks[d]) : json();
        entries.push_back({{"dataset", e.dataset}, {"subgroup", e.subgroup}, {"outcome", to_string(e.outcome.kind)}, {"ranks", ranks}});
    }
    return {{"detectors", b.detectors},
            {"tallies", tallies},
            {"subgroups", entries},
            {"tie_subgroups", b.tie_subgroups},
            {"no_detection_subgroups", b.no_detection_subgroups},
            {"skipped_rows", b.skipped_rows}};
}

json to_json(const StabilityStats& s)
{
    return {{"score_min", s.score_min},
            {"score_max", s.score_max},
            {"std_dev", s.std_dev},
            {"negative_count", s.negative_count},
            {"total_count", s.total_count}};
}

json to_json(const DriftSummary& s)
{
    return {{"train_mean_distance", s.train_mean_distance},
            {"test_mean_distance", s.test_mean_distance},
            {"shift_ratio", s.shift_ratio}};
}

json to_json(const ScoringProfile& p)
{
    return {{"tp_weight", p.tp_weight},
            {"fp_weight", p.fp_weight},
            {"fn_weight", p.fn_weight},
            {"sigmoid_steepness", p.sigmoid_steepness}};
}

std::string dump_json(const json& j)
{
    return j.dump(2) + "\n";
}

} // namespace tsbench
