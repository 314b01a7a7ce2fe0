#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "tsbench/analysis.hpp"
#include "tsbench/config.hpp"
#include "tsbench/csv.hpp"
#include "tsbench/pipeline.hpp"
#include "tsbench/serialization.hpp"

namespace {

using namespace tsbench;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kBadInput = 2;

TimestampFormat parse_format(const std::string& name)
{
    const auto f = timestamp_format_from_string(name);
    if (!f)
        throw ConfigError("timestamp format must be iso8601 or epoch");
    return *f;
}

int cmd_validate(const std::string& config_path)
{
    const RunConfig cfg = load_run_config(config_path);
    std::cout << "config ok: " << cfg.datasets.size() << " dataset(s), " << cfg.detectors.size()
              << " detector(s), hash " << cfg.hash() << '\n';
    return kOk;
}

int cmd_run(const std::string& config_path, std::size_t workers)
{
    RunConfig cfg = load_run_config(config_path);
    if (workers > 0)
        cfg.workers = workers;
    const RunManifest m = run(cfg);
    std::size_t failed = 0;
    for (const auto& j : m.jobs) {
        if (j.status != JobStatus::ok) {
            ++failed;
            std::cerr << "failed: " << j.key() << ": " << j.error << '\n';
        }
    }
    std::cout << m.jobs.size() << " job(s), " << m.executed_jobs() << " executed, " << failed << " failed; manifest "
              << (cfg.output_dir / kManifestName).string() << " (" << m.content_hash() << ")\n";
    return failed ? kPartial : kOk;
}

int cmd_board(const std::string& scores_path, const std::string& dataset, bool as_json, bool with_stability)
{
    ScoreMatrix m = read_score_matrix(scores_path);
    if (!dataset.empty())
        m = m.restricted_to(dataset);
    const RankBoard board = build_board(m);
    if (as_json)
        std::cout << dump_json(to_json(board));
    else
        write_board_csv(std::cout, board);
    if (with_stability) {
        std::cout << "\ndataset,min,max,std,negative,total\n";
        for (const auto& name : m.datasets()) {
            const StabilityStats s = stability(m.restricted_to(name));
            std::cout << name << ',' << s.score_min << ',' << s.score_max << ',' << s.std_dev << ','
                      << s.negative_count << ',' << s.total_count << '\n';
        }
    }
    return kOk;
}

struct DriftArgs {
    std::string data;
    std::string timestamp_column = "timestamp";
    std::string timestamp_format = "iso8601";
    std::vector<std::string> value_columns;
    double train_fraction = 0.70;
    double validation_fraction = 0.10;
    bool log_scale = false;
    std::string csv_out;
};

int cmd_drift(const DriftArgs& a)
{
    CsvSchema schema{a.timestamp_column, a.value_columns, parse_format(a.timestamp_format)};
    const IngestResult in = ingest_csv(a.data, schema);
    SplitSpec spec{a.train_fraction, a.validation_fraction};
    spec.validate();
    const SplitView view = chronological_split(in.file, spec);
    const CentroidDiagnostics diag = centroid_diagnostics(in.file, view, a.log_scale);
    if (!a.csv_out.empty()) {
        std::ostringstream csv;
        write_diagnostics_csv(csv, diag, schema.timestamp_format);
        write_text_file(a.csv_out, csv.str());
    }
    std::cout << dump_json(to_json(drift_summary(diag)));
    return kOk;
}

struct ScoreArgs {
    std::string detections;
    std::string labels;
    std::string file_id;
    std::string timestamp_format = "iso8601";
    std::size_t label_expansion = 0;
};

int cmd_score(const ScoreArgs& a)
{
    const TimestampFormat format = parse_format(a.timestamp_format);
    const CsvTable table = read_csv(a.detections);
    const int tcol = table.column("timestamp");
    const int dcol = table.column("detection");
    if (tcol < 0 || dcol < 0)
        throw InputError("detection CSV needs timestamp and detection columns");
    std::vector<Instant> ts;
    DetectionSeries det;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw InputError("ragged row in detection CSV");
        const auto t = parse_timestamp(row[static_cast<std::size_t>(tcol)], format);
        if (!t)
            throw InputError("bad timestamp '" + row[static_cast<std::size_t>(tcol)] + "'");
        const std::string& flag = row[static_cast<std::size_t>(dcol)];
        if (flag != "0" && flag != "1")
            throw InputError("detection cells must be 0 or 1");
        ts.push_back(*t);
        det.flags.push_back(flag == "1");
    }
    const auto docs = read_label_document(a.labels, format);
    const auto it = docs.find(a.file_id);
    if (it == docs.end())
        throw InputError("no labels for " + a.file_id);
    const SeriesFile file(a.file_id, ts, Matrix::Zero(static_cast<Eigen::Index>(ts.size()), 1));
    const LabelAttachment att = attach_labels(file, it->second, a.label_expansion);
    std::cout << dump_json(to_json(score_raw(ts, det, att.file.labels()), format));
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"tsbench: labelled-window anomaly detection benchmark"};
    app.require_subcommand(1);

    std::string config_path;
    std::size_t workers = 0;
    auto* validate = app.add_subcommand("validate", "Check a run configuration");
    validate->add_option("config", config_path, "Configuration JSON")->required();

    auto* run_cmd = app.add_subcommand("run", "Run every selected subgroup and detector");
    run_cmd->add_option("config", config_path, "Configuration JSON")->required();
    run_cmd->add_option("-j,--workers", workers, "Override the worker count");

    std::string out_dir;
    auto* report_cmd = app.add_subcommand("report", "Summarize a finished run");
    report_cmd->add_option("output_dir", out_dir, "Run output directory")->required();

    std::string scores_path, dataset;
    bool as_json = false, with_stability = false;
    auto* board_cmd = app.add_subcommand("board", "Rank board from a score matrix CSV");
    board_cmd->add_option("scores", scores_path, "dataset,subgroup,gt,<detector>... CSV")->required();
    board_cmd->add_option("--dataset", dataset, "Restrict to one dataset");
    board_cmd->add_flag("--json", as_json, "Print JSON instead of CSV");
    board_cmd->add_flag("--stability", with_stability, "Also print per-dataset stability");

    DriftArgs drift_args;
    auto* drift_cmd = app.add_subcommand("drift", "Centroid-distance diagnostics for one CSV file");
    drift_cmd->add_option("data", drift_args.data, "Series CSV")->required();
    drift_cmd->add_option("--timestamp-column", drift_args.timestamp_column, "Timestamp column name")->capture_default_str();
    drift_cmd->add_option("--timestamp-format", drift_args.timestamp_format, "iso8601 or epoch")->capture_default_str();
    drift_cmd->add_option("--value-columns", drift_args.value_columns, "Comma-separated feature columns (default: all others)")->delimiter(',');
    drift_cmd->add_option("--train-fraction", drift_args.train_fraction, "Training-period share of the rows")->capture_default_str();
    drift_cmd->add_option("--validation-fraction", drift_args.validation_fraction, "Validation share of the training period")->capture_default_str();
    drift_cmd->add_flag("--log", drift_args.log_scale, "log(1 + distance)");
    drift_cmd->add_option("--csv", drift_args.csv_out, "Write per-timestamp distances here");

    ScoreArgs score_args;
    auto* score_cmd = app.add_subcommand("score", "NAB-score a timestamp,detection CSV against labels");
    score_cmd->add_option("detections", score_args.detections, "timestamp,detection CSV")->required();
    score_cmd->add_option("labels", score_args.labels, "Label JSON")->required();
    score_cmd->add_option("--file-id", score_args.file_id, "Key in the label JSON")->required();
    score_cmd->add_option("--timestamp-format", score_args.timestamp_format, "iso8601 or epoch")->capture_default_str();
    score_cmd->add_option("--label-expansion", score_args.label_expansion, "Rows added on each side of point labels")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*validate)
            return cmd_validate(config_path);
        if (*run_cmd)
            return cmd_run(config_path, workers);
        if (*report_cmd) {
            std::cout << report(out_dir);
            return kOk;
        }
        if (*board_cmd)
            return cmd_board(scores_path, dataset, as_json, with_stability);
        if (*drift_cmd)
            return cmd_drift(drift_args);
        if (*score_cmd)
            return cmd_score(score_args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadInput;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    }
    return kOk;
}
