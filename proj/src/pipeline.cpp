#include "tsbench/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "tsbench/analysis.hpp"
#include "tsbench/calibration.hpp"
#include "tsbench/csv.hpp"
#include "tsbench/error_series.hpp"
#include "tsbench/isolation_forest.hpp"
#include "tsbench/pca.hpp"
#include "tsbench/rng.hpp"
#include "tsbench/serialization.hpp"

namespace tsbench {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string format_fixed(double v, int digits = 2)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << v;
    return out.str();
}

struct SubgroupSource {
    std::size_t dataset = 0;
    std::string name;
    std::vector<fs::path> files; // sorted by file name
};

struct Corpus {
    std::vector<SubgroupSource> subgroups;
    std::vector<std::map<std::string, LabelSpec>> labels; // per dataset, keyed "<subgroup>/<file>"
};

Corpus discover(const RunConfig& cfg)
{
    Corpus corpus;
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
        const auto& ds = cfg.datasets[di];
        if (!fs::is_directory(ds.root))
            throw InputError("dataset root is not a directory: " + ds.root.string());
        corpus.labels.push_back(ds.labels ? read_label_document(*ds.labels, ds.schema.timestamp_format)
                                          : std::map<std::string, LabelSpec>{});
        std::vector<fs::path> dirs;
        for (const auto& entry : fs::directory_iterator(ds.root))
            if (entry.is_directory())
                dirs.push_back(entry.path());
        std::sort(dirs.begin(), dirs.end());
        for (const auto& dir : dirs) {
            const std::string name = dir.filename().string();
            if (!cfg.selected(ds.name, name))
                continue;
            SubgroupSource sg{di, name, {}};
            for (const auto& entry : fs::directory_iterator(dir))
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    sg.files.push_back(entry.path());
            std::sort(sg.files.begin(), sg.files.end());
            corpus.subgroups.push_back(std::move(sg));
        }
    }
    return corpus;
}

struct LoadedFile {
    SeriesFile file;
    IngestReport ingest;
    std::string stem;
};

std::vector<LoadedFile> load_subgroup(const RunConfig& cfg, const Corpus& corpus, const SubgroupSource& sg)
{
    const auto& ds = cfg.datasets[sg.dataset];
    const auto& labels = corpus.labels[sg.dataset];
    if (sg.files.empty())
        throw InputError("subgroup " + ds.name + "/" + sg.name + " has no CSV files");
    std::vector<LoadedFile> out;
    for (const auto& path : sg.files) {
        const std::string id = sg.name + "/" + path.filename().string();
        auto ingested = ingest_csv(path, ds.schema, id);
        LoadedFile lf{std::move(ingested.file), ingested.report, path.stem().string()};
        if (const auto it = labels.find(id); it != labels.end()) {
            auto attached = attach_labels(lf.file, it->second, ds.label_expansion);
            lf.file = std::move(attached.file);
            lf.ingest.label_dropped = attached.dropped;
        }
        out.push_back(std::move(lf));
    }
    return out;
}

std::string substitute(std::string text, const std::string& key, const std::string& value)
{
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size()))
        text.replace(pos, key.size(), value);
    return text;
}

ErrorSeries compute_errors(const RunConfig& cfg, const DetectorConfig& det, const std::string& dataset,
                           const std::string& subgroup, const LoadedFile& lf, const SplitView& view,
                           const std::string& job_key, TimestampFormat format)
{
    if (det.kind == DetectorKind::import) {
        std::string path = det.path_template;
        path = substitute(path, "{dataset}", dataset);
        path = substitute(path, "{subgroup}", subgroup);
        path = substitute(path, "{file}", lf.file.id().substr(subgroup.size() + 1));
        path = substitute(path, "{stem}", lf.stem);
        return import_error_series(path, lf.file, format, det.id);
    }
    const SeriesFile normalized = apply_normalizer(lf.file, fit_normalizer(lf.file, view));
    const std::uint64_t seed = derive_seed(cfg.seed, job_key + "/fit/" + lf.file.id());
    switch (det.kind) {
    case DetectorKind::isolation_forest: {
        IsolationForestConfig c = det.isolation_forest;
        c.seed = seed;
        return score_isolation_forest(fit_isolation_forest(normalized, view, c), normalized, det.id);
    }
    case DetectorKind::pca: {
        PcaOptions o = det.pca;
        o.seed = seed;
        return pca_error(fit_pca(normalized, view, o), normalized, det.id);
    }
    case DetectorKind::rolling_predictor:
        return rolling_predictor_error(normalized, det.window, det.id);
    case DetectorKind::import:
        break;
    }
    throw ConfigError("unhandled detector kind");
}

std::string errors_csv(const std::vector<LoadedFile>& files, const std::vector<ErrorSeries>& errors,
                       TimestampFormat format)
{
    std::ostringstream out;
    out << "file_id,timestamp,error\n";
    for (std::size_t f = 0; f < files.size(); ++f) {
        std::ostringstream one;
        write_error_csv(one, errors[f], files[f].file.timestamps(), format);
        std::istringstream lines(one.str());
        std::string line;
        std::getline(lines, line); // header
        while (std::getline(lines, line))
            out << files[f].file.id() << ',' << line << '\n';
    }
    return out.str();
}

struct Job {
    const SubgroupSource* subgroup = nullptr;
    std::size_t detector = 0;
};

fs::path job_dir(const std::string& dataset, const std::string& subgroup, const std::string& detector)
{
    return fs::path(dataset) / subgroup / detector;
}

JobRecord run_job(const RunConfig& cfg, const Corpus& corpus, const Job& job)
{
    const auto& ds = cfg.datasets[job.subgroup->dataset];
    const auto& det = cfg.detectors[job.detector];
    JobRecord rec;
    rec.dataset = ds.name;
    rec.subgroup = job.subgroup->name;
    rec.detector = det.id;
    const std::string key = rec.key();
    const fs::path rel = job_dir(rec.dataset, rec.subgroup, rec.detector);
    const fs::path final_dir = cfg.output_dir / rel;
    const fs::path tmp_dir = final_dir.parent_path() / ("." + rec.detector + ".tmp");
    const TimestampFormat format = ds.schema.timestamp_format;

    try {
        auto t0 = Clock::now();
        const auto files = load_subgroup(cfg, corpus, *job.subgroup);
        std::vector<SplitView> views;
        for (const auto& lf : files)
            views.push_back(chronological_split(lf.file, cfg.split));
        rec.stage_seconds["load"] = seconds_since(t0);

        t0 = Clock::now();
        std::vector<ErrorSeries> errors;
        for (std::size_t f = 0; f < files.size(); ++f)
            errors.push_back(compute_errors(cfg, det, rec.dataset, rec.subgroup, files[f], views[f], key, format));
        rec.stage_seconds["detect"] = seconds_since(t0);

        t0 = Clock::now();
        std::vector<CalibrationInput> inputs;
        for (std::size_t f = 0; f < files.size(); ++f)
            inputs.push_back({errors[f], files[f].file, views[f]});
        SearchSpace space = cfg.search;
        space.seed = derive_seed(cfg.seed, key + "/calibrate");
        const CalibrationResult calibration = calibrate(inputs, space, cfg.profile);
        rec.stage_seconds["calibrate"] = seconds_since(t0);

        t0 = Clock::now();
        std::vector<NabReport> reports;
        for (std::size_t f = 0; f < files.size(); ++f)
            reports.push_back(evaluate_test(errors[f], files[f].file, views[f], calibration.best, cfg.profile));
        const SubgroupScore score = score_subgroup(reports, cfg.profile);
        rec.stage_seconds["evaluate"] = seconds_since(t0);

        t0 = Clock::now();
        json per_file = json::object();
        json ingest = json::object();
        json calibration_files = json::array();
        for (std::size_t f = 0; f < files.size(); ++f) {
            per_file[files[f].file.id()] = to_json(reports[f], format);
            ingest[files[f].file.id()] = to_json(files[f].ingest);
            calibration_files.push_back(files[f].file.id());
        }
        json calibration_doc = to_json(calibration);
        calibration_doc["files"] = calibration_files;
        calibration_doc["search_seed"] = hex64(space.seed);

        const bool all_correct = std::all_of(reports.begin(), reports.end(),
                                             [](const NabReport& r) { return r.correct_non_detection(); });
        const json test_doc = {{"dataset", rec.dataset},
                               {"subgroup", rec.subgroup},
                               {"detector", rec.detector},
                               {"params", to_json(calibration.best)},
                               {"score", to_json(score)},
                               {"gt", score.window_count},
                               {"correct_non_detection", all_correct},
                               {"files", per_file},
                               {"ingestion", ingest},
                               {"scoring_profile", to_json(cfg.profile)}};

        fs::remove_all(tmp_dir);
        write_text_file(tmp_dir / "errors.csv", errors_csv(files, errors, format));
        write_text_file(tmp_dir / "calibration.json", dump_json(calibration_doc));
        write_text_file(tmp_dir / "test_report.json", dump_json(test_doc));
        fs::remove_all(final_dir);
        fs::rename(tmp_dir, final_dir);
        rec.stage_seconds["write"] = seconds_since(t0);

        for (const char* name : {"calibration.json", "errors.csv", "test_report.json"})
            rec.artifacts.push_back((rel / name).generic_string());
        rec.status = JobStatus::ok;
        rec.test_score = score.normalized_score;
        rec.gt = score.window_count;
        rec.params = calibration.best;
    } catch (const std::exception& e) {
        std::error_code ec;
        fs::remove_all(tmp_dir, ec);
        fs::remove_all(final_dir, ec);
        rec.status = JobStatus::failed;
        rec.error = e.what();
        rec.artifacts.clear();
    }
    return rec;
}

bool artifacts_present(const fs::path& out, const JobRecord& rec)
{
    return !rec.artifacts.empty() && std::all_of(rec.artifacts.begin(), rec.artifacts.end(), [&](const std::string& a) {
        return fs::is_regular_file(out / a);
    });
}

ScoreMatrix matrix_from_jobs(const RunConfig& cfg, const std::vector<JobRecord>& jobs)
{
    ScoreMatrix m;
    for (const auto& d : cfg.detectors)
        m.detectors.push_back(d.id);
    std::map<std::pair<std::string, std::string>, std::size_t> row_of;
    for (const auto& job : jobs) {
        const auto key = std::make_pair(job.dataset, job.subgroup);
        auto it = row_of.find(key);
        if (it == row_of.end()) {
            it = row_of.emplace(key, m.rows.size()).first;
            m.rows.push_back({job.dataset, job.subgroup, 0, std::vector<std::optional<double>>(m.detectors.size())});
        }
        auto& row = m.rows[it->second];
        if (job.status != JobStatus::ok)
            continue;
        const auto col = static_cast<std::size_t>(
            std::find(m.detectors.begin(), m.detectors.end(), job.detector) - m.detectors.begin());
        row.scores[col] = job.test_score;
        row.gt = job.gt;
    }
    return m;
}

json stability_json(const ScoreMatrix& m)
{
    std::size_t present = 0;
    for (const auto& r : m.rows)
        present += static_cast<std::size_t>(std::count_if(r.scores.begin(), r.scores.end(), [](auto& s) { return s.has_value(); }));
    return present < 2 ? json() : to_json(stability(m));
}

/// Writes the analysis artifacts and returns their relative paths.
std::vector<std::string> run_analysis(const RunConfig& cfg, const Corpus& corpus, const std::vector<JobRecord>& jobs)
{
    std::vector<std::string> written;
    auto emit = [&](const std::string& rel, const std::string& text) {
        write_text_file(cfg.output_dir / rel, text);
        written.push_back(rel);
    };

    const ScoreMatrix matrix = matrix_from_jobs(cfg, jobs);
    std::ostringstream scores;
    write_score_matrix(scores, matrix);
    emit("analysis/scores.csv", scores.str());

    const RankBoard board = build_board(matrix);
    json boards = json::object();
    for (const auto& [name, b] : build_dataset_boards(matrix))
        boards[name] = to_json(b);
    emit("analysis/board.json", dump_json({{"overall", to_json(board)}, {"datasets", boards}}));
    std::ostringstream board_csv;
    write_board_csv(board_csv, board);
    emit("analysis/board.csv", board_csv.str());

    json stab = json::object();
    for (const auto& name : matrix.datasets())
        stab[name] = stability_json(matrix.restricted_to(name));
    emit("analysis/stability.json", dump_json({{"overall", stability_json(matrix)}, {"datasets", stab}}));

    json drift = json::object();
    for (const auto& sg : corpus.subgroups) {
        const auto& ds = cfg.datasets[sg.dataset];
        json files = json::object();
        try {
            for (const auto& lf : load_subgroup(cfg, corpus, sg)) {
                try {
                    const auto view = chronological_split(lf.file, cfg.split);
                    const auto diag = centroid_diagnostics(lf.file, view);
                    files[lf.file.id()] = to_json(drift_summary(diag));
                    if (cfg.diagnostics) {
                        std::ostringstream csv;
                        write_diagnostics_csv(csv, diag, ds.schema.timestamp_format);
                        emit((fs::path("analysis/diagnostics") / ds.name / sg.name / (lf.stem + ".csv")).generic_string(),
                             csv.str());
                    }
                } catch (const std::exception& e) {
                    files[lf.file.id()] = {{"error", e.what()}};
                }
            }
        } catch (const std::exception& e) {
            files = {{"error", e.what()}};
        }
        drift[ds.name][sg.name] = files;
    }
    emit("analysis/drift.json", dump_json(drift));
    return written;
}

void remove_listed(const fs::path& out, const RunManifest& m)
{
    std::error_code ec;
    for (const auto& a : m.artifacts())
        fs::remove(out / a, ec);
}

JobStatus status_from_string(const std::string& s)
{
    return s == "ok" ? JobStatus::ok : JobStatus::failed;
}

} // namespace

bool RunManifest::any_failed() const
{
    return std::any_of(jobs.begin(), jobs.end(), [](const JobRecord& j) { return j.status != JobStatus::ok; });
}

std::size_t RunManifest::executed_jobs() const
{
    return static_cast<std::size_t>(std::count_if(jobs.begin(), jobs.end(), [](const JobRecord& j) { return !j.reused; }));
}

std::vector<std::string> RunManifest::artifacts() const
{
    std::vector<std::string> all = analysis_artifacts;
    for (const auto& j : jobs)
        all.insert(all.end(), j.artifacts.begin(), j.artifacts.end());
    std::sort(all.begin(), all.end());
    return all;
}

json RunManifest::to_json() const
{
    json job_list = json::array();
    json job_timings = json::object();
    for (const auto& j : jobs) {
        job_list.push_back({{"dataset", j.dataset},
                            {"subgroup", j.subgroup},
                            {"detector", j.detector},
                            {"status", j.status == JobStatus::ok ? "ok" : "failed"},
                            {"error", j.error},
                            {"artifacts", j.artifacts},
                            {"test_score", j.test_score ? json(*j.test_score) : json()},
                            {"gt", j.gt},
                            {"params", j.params ? tsbench::to_json(*j.params) : json()}});
        job_timings[j.key()] = {{"stages", j.stage_seconds}, {"reused", j.reused}};
    }
    json doc = {{"config_hash", config_hash},
                {"version", version},
                {"jobs", job_list},
                {"analysis", {{"artifacts", analysis_artifacts}}},
                {"timings", {{"jobs", job_timings}, {"analysis", analysis_seconds}, {"executed_jobs", executed_jobs()}}}};
    doc["content_hash"] = content_hash();
    return doc;
}

std::string RunManifest::content_hash() const
{
    json doc = {{"config_hash", config_hash}, {"version", version}, {"analysis", analysis_artifacts}};
    json job_list = json::array();
    for (const auto& j : jobs)
        job_list.push_back({{"key", j.key()},
                            {"status", j.status == JobStatus::ok ? "ok" : "failed"},
                            {"error", j.error},
                            {"artifacts", j.artifacts},
                            {"test_score", j.test_score ? json(*j.test_score) : json()},
                            {"gt", j.gt},
                            {"params", j.params ? tsbench::to_json(*j.params) : json()}});
    doc["jobs"] = job_list;
    return hex64(fnv1a64(doc.dump()));
}

RunManifest RunManifest::from_json(const json& j)
{
    try {
        RunManifest m;
        m.config_hash = j.at("config_hash").get<std::string>();
        m.version = j.at("version").get<std::string>();
        const json& timings = j.contains("timings") ? j.at("timings") : json::object();
        for (const auto& e : j.at("jobs")) {
            JobRecord r;
            r.dataset = e.at("dataset").get<std::string>();
            r.subgroup = e.at("subgroup").get<std::string>();
            r.detector = e.at("detector").get<std::string>();
            r.status = status_from_string(e.at("status").get<std::string>());
            r.error = e.at("error").get<std::string>();
            r.artifacts = e.at("artifacts").get<std::vector<std::string>>();
            if (!e.at("test_score").is_null())
                r.test_score = e.at("test_score").get<double>();
            r.gt = e.at("gt").get<std::size_t>();
            if (!e.at("params").is_null())
                r.params = likelihood_params_from_json(e.at("params"));
            if (timings.contains("jobs") && timings.at("jobs").contains(r.key()))
                r.stage_seconds = timings.at("jobs").at(r.key()).at("stages").get<std::map<std::string, double>>();
            m.jobs.push_back(std::move(r));
        }
        m.analysis_artifacts = j.at("analysis").at("artifacts").get<std::vector<std::string>>();
        if (timings.contains("analysis"))
            m.analysis_seconds = timings.at("analysis").get<std::map<std::string, double>>();
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
}

RunManifest read_manifest(const fs::path& output_dir)
{
    const fs::path path = output_dir / kManifestName;
    if (!fs::is_regular_file(path))
        throw InputError("no manifest at " + path.string());
    try {
        return RunManifest::from_json(json::parse(read_text_file(path)));
    } catch (const json::parse_error& e) {
        throw InputError("cannot parse " + path.string() + ": " + e.what());
    }
}

RunManifest run(const RunConfig& cfg)
{
    const Corpus corpus = discover(cfg);
    fs::create_directories(cfg.output_dir);

    RunManifest manifest;
    manifest.config_hash = cfg.hash();

    std::map<std::string, JobRecord> previous;
    std::vector<std::string> previous_analysis;
    if (fs::is_regular_file(cfg.output_dir / kManifestName)) {
        RunManifest old;
        bool readable = true;
        try {
            old = read_manifest(cfg.output_dir);
        } catch (const InputError&) {
            readable = false;
        }
        if (readable && old.config_hash == manifest.config_hash && old.version == manifest.version) {
            for (auto& j : old.jobs)
                previous.emplace(j.key(), std::move(j));
            previous_analysis = old.analysis_artifacts;
        } else if (readable) {
            remove_listed(cfg.output_dir, old);
        }
    }

    std::vector<Job> jobs;
    for (const auto& sg : corpus.subgroups)
        for (std::size_t d = 0; d < cfg.detectors.size(); ++d)
            jobs.push_back({&sg, d});

    manifest.jobs.resize(jobs.size());
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const std::string key = cfg.datasets[jobs[i].subgroup->dataset].name + "/" + jobs[i].subgroup->name + "/" +
                                cfg.detectors[jobs[i].detector].id;
        const auto it = previous.find(key);
        if (it != previous.end() && it->second.status == JobStatus::ok && artifacts_present(cfg.output_dir, it->second)) {
            manifest.jobs[i] = it->second;
            manifest.jobs[i].reused = true;
        } else {
            pending.push_back(i);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < pending.size(); k = next++)
            manifest.jobs[pending[k]] = run_job(cfg, corpus, jobs[pending[k]]);
    };
    const std::size_t thread_count = std::min(cfg.workers, pending.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < thread_count; ++t)
        pool.emplace_back(worker);
    if (thread_count > 0)
        worker();
    for (auto& th : pool)
        th.join();

    // Barrier passed: analysis reads only job results.
    const bool analysis_current =
        pending.empty() && !previous_analysis.empty() &&
        std::all_of(previous_analysis.begin(), previous_analysis.end(),
                    [&](const std::string& a) { return fs::is_regular_file(cfg.output_dir / a); });
    if (analysis_current) {
        manifest.analysis_artifacts = previous_analysis;
    } else {
        const auto t0 = Clock::now();
        {
            std::error_code ec;
            for (const auto& a : previous_analysis)
                fs::remove(cfg.output_dir / a, ec);
        }
        manifest.analysis_artifacts = run_analysis(cfg, corpus, manifest.jobs);
        manifest.analysis_seconds["analysis"] = seconds_since(t0);
    }
    std::sort(manifest.analysis_artifacts.begin(), manifest.analysis_artifacts.end());

    write_text_file(cfg.output_dir / kManifestName, dump_json(manifest.to_json()));
    return manifest;
}

std::string best_detector(const std::vector<std::string>& detectors, const std::vector<std::optional<double>>& scores)
{
    std::optional<long long> best;
    std::size_t present = 0;
    for (const auto& s : scores)
        if (s) {
            ++present;
            best = std::max(best.value_or(rounded_hundredths(*s)), rounded_hundredths(*s));
        }
    if (!best)
        return {};
    std::vector<std::string> winners;
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i] && rounded_hundredths(*scores[i]) == *best)
            winners.push_back(detectors[i]);
    if (present >= 2 && winners.size() == present)
        return "ALL";
    std::string out;
    for (const auto& w : winners)
        out += (out.empty() ? "" : ", ") + w;
    return out;
}

std::string report(const fs::path& output_dir)
{
    const RunManifest manifest = read_manifest(output_dir);
    for (const auto& a : manifest.artifacts())
        if (!fs::is_regular_file(output_dir / a))
            throw InputError("missing artifact " + a);

    std::vector<std::string> detectors;
    struct Row {
        std::string dataset, subgroup;
        std::size_t gt = 0;
        std::map<std::string, std::optional<double>> scores;
        std::map<std::string, LikelihoodParams> params;
    };
    std::vector<Row> rows;
    for (const auto& j : manifest.jobs) {
        if (std::find(detectors.begin(), detectors.end(), j.detector) == detectors.end())
            detectors.push_back(j.detector);
        if (rows.empty() || rows.back().dataset != j.dataset || rows.back().subgroup != j.subgroup)
            rows.push_back({j.dataset, j.subgroup, 0, {}, {}});
        auto& row = rows.back();
        if (j.status != JobStatus::ok)
            continue;
        const json doc = json::parse(read_text_file(output_dir / job_dir(j.dataset, j.subgroup, j.detector) / "test_report.json"));
        row.scores[j.detector] = doc.at("score").at("normalized_score").get<double>();
        row.params[j.detector] = likelihood_params_from_json(doc.at("params"));
        row.gt = doc.at("gt").get<std::size_t>();
    }

    std::ostringstream out;
    out << "Best detector per subgroup (test split; + marks subgroups without ground-truth anomalies)\n";
    out << std::left << std::setw(12) << "dataset" << std::setw(38) << "subgroup" << std::right << std::setw(6) << "W"
        << std::setw(6) << "W'" << std::setw(10) << "thresh" << std::setw(11) << "score" << "  " << std::left << "best\n";
    for (const auto& r : rows) {
        std::vector<std::optional<double>> cells;
        for (const auto& d : detectors)
            cells.push_back(r.scores.count(d) ? r.scores.at(d) : std::nullopt);
        const std::string best = best_detector(detectors, cells);
        std::string W = "-", Ws = "-", th = "-", score = "-";
        std::string note;
        if (!best.empty()) {
            const std::string lead = best == "ALL" ? detectors.front() : best.substr(0, best.find(','));
            const auto it = std::find_if(detectors.begin(), detectors.end(), [&](const std::string& d) {
                return d == lead && r.scores.count(d) && r.scores.at(d);
            });
            const std::string src = it != detectors.end() ? *it : std::string();
            if (!src.empty()) {
                score = format_fixed(*r.scores.at(src));
                if (best != "ALL") {
                    const auto& p = r.params.at(src);
                    W = std::to_string(p.long_window);
                    Ws = std::to_string(p.short_window);
                    th = format_fixed(p.threshold, 4);
                }
            }
            const bool all_zero = std::all_of(cells.begin(), cells.end(), [](const auto& c) {
                return !c || rounded_hundredths(*c) == 0;
            });
            if (all_zero)
                note = r.gt == 0 ? "  (correct non-detection)" : "  (no detection)";
        }
        const std::string name = r.subgroup + (r.gt == 0 ? " +" : "");
        out << std::left << std::setw(12) << r.dataset << std::setw(38) << name << std::right << std::setw(6) << W
            << std::setw(6) << Ws << std::setw(10) << th << std::setw(11) << score << "  " << std::left
            << (best.empty() ? "-" : best) << note << '\n';
    }

    out << "\nTest NAB score per detector\n";
    out << std::left << std::setw(12) << "dataset" << std::setw(38) << "subgroup";
    for (const auto& d : detectors)
        out << std::right << std::setw(std::max<int>(12, static_cast<int>(d.size()) + 2)) << d;
    out << '\n';
    for (const auto& r : rows) {
        out << std::left << std::setw(12) << r.dataset << std::setw(38) << (r.subgroup + (r.gt == 0 ? " +" : ""));
        for (const auto& d : detectors) {
            const auto it = r.scores.find(d);
            const std::string cell = it != r.scores.end() && it->second ? format_fixed(*it->second) : "-";
            out << std::right << std::setw(std::max<int>(12, static_cast<int>(d.size()) + 2)) << cell;
        }
        out << '\n';
    }
    return out.str();
}

} // namespace tsbench
