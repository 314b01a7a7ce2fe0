#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbench/config.hpp"
#include "tsbench/likelihood.hpp"

namespace tsbench {

inline constexpr const char* kVersion = "0.1.0";

enum class JobStatus { ok, failed };

/// One (dataset, subgroup, detector) evaluation.
struct JobRecord {
    std::string dataset;
    std::string subgroup;
    std::string detector;
    JobStatus status = JobStatus::failed;
    std::string error;
    std::vector<std::string> artifacts; // relative to the output directory
    std::optional<double> test_score;
    std::size_t gt = 0;
    std::optional<LikelihoodParams> params;
    std::map<std::string, double> stage_seconds;
    bool reused = false;

    std::string key() const { return dataset + "/" + subgroup + "/" + detector; }
};

struct RunManifest {
    std::string config_hash;
    std::string version = kVersion;
    std::vector<JobRecord> jobs;
    std::vector<std::string> analysis_artifacts;
    std::map<std::string, double> analysis_seconds;

    bool any_failed() const;
    std::size_t executed_jobs() const;
    /// All artifact paths, sorted.
    std::vector<std::string> artifacts() const;

    /// Wall-clock fields sit under "timings" and are left out of content_hash().
    nlohmann::json to_json() const;
    std::string content_hash() const;
    static RunManifest from_json(const nlohmann::json& j);
};

inline constexpr const char* kManifestName = "manifest.json";

/// Runs every selected (subgroup, detector) job on a bounded worker pool, then the analysis
/// stage, and writes manifest.json. Jobs completed by an earlier run with the same config hash
/// are reused. Job failures are recorded, never thrown; corpus discovery errors throw InputError.
RunManifest run(const RunConfig& config);

RunManifest read_manifest(const std::filesystem::path& output_dir);

/// Subgroup summary (best parameters, best test score, best detector) followed by the
/// per-detector score matrix. Throws InputError when the manifest or a listed artifact is missing.
std::string report(const std::filesystem::path& output_dir);

/// Name of the best detector for one row: the highest score after rounding to hundredths,
/// "ALL" when every present score ties. Empty when no score is present.
std::string best_detector(const std::vector<std::string>& detectors, const std::vector<std::optional<double>>& scores);

} // namespace tsbench
