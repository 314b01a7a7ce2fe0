#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tsbench/calibration.hpp"
#include "tsbench/dataset.hpp"
#include "tsbench/isolation_forest.hpp"
#include "tsbench/nab.hpp"
#include "tsbench/pca.hpp"

namespace tsbench {

/// A dataset root holds one directory per subgroup with one CSV per file. Label keys are
/// "<subgroup>/<file name>", as in NAB's combined_windows.json.
struct DatasetConfig {
    std::string name;
    std::filesystem::path root;
    CsvSchema schema;
    std::optional<std::filesystem::path> labels;
    std::size_t label_expansion = 0;
};

enum class DetectorKind { isolation_forest, pca, rolling_predictor, import };

struct DetectorConfig {
    std::string id;
    DetectorKind kind = DetectorKind::isolation_forest;
    IsolationForestConfig isolation_forest; // seed is derived per file
    PcaOptions pca;                         // seed is derived per file
    std::size_t window = 10;                // rolling predictor
    /// Import path with {dataset}, {subgroup}, {file} (file name) and {stem} placeholders.
    std::string path_template;
};

struct RunConfig {
    std::vector<DatasetConfig> datasets;
    std::vector<DetectorConfig> detectors;
    SearchSpace search; // seed is derived per job
    ScoringProfile profile;
    SplitSpec split;
    std::filesystem::path output_dir;
    std::uint64_t seed = 0;
    std::size_t workers = 1;
    /// "dataset/subgroup" glob patterns. An absent include list selects everything.
    std::optional<std::vector<std::string>> include;
    std::vector<std::string> exclude;
    bool diagnostics = true;

    /// Canonical JSON of the parsed config; hashed for the manifest.
    nlohmann::json canonical;

    std::string hash() const;
    bool selected(const std::string& dataset, const std::string& subgroup) const;
};

/// Relative paths resolve against base_dir. Unknown keys and invalid values throw ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

std::string to_string(DetectorKind kind);

} // namespace tsbench
