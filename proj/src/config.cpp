#include "tsbench/config.hpp"

#include <fnmatch.h>

#include <cstdio>
#include <set>

#include "tsbench/csv.hpp"
#include "tsbench/rng.hpp"

namespace tsbench {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where)
{
    if (!obj.is_object())
        throw ConfigError(where + " must be an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items())
        if (!ok.count(key))
            throw ConfigError("unknown key '" + key + "' in " + where);
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback)
{
    if (!obj.contains(key))
        return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

template <typename T>
T require(const json& obj, const char* key, const std::string& where)
{
    if (!obj.contains(key))
        throw ConfigError("missing '" + std::string(key) + "' in " + where);
    return get<T>(obj, key, where, T{});
}

template <typename T>
std::pair<T, T> pair_of(const json& obj, const char* key, const std::string& where, std::pair<T, T> fallback)
{
    if (!obj.contains(key))
        return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != 2)
        throw ConfigError("'" + std::string(key) + "' in " + where + " must be a [lo, hi] pair");
    try {
        return {v[0].get<T>(), v[1].get<T>()};
    } catch (const json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p)
{
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : (base / path).lexically_normal();
}

DatasetConfig parse_dataset(const json& j, const std::filesystem::path& base)
{
    const std::string where = "dataset";
    check_keys(j, {"name", "root", "timestamp_column", "timestamp_format", "value_columns", "labels", "label_expansion"}, where);
    DatasetConfig d;
    d.name = require<std::string>(j, "name", where);
    if (d.name.empty() || d.name.find('/') != std::string::npos)
        throw ConfigError("dataset name must be non-empty and contain no '/'");
    d.root = resolve(base, require<std::string>(j, "root", where));
    d.schema.timestamp_column = get<std::string>(j, "timestamp_column", where, "timestamp");
    const auto fmt = get<std::string>(j, "timestamp_format", where, "iso8601");
    const auto parsed = timestamp_format_from_string(fmt);
    if (!parsed)
        throw ConfigError("timestamp_format must be iso8601 or epoch");
    d.schema.timestamp_format = *parsed;
    d.schema.value_columns = get<std::vector<std::string>>(j, "value_columns", where, {});
    if (j.contains("labels"))
        d.labels = resolve(base, require<std::string>(j, "labels", where));
    const auto expansion = get<std::int64_t>(j, "label_expansion", where, 0);
    if (expansion < 0)
        throw ConfigError("label_expansion must be >= 0");
    d.label_expansion = static_cast<std::size_t>(expansion);
    return d;
}

DetectorConfig parse_detector(const json& j, const std::filesystem::path& base)
{
    if (!j.is_object())
        throw ConfigError("detector entry must be an object");
    DetectorConfig d;
    const std::string type = get<std::string>(j, "type", "detector", "");
    const std::string where = "detector '" + get<std::string>(j, "id", "detector", "") + "'";
    if (type == "isolation_forest") {
        check_keys(j, {"id", "type", "tree_count", "subsample"}, where);
        d.kind = DetectorKind::isolation_forest;
        const auto trees = get<std::int64_t>(j, "tree_count", where, 100);
        const auto sub = get<std::int64_t>(j, "subsample", where, 256);
        if (trees < 1 || sub < 1)
            throw ConfigError(where + ": tree_count and subsample must be >= 1");
        d.isolation_forest.tree_count = static_cast<std::size_t>(trees);
        d.isolation_forest.subsample_size = static_cast<std::size_t>(sub);
    } else if (type == "pca") {
        check_keys(j, {"id", "type", "retained_variance", "exact_dimension_limit"}, where);
        d.kind = DetectorKind::pca;
        d.pca.retained_variance = get<double>(j, "retained_variance", where, 0.70);
        if (!(d.pca.retained_variance > 0.0 && d.pca.retained_variance <= 1.0))
            throw ConfigError(where + ": retained_variance must be in (0, 1]");
        d.pca.exact_dimension_limit = get<std::size_t>(j, "exact_dimension_limit", where, 4096);
    } else if (type == "rolling_predictor") {
        check_keys(j, {"id", "type", "window"}, where);
        d.kind = DetectorKind::rolling_predictor;
        const auto w = get<std::int64_t>(j, "window", where, 10);
        if (w < 1)
            throw ConfigError(where + ": window must be >= 1");
        d.window = static_cast<std::size_t>(w);
    } else if (type == "import") {
        check_keys(j, {"id", "type", "path"}, where);
        d.kind = DetectorKind::import;
        d.path_template = resolve(base, require<std::string>(j, "path", where)).string();
    } else {
        throw ConfigError("detector type must be isolation_forest, pca, rolling_predictor or import");
    }
    d.id = require<std::string>(j, "id", "detector");
    if (d.id.empty() || d.id.find_first_of("/\\") != std::string::npos)
        throw ConfigError("detector id must be non-empty and contain no path separators");
    return d;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

} // namespace

std::string to_string(DetectorKind kind)
{
    switch (kind) {
    case DetectorKind::isolation_forest:
        return "isolation_forest";
    case DetectorKind::pca:
        return "pca";
    case DetectorKind::rolling_predictor:
        return "rolling_predictor";
    case DetectorKind::import:
        return "import";
    }
    return "unknown";
}

std::string RunConfig::hash() const
{
    return hex64(fnv1a64(canonical.dump()));
}

bool RunConfig::selected(const std::string& dataset, const std::string& subgroup) const
{
    const std::string key = dataset + "/" + subgroup;
    auto matches = [&](const std::string& pattern) { return fnmatch(pattern.c_str(), key.c_str(), 0) == 0; };
    if (include && std::none_of(include->begin(), include->end(), matches))
        return false;
    return std::none_of(exclude.begin(), exclude.end(), matches);
}

RunConfig parse_run_config(const json& doc, const std::filesystem::path& base_dir)
{
    check_keys(doc, {"datasets", "detectors", "search", "scoring_profile", "split", "output_dir", "seed", "workers",
                     "include", "exclude", "diagnostics"},
               "run configuration");
    RunConfig cfg;

    if (!doc.contains("datasets") || !doc.at("datasets").is_array() || doc.at("datasets").empty())
        throw ConfigError("'datasets' must be a non-empty array");
    std::set<std::string> dataset_names;
    for (const auto& d : doc.at("datasets")) {
        cfg.datasets.push_back(parse_dataset(d, base_dir));
        if (!dataset_names.insert(cfg.datasets.back().name).second)
            throw ConfigError("duplicate dataset name " + cfg.datasets.back().name);
    }

    if (!doc.contains("detectors") || !doc.at("detectors").is_array() || doc.at("detectors").empty())
        throw ConfigError("'detectors' must be a non-empty array");
    std::set<std::string> detector_ids;
    for (const auto& d : doc.at("detectors")) {
        cfg.detectors.push_back(parse_detector(d, base_dir));
        if (!detector_ids.insert(cfg.detectors.back().id).second)
            throw ConfigError("duplicate detector id " + cfg.detectors.back().id);
    }

    if (doc.contains("search")) {
        const auto& s = doc.at("search");
        check_keys(s, {"long_window", "short_window", "threshold", "trials"}, "search");
        const auto lw = pair_of<std::int64_t>(s, "long_window", "search", {64, 512});
        const auto sw = pair_of<std::int64_t>(s, "short_window", "search", {3, 32});
        const auto th = pair_of<double>(s, "threshold", "search", {0.90, 0.9995});
        cfg.search.long_window = {lw.first, lw.second};
        cfg.search.short_window = {sw.first, sw.second};
        cfg.search.threshold = {th.first, th.second};
        const auto trials = get<std::int64_t>(s, "trials", "search", 100);
        if (trials < 1)
            throw ConfigError("search trials must be >= 1");
        cfg.search.trial_budget = static_cast<std::size_t>(trials);
    }
    cfg.search.validate();

    if (doc.contains("scoring_profile")) {
        const auto& p = doc.at("scoring_profile");
        check_keys(p, {"tp_weight", "fp_weight", "fn_weight", "sigmoid_steepness"}, "scoring_profile");
        cfg.profile.tp_weight = get<double>(p, "tp_weight", "scoring_profile", 1.0);
        cfg.profile.fp_weight = get<double>(p, "fp_weight", "scoring_profile", 0.11);
        cfg.profile.fn_weight = get<double>(p, "fn_weight", "scoring_profile", 1.0);
        cfg.profile.sigmoid_steepness = get<double>(p, "sigmoid_steepness", "scoring_profile", 5.0);
    }
    cfg.profile.validate();

    if (doc.contains("split")) {
        const auto& s = doc.at("split");
        check_keys(s, {"train_fraction", "validation_fraction_of_train"}, "split");
        cfg.split.train_fraction = get<double>(s, "train_fraction", "split", 0.70);
        cfg.split.validation_fraction_of_train = get<double>(s, "validation_fraction_of_train", "split", 0.10);
    }
    cfg.split.validate();

    cfg.output_dir = resolve(base_dir, require<std::string>(doc, "output_dir", "run configuration"));
    cfg.seed = get<std::uint64_t>(doc, "seed", "run configuration", 0);
    const auto workers = get<std::int64_t>(doc, "workers", "run configuration", 1);
    if (workers < 1)
        throw ConfigError("workers must be >= 1");
    cfg.workers = static_cast<std::size_t>(workers);
    if (doc.contains("include")) {
        cfg.include = get<std::vector<std::string>>(doc, "include", "run configuration", {});
        if (cfg.include->empty())
            throw ConfigError("'include' filter is empty; omit it to select every subgroup");
    }
    cfg.exclude = get<std::vector<std::string>>(doc, "exclude", "run configuration", {});
    cfg.diagnostics = get<bool>(doc, "diagnostics", "run configuration", true);

    // Worker count and output location do not change results, so they stay out of the hash.
    cfg.canonical = doc;
    cfg.canonical.erase("workers");
    cfg.canonical.erase("output_dir");
    for (auto& d : cfg.canonical["datasets"])
        d["root"] = std::filesystem::path(d["root"].get<std::string>()).lexically_normal().string();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path)
{
    json doc;
    try {
        doc = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    } catch (const InputError& e) {
        throw ConfigError(e.what());
    }
    return parse_run_config(doc, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

} // namespace tsbench
