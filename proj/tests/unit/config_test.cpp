#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "tsbench/config.hpp"

using namespace tsbench;
using nlohmann::json;

namespace {

json minimal()
{
    return json::parse(R"({
        "output_dir": "out",
        "datasets": [{"name": "d", "root": "data"}],
        "detectors": [{"id": "if", "type": "isolation_forest"}]
    })");
}

} // namespace

TEST(RunConfig, DefaultsAndRelativePaths)
{
    const RunConfig c = parse_run_config(minimal(), "/base/dir");
    EXPECT_EQ(c.output_dir, "/base/dir/out");
    EXPECT_EQ(c.datasets[0].root, "/base/dir/data");
    EXPECT_EQ(c.detectors[0].isolation_forest.tree_count, 100u);
    EXPECT_EQ(c.detectors[0].isolation_forest.subsample_size, 256u);
    EXPECT_EQ(c.search.trial_budget, 100u);
    EXPECT_EQ(c.search.long_window.lo, 64);
    EXPECT_EQ(c.profile.fp_weight, 0.11);
    EXPECT_EQ(c.split.train_fraction, 0.70);
    EXPECT_FALSE(c.include);
    EXPECT_TRUE(c.selected("d", "anything"));
}

TEST(RunConfig, UnknownKeysRejected)
{
    json j = minimal();
    j["sede"] = 3;
    EXPECT_THROW(parse_run_config(j, "."), ConfigError);
    j = minimal();
    j["detectors"][0]["trees"] = 10;
    EXPECT_THROW(parse_run_config(j, "."), ConfigError);
    j = minimal();
    j["search"] = {{"long", {1, 2}}};
    EXPECT_THROW(parse_run_config(j, "."), ConfigError);
}

TEST(RunConfig, EmptyIncludeIsAnError)
{
    json j = minimal();
    j["include"] = json::array();
    EXPECT_THROW(parse_run_config(j, "."), ConfigError);
}

TEST(RunConfig, InvalidValues)
{
    const std::vector<std::pair<std::string, json>> bad{
        {"/workers", 0},
        {"/split/train_fraction", 1.5},
        {"/search/short_window", {600, 700}},
        {"/search/threshold", {0.5}},
        {"/detectors/0/type", "lstm"},
        {"/datasets/0/timestamp_format", "unix"},
        {"/scoring_profile/fp_weight", -1},
        {"/output_dir", 5},
    };
    for (const auto& [path, value] : bad) {
        json j = minimal();
        j[json::json_pointer(path)] = value;
        EXPECT_THROW(parse_run_config(j, "."), ConfigError) << path;
    }
    json dup = minimal();
    dup["detectors"].push_back(dup["detectors"][0]);
    EXPECT_THROW(parse_run_config(dup, "."), ConfigError);
}

TEST(RunConfig, Filters)
{
    json j = minimal();
    j["include"] = {"d/app*"};
    j["exclude"] = {"d/app3"};
    const RunConfig c = parse_run_config(j, ".");
    EXPECT_TRUE(c.selected("d", "app1"));
    EXPECT_FALSE(c.selected("d", "app3"));
    EXPECT_FALSE(c.selected("d", "web"));
}

TEST(RunConfig, HashIgnoresWorkersOnly)
{
    json a = minimal(), b = minimal();
    b["workers"] = 4;
    EXPECT_EQ(parse_run_config(a, ".").hash(), parse_run_config(b, ".").hash());
    b["seed"] = 1;
    EXPECT_NE(parse_run_config(a, ".").hash(), parse_run_config(b, ".").hash());
}

TEST(RunConfig, LoadsBundledConfig)
{
    const RunConfig c = load_run_config(fixture::source_dir() / "configs/mini.json");
    EXPECT_EQ(c.detectors.size(), 2u);
    EXPECT_EQ(c.detectors[1].kind, DetectorKind::pca);
    EXPECT_TRUE(c.datasets[0].labels);
    EXPECT_THROW(load_run_config("/nonexistent.json"), ConfigError);
}
