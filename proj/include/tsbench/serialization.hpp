#pragma once

#include <nlohmann/json.hpp>

#include "tsbench/analysis.hpp"
#include "tsbench/calibration.hpp"
#include "tsbench/dataset.hpp"
#include "tsbench/nab.hpp"

namespace tsbench {

nlohmann::json to_json(const IngestReport& report);
nlohmann::json to_json(const LikelihoodParams& params);
nlohmann::json to_json(const NabReport& report, TimestampFormat format);
nlohmann::json to_json(const SubgroupScore& score);
nlohmann::json to_json(const CalibrationResult& result);
nlohmann::json to_json(const RankBoard& board);
nlohmann::json to_json(const StabilityStats& stats);
nlohmann::json to_json(const DriftSummary& summary);
nlohmann::json to_json(const ScoringProfile& profile);

LikelihoodParams likelihood_params_from_json(const nlohmann::json& j);

/// Two-space indented dump with a trailing newline; key order is sorted, so output is stable.
std::string dump_json(const nlohmann::json& j);

} // namespace tsbench
