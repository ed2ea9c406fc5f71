#pragma once

#include <json.hpp>

#include "lowmach/checks.hpp"
#include "lowmach/config.hpp"
#include "lowmach/fixedpoint.hpp"
#include "lowmach/sweep.hpp"

namespace lowmach {

inline constexpr const char* kVersion = "0.1.0";

nlohmann::json config_json(const RunConfig& config);
nlohmann::json residual_json(const ResidualReport& report);

/// Scalars, per-iteration arrays, energy diagnostics, config echo and versions.
nlohmann::json solve_report_json(const SolveReport& report, const RunConfig& config);
nlohmann::json sweep_report_json(const SweepTable& table, const std::vector<SweepCheck>& checks,
                                 const RunConfig& config);
nlohmann::json mms_report_json(const MmsResult& result, const RunConfig& config);
nlohmann::json check_report_json(const std::vector<CheckResult>& results, const RunConfig& config);

}  // namespace lowmach
