#pragma once

#include <nlohmann/json_fwd.hpp>

#include "torth/bounds.hpp"
#include "torth/campaign.hpp"
#include "torth/solvers.hpp"

namespace torth {

/// Versioned JSON records ("schema": 1) with stable field names.
nlohmann::json report_to_json(const RunReport& report);
nlohmann::json campaign_to_json(const CampaignSpec& spec, const CampaignResult& result);
nlohmann::json suites_to_json(const std::vector<SuiteResult>& suites);

/// Per-iteration trace as CSV (residual, jump, orthogonality loss,
/// truncation gap, reference distances) for external plotting.
void write_trace_csv(const std::filesystem::path& path, const RunReport& report);

}  // namespace torth
