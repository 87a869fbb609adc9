#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "axisym/estimates.hpp"
#include "axisym/harness.hpp"
#include "axisym/transport.hpp"

namespace axisym {

inline constexpr const char* kReportSchema = "axisym-report/1";

nlohmann::json to_json(const NormSpec& spec);
nlohmann::json to_json(const EstimateReport& rep);
nlohmann::json to_json(const ResidualReport& rep);
nlohmann::json to_json(const EpsilonStudyReport& rep);
nlohmann::json monitor_table(const TrajectoryRecord& rec, const std::vector<NormSpec>& norms);

// Wraps a payload with the schema tag and a report kind.
nlohmann::json envelope(const std::string& kind, nlohmann::json payload);

std::string estimates_csv(const std::vector<EstimateReport>& reports);
std::string residuals_csv(const std::vector<ResidualReport>& reports);
std::string epsilon_csv(const EpsilonStudyReport& rep);

void write_text(const std::string& path, const std::string& text);

}  // namespace axisym
