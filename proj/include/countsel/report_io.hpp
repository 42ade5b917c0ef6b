#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "countsel/selection.hpp"
#include "countsel/simulate.hpp"

namespace countsel::io {

inline constexpr const char* kVersion = "1.0.0";

// Shortest round-tripping decimal form ('.' separator, >= 9 significant
// digits whenever the value needs them). Infinities print as "inf".
std::string format_real(double v);

// Detection columns: mean,criterion,pct_geometric,pct_poisson,average,rank.
// Bias columns: mean,criterion,pct_geometric,pct_poisson,bias,rank.
std::string report_csv(const sim::ExperimentReport& report);
// s,regret_nits
std::string regret_csv(const std::vector<std::pair<std::int64_t, double>>& series);
// sample,criterion,codelength_poisson,codelength_geometric,chosen,margin
std::string selection_csv(const std::vector<std::pair<std::size_t, SelectionResult>>& rows);

nlohmann::json to_json(const Criterion& c);
Criterion criterion_from_json(const nlohmann::json& j);
nlohmann::json to_json(const sim::ExperimentConfig& c);
sim::ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const sim::ExperimentReport& r);
sim::ExperimentReport report_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SelectionResult& r);

struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    double runtime_seconds = 0.0;
    std::string timestamp;  // ISO 8601, UTC
    nlohmann::json degenerate;

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

// One sample per line; integers separated by whitespace and/or commas.
// Throws DataError with a line-numbered message.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
std::vector<CountData> parse_samples(std::istream& in);

}  // namespace countsel::io
