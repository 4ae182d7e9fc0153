#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "reb/config.hpp"
#include "reb/harness.hpp"

namespace reb {

/// curves.csv: `round,<label>_mean,<label>_stderr,...`, one row per round (1-based).
[[nodiscard]] std::string curves_csv(std::span<const AggregateResult> results);
/// final.csv: `policy,run,final_regret`, policies in order, runs 0-based.
[[nodiscard]] std::string final_csv(std::span<const AggregateResult> results);

[[nodiscard]] nlohmann::json config_json(const ExperimentConfig& config);

struct ResultFiles {
    std::filesystem::path curves;
    std::filesystem::path final;
    std::filesystem::path meta;
};

/// Creates `out_dir` if needed and overwrites curves.csv, final.csv and
/// meta.json. Throws std::runtime_error naming the path on I/O failure.
ResultFiles write_results(std::span<const AggregateResult> results, const std::filesystem::path& out_dir,
                          const nlohmann::json& meta);

struct CurvesTable {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> mean;    // [policy][round]
    std::vector<std::vector<double>> stderr_;  // [policy][round]
};

/// Parses curves.csv back; throws std::runtime_error naming the offending column.
[[nodiscard]] CurvesTable parse_curves_csv(std::string_view text);

}  // namespace reb
