#pragma once

#include "gsqr/ingest.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gsqr::tools {

/**
 * Column specification file:
 *
 *   {
 *     "columns": [
 *       {"name": "bwt", "kind": "response"},
 *       {"name": "age", "kind": "quantitative", "transforms": ["standardize", {"polynomial": 2}]},
 *       {"name": "race", "kind": "categorical", "levels": ["black", "white", "other"],
 *        "reference": "other"}
 *     ],
 *     "tau": 0.5, "intercept": true, "jitter_columns": ["bwt"]
 *   }
 *
 * Categorical columns get dummy coding without asking. The top-level keys
 * other than "columns" are optional defaults that command-line flags override.
 */
struct FitSpec {
    std::vector<ColumnSpec> columns;
    std::optional<double> tau;
    std::optional<bool> intercept;
    std::vector<std::string> jitter_columns;
};

FitSpec parse_fit_spec(const nlohmann::json& j);
FitSpec load_fit_spec(const std::filesystem::path& file);

}  // namespace gsqr::tools
