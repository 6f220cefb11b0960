#pragma once

#include "gsqr/core.hpp"
#include "gsqr/homotopy.hpp"
#include "gsqr/ingest.hpp"
#include "gsqr/multiresponse.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gsqr::tools {

/// Layout and labels of a stacked multi-response fit.
struct StackInfo {
    StackedLayout layout;
    std::vector<std::string> responses;
    std::vector<std::string> regressors;
};

/// A solved path together with everything needed to re-check or report it.
struct PathDocument {
    SolutionPath path;
    PathFailure failure = PathFailure::None;
    SolverOptions options;
    StopRule stop;
    std::vector<std::string> group_names;
    std::vector<std::string> column_names;
    std::optional<DesignInfo> design;
    std::optional<StackInfo> stack;
    std::string source;
    std::optional<std::uint64_t> jitter_seed;
    double jitter_magnitude = 0.0;

    const QuantileProblem& problem() const { return *path.problem; }
};

/// Generic labels x1..xm and G1..Gg when nothing better is known.
void fill_default_names(PathDocument& doc);

/// FNV-1a over the bit patterns of X, y and tau, as 16 hex digits.
std::string problem_checksum(const QuantileProblem& problem);

nlohmann::json to_json(const PathDocument& doc);
/// Throws InputError on a malformed document or checksum mismatch.
PathDocument document_from_json(const nlohmann::json& j);

void write_document(const std::filesystem::path& file, const PathDocument& doc);
PathDocument read_document(const std::filesystem::path& file);

}  // namespace gsqr::tools
