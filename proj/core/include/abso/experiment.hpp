#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "abso/engine.hpp"
#include "abso/metrics.hpp"

namespace abso {

/// Fully resolved experiment description: which functions, which mode,
/// which seeds, parameter overrides, and output locations.
struct ExperimentConfig {
    std::vector<FunctionId> functions;
    Mode mode = Mode::ABSO;
    std::vector<std::uint64_t> seeds;
    std::string out_dir = "out";
    double epsilon = 0.1;                 // peak-ratio matching accuracy
    std::optional<double> tol;            // convergence tolerance; default is per-function
    std::size_t workers = 0;              // 0 -> hardware concurrency

    EngineConfig engine;
    SaliencyConfig saliency;
    std::optional<double> rho_override;   // archive radius; default per-function

    void validate() const;

    /// Hash of the result-determining fields (out_dir and workers excluded);
    /// embedded in every artifact header for provenance.
    [[nodiscard]] std::string hash() const;

    /// Canonical JSON form (the one that is hashed and echoed to disk).
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Layer defaults <- config file (optional) <- flag overrides. Unknown keys
/// and out-of-range values raise a configuration error naming the key.
ExperimentConfig load_config(const std::optional<std::string>& path,
                             const nlohmann::json& flag_overrides);

struct SuiteOutcome {
    bool all_completed = true;
    std::size_t runs_executed = 0;
    std::size_t runs_skipped = 0;   // valid artifacts already present
    std::string summary_path;
};

/// Execute every (function, seed) pair, writing per-run trace and archive
/// CSVs plus one summary JSON. Already-present artifacts with a matching
/// config hash are reused instead of re-run.
SuiteOutcome run_suite(const ExperimentConfig& cfg);

struct CriterionResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct VerifyReport {
    std::vector<CriterionResult> criteria;
    [[nodiscard]] bool all_passed() const;
};

/// Check a summary JSON against acceptance thresholds. `threshold_overrides`
/// may replace individual built-in threshold values by key.
VerifyReport verify(const std::string& summary_path,
                    const std::map<std::string, double>& threshold_overrides = {});

/// Artifact paths and readers (shared by run_suite, verify and the tests).
std::string trace_path(const ExperimentConfig& cfg, FunctionId fn, std::uint64_t seed);
std::string archive_path(const ExperimentConfig& cfg, FunctionId fn, std::uint64_t seed);

RunTrace read_trace_csv(const std::string& path);
std::vector<ArchivedSolution> read_archive_csv(const std::string& path);

}  // namespace abso
