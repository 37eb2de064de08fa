#pragma once

#include <cstdint>
#include <vector>

#include "abso/archive.hpp"
#include "abso/attention.hpp"
#include "abso/benchmarks.hpp"
#include "abso/core.hpp"

namespace abso {

enum class Mode { ABSO, BSO_OS };

enum class SelectionCriterion { Saliency, Fitness };

Mode parse_mode(const std::string& name);
std::string to_string(Mode mode);

/// All loop parameters. Defaults follow the reference parameter table;
/// max_iterations == 0 derives T = max_fes / population_size at run time.
struct EngineConfig {
    Mode mode = Mode::ABSO;
    std::size_t population_size = 100;
    std::optional<std::size_t> max_iterations;  // unset derives max_fes / n
    double perc_e = 0.1;   // fraction clustered into the salient/elitist class
    double p_e = 0.8;      // probability of generating from the salient class
    double p_one = 0.8;    // probability of the one-parent form
    double p_d = 0.1;      // per-iteration disruption probability
    double k = 25.0;       // slope divisor of the step-size schedule
    std::size_t t_prime = 5;  // stagnation window for redistribution

    /// ABSO selects survivors on saliency, BSO_OS on fitness; settable for
    /// ablation.
    SelectionCriterion selection() const;
    bool selection_overridden = false;
    SelectionCriterion selection_override = SelectionCriterion::Saliency;

    /// The archive and the redistribution strategy belong to ABSO; the
    /// baseline mode runs without either by default. Both are settable for
    /// ablation.
    bool archive_overridden = false;
    bool archive_override = true;
    bool archive_enabled() const;
    bool redistribution_overridden = false;
    bool redistribution_override = true;
    bool redistribution() const;

    void validate() const;
};

/// One per-generation trace record.
struct TraceRecord {
    std::size_t generation = 0;
    double best_fitness = 0.0;  // max over population ∪ archive
    double max_saliency = 0.0;  // max over population
    std::size_t archive_size = 0;
    std::uint64_t fes_used = 0;
};

struct RunTrace {
    std::vector<TraceRecord> records;
};

struct RunResult {
    Archive archive;
    RunTrace trace;
    std::uint64_t fes_used = 0;
    std::size_t generations_completed = 0;
};

/// Step-size schedule: logsig((T/2 - t) / k) scaled by one uniform draw.
double step_size(std::size_t t, std::size_t max_iterations,
                 const EngineConfig& cfg, RandomSource& rng);

/// Working state of one run, exposed for the operator-level tests.
struct GenerationState {
    std::size_t generation = 0;
    std::vector<Individual> population;
    std::vector<std::size_t> salient_indices;
    std::vector<std::size_t> non_salient_indices;
    std::size_t stagnation_counter = 0;
};

/// Partition population indices into the salient class (top max(1,
/// round(perc_e * n)) by saliency; by fitness in BSO_OS mode) and the rest.
/// Ties break by lower index.
void cluster_by_attention(GenerationState& state, const EngineConfig& cfg);

/// Pick the base position per the two-class generation rule: salient class
/// with probability p_e; one parent with probability p_one, else the convex
/// combination r*x1 + (1-r)*x2 of two distinct class members.
Position select_base(const GenerationState& state, const EngineConfig& cfg,
                     RandomSource& rng);

/// Survivor selection: higher saliency wins in ABSO mode, higher fitness in
/// BSO_OS mode; exact ties keep the candidate (the newer solution).
const Individual& select_survivor(const Individual& existing,
                                  const Individual& candidate,
                                  const EngineConfig& cfg);

/// With probability p_d, re-initialize one uniformly chosen individual
/// inside the bounds (fitness/saliency reset pending evaluation). Returns
/// the replaced index when disruption fired. Draw order: one uniform for
/// the branch, one index draw, then dim coordinate draws.
std::optional<std::size_t> maybe_disrupt(GenerationState& state,
                                         const Bounds& bounds,
                                         const EngineConfig& cfg,
                                         RandomSource& rng);

/// When the archive has been unchanged for t' iterations, resample every
/// non-salient-class member uniformly in bounds (fitness/saliency reset)
/// and reset the counter; salient members are untouched. Returns true iff
/// redistribution fired.
bool maybe_redistribute(GenerationState& state, const Bounds& bounds,
                        const EngineConfig& cfg, RandomSource& rng);

/// Execute one full run. The draw order per generated individual is: base
/// selection draws, one step-size draw, then dim standard-normal draws.
RunResult run(const BenchmarkFunction& function, const EngineConfig& engine_cfg,
              const SaliencyConfig& saliency_cfg, const ArchiveConfig& archive_cfg,
              std::uint64_t seed);

}  // namespace abso
