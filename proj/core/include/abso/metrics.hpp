#pragma once

#include <optional>
#include <vector>

#include "abso/archive.hpp"
#include "abso/benchmarks.hpp"
#include "abso/engine.hpp"

namespace abso {

/// First generation whose best fitness reaches peak_height - tol, or
/// nullopt if the trace never gets there.
std::optional<std::size_t> convergence_generation(const RunTrace& trace,
                                                  double peak_height, double tol);

/// Scale-aware default convergence tolerance: 1e-4 * max(1, |PH|).
double default_convergence_tol(double peak_height);

struct PeakRatio {
    double global_only = 0.0;   // matched globals / registered globals
    double combined = 0.0;      // matched optima / all registered optima
};

/// Fraction of registered optima matched by the archive at accuracy epsilon
/// within the function's niching radius.
PeakRatio peak_ratio(const Archive& archive, const OptimaRegistry& registry,
                     double epsilon, double radius);

/// Result of one (function, seed) run, as aggregated across a seed sweep.
struct RunMeasurement {
    std::uint64_t seed = 0;
    double peak_ratio_global = 0.0;
    double peak_ratio_combined = 0.0;
    std::optional<std::size_t> convergence_generation;
    std::optional<std::uint64_t> fes_at_convergence;
    std::size_t archive_size = 0;
    std::uint64_t fes_used = 0;
};

struct SuiteAggregate {
    std::size_t runs = 0;
    double mean_peak_ratio_global = 0.0;
    double mean_peak_ratio_combined = 0.0;
    double success_rate = 0.0;  // fraction of runs with global PR == 1
    double convergence_rate = 0.0;  // fraction of runs that converged
    std::optional<double> mean_convergence_generation;  // over converged runs
    std::optional<std::size_t> min_convergence_generation;
    std::optional<std::size_t> max_convergence_generation;
};

/// Aggregate per-run measurements for one function across seeds.
SuiteAggregate aggregate(const std::vector<RunMeasurement>& results);

/// Measure one finished run against the registry.
RunMeasurement measure_run(const RunResult& result, const OptimaRegistry& registry,
                           double peak_height, double niching_radius,
                           double epsilon, double tol, std::uint64_t seed);

}  // namespace abso
