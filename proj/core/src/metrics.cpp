#include "abso/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace abso {

std::optional<std::size_t> convergence_generation(const RunTrace& trace,
                                                  double peak_height, double tol) {
    if (!(tol > 0.0))
        throw std::invalid_argument("convergence_generation: tol must be positive");
    for (const auto& rec : trace.records) {
        if (rec.best_fitness >= peak_height - tol) return rec.generation;
    }
    return std::nullopt;
}

double default_convergence_tol(double peak_height) {
    return 1e-4 * std::max(1.0, std::abs(peak_height));
}

PeakRatio peak_ratio(const Archive& archive, const OptimaRegistry& registry,
                     double epsilon, double radius) {
    if (registry.total() == 0)
        throw std::invalid_argument("peak_ratio: empty registry");
    const auto matched = matched_optima(archive, registry, epsilon, radius);
    const std::size_t n_global = registry.global_optima.size();
    std::size_t global_hits = 0;
    for (std::size_t idx : matched)
        if (idx < n_global) ++global_hits;
    PeakRatio pr;
    pr.global_only = n_global == 0
                         ? 0.0
                         : static_cast<double>(global_hits) /
                               static_cast<double>(n_global);
    pr.combined = static_cast<double>(matched.size()) /
                  static_cast<double>(registry.total());
    return pr;
}

RunMeasurement measure_run(const RunResult& result, const OptimaRegistry& registry,
                           double peak_height, double niching_radius,
                           double epsilon, double tol, std::uint64_t seed) {
    RunMeasurement m;
    m.seed = seed;
    const auto pr = peak_ratio(result.archive, registry, epsilon, niching_radius);
    m.peak_ratio_global = pr.global_only;
    m.peak_ratio_combined = pr.combined;
    m.convergence_generation = convergence_generation(result.trace, peak_height, tol);
    if (m.convergence_generation) {
        for (const auto& rec : result.trace.records) {
            if (rec.generation == *m.convergence_generation) {
                m.fes_at_convergence = rec.fes_used;
                break;
            }
        }
    }
    m.archive_size = result.archive.size();
    m.fes_used = result.fes_used;
    return m;
}

SuiteAggregate aggregate(const std::vector<RunMeasurement>& results) {
    if (results.empty())
        throw std::invalid_argument("aggregate: needs at least one run");
    SuiteAggregate agg;
    agg.runs = results.size();
    double sum_g = 0.0;
    double sum_c = 0.0;
    std::size_t successes = 0;
    std::size_t converged = 0;
    double conv_sum = 0.0;
    for (const auto& r : results) {
        sum_g += r.peak_ratio_global;
        sum_c += r.peak_ratio_combined;
        if (r.peak_ratio_global >= 1.0) ++successes;
        if (r.convergence_generation) {
            ++converged;
            const auto g = *r.convergence_generation;
            conv_sum += static_cast<double>(g);
            if (!agg.min_convergence_generation || g < *agg.min_convergence_generation)
                agg.min_convergence_generation = g;
            if (!agg.max_convergence_generation || g > *agg.max_convergence_generation)
                agg.max_convergence_generation = g;
        }
    }
    const auto n = static_cast<double>(results.size());
    agg.mean_peak_ratio_global = sum_g / n;
    agg.mean_peak_ratio_combined = sum_c / n;
    agg.success_rate = static_cast<double>(successes) / n;
    agg.convergence_rate = static_cast<double>(converged) / n;
    if (converged > 0)
        agg.mean_convergence_generation = conv_sum / static_cast<double>(converged);
    return agg;
}

}  // namespace abso
