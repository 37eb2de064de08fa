#include "abso/archive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "abso/benchmarks.hpp"

namespace abso {

void ArchiveConfig::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("ArchiveConfig: rho must be positive");
}

bool Archive::try_insert(const ArchivedSolution& candidate, const ArchiveConfig& cfg) {
    cfg.validate();

    std::vector<std::size_t> conflicts;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (euclidean_distance(entries_[i].position, candidate.position) < cfg.rho)
            conflicts.push_back(i);
    }

    if (conflicts.empty()) {
        entries_.push_back(candidate);
        return true;
    }

    // Candidate must beat every conflicting entry (ties go to the newer
    // candidate) or it is rejected; this keeps pairwise separation intact.
    for (std::size_t i : conflicts) {
        if (entries_[i].saliency > candidate.saliency) return false;
    }

    // Identical-candidate idempotence: replacing an entry with an equal one
    // is not a mutation.
    if (conflicts.size() == 1) {
        const ArchivedSolution& e = entries_[conflicts[0]];
        if (e.position == candidate.position && e.fitness == candidate.fitness &&
            e.saliency == candidate.saliency &&
            e.generation_found == candidate.generation_found)
            return false;
    }

    for (auto it = conflicts.rbegin(); it != conflicts.rend(); ++it)
        entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(*it));
    entries_.push_back(candidate);
    return true;
}

std::vector<std::size_t> matched_optima(const Archive& archive,
                                        const OptimaRegistry& registry,
                                        double epsilon, double radius) {
    if (!(epsilon > 0.0))
        throw std::invalid_argument("matched_optima: epsilon must be positive");

    std::vector<const Position*> optima;
    std::vector<double> fit;
    for (std::size_t i = 0; i < registry.global_optima.size(); ++i) {
        optima.push_back(&registry.global_optima[i]);
        fit.push_back(registry.fitness_at_global[i]);
    }
    for (std::size_t i = 0; i < registry.local_optima.size(); ++i) {
        optima.push_back(&registry.local_optima[i]);
        fit.push_back(registry.fitness_at_local[i]);
    }

    std::set<std::size_t> matched;
    for (const auto& entry : archive.entries()) {
        std::size_t best = optima.size();
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < optima.size(); ++k) {
            const double d = euclidean_distance(entry.position, *optima[k]);
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        if (best < optima.size() && best_d <= radius &&
            std::abs(entry.fitness - fit[best]) <= epsilon)
            matched.insert(best);
    }
    return {matched.begin(), matched.end()};
}

}  // namespace abso
