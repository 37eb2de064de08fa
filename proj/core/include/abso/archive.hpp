#pragma once

#include <vector>

#include "abso/core.hpp"

namespace abso {

/// Refinement radius of the archive; defaults to the function's niching
/// radius.
struct ArchiveConfig {
    double rho = 0.01;

    void validate() const;
};

/// An absolutely salient solution at the moment it was archived.
/// Saliency is frozen at insertion and never re-scored.
struct ArchivedSolution {
    Position position;
    double fitness = 0.0;
    double saliency = 0.0;
    int generation_found = 0;
};

/// The algorithm's output set: absolutely salient solutions kept pairwise
/// at least rho apart.
class Archive {
  public:
    Archive() = default;

    /// Reconstruct from previously serialized entries (artifact reload).
    explicit Archive(std::vector<ArchivedSolution> entries)
        : entries_(std::move(entries)) {}

    /// Insert a candidate, refining by the rho rule: conflicting entries
    /// (closer than rho) are replaced only if the candidate is at least as
    /// salient as each of them; exact saliency ties go to the candidate
    /// (the newer solution). Returns true iff the stored set changed.
    bool try_insert(const ArchivedSolution& candidate, const ArchiveConfig& cfg);

    [[nodiscard]] const std::vector<ArchivedSolution>& entries() const {
        return entries_;
    }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] bool empty() const { return entries_.empty(); }

  private:
    std::vector<ArchivedSolution> entries_;
};

struct OptimaRegistry;

/// Indices of registry optima matched by the archive. Optima are indexed
/// globals first, then locals. An optimum is matched when some entry lies
/// within `radius` of it with fitness within `epsilon` of the optimum's;
/// each entry matches at most its nearest optimum.
std::vector<std::size_t> matched_optima(const Archive& archive,
                                        const OptimaRegistry& registry,
                                        double epsilon, double radius);

}  // namespace abso
