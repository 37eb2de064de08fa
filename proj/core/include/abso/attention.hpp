#pragma once

#include <span>
#include <vector>

#include "abso/core.hpp"

namespace abso {

enum class Sense { Maximize, Minimize };

/// Parameters of the saliency measure: neighborhood size m and the
/// attenuation coefficient sigma^2 of the distance weight.
struct SaliencyConfig {
    std::size_t m = 20;
    double sigma_sq = 0.4;
    Sense sense = Sense::Maximize;

    void validate() const;
};

/// The m nearest pool members of one query, self excluded.
/// Distances are sorted non-decreasing; ties break by lower pool index.
struct NeighborSet {
    std::vector<std::size_t> indices;
    std::vector<double> distances;

    [[nodiscard]] bool empty() const { return indices.empty(); }
    [[nodiscard]] std::size_t size() const { return indices.size(); }
};

/// Exact KNN by linear scan over the pool. The neighbor count caps at
/// pool_size - 1; a pool of size 1 yields an empty set.
NeighborSet nearest_neighbors(std::size_t query_index,
                              std::span<const Individual> pool,
                              const SaliencyConfig& cfg);

/// Neighbors of an external query point (the point is not a pool member,
/// so nothing is excluded).
NeighborSet nearest_neighbors_of_point(const Position& query,
                                       std::span<const Individual> pool,
                                       const SaliencyConfig& cfg);

/// Distance weight exp(-d / sigma^2): farther neighbors contribute less.
double weight(double d, const SaliencyConfig& cfg);

/// Saliency of pool[query_index]: the weighted mean fitness contrast
/// against its m nearest neighbors. Empty neighborhood yields 0.
double saliency(std::size_t query_index, std::span<const Individual> pool,
                const SaliencyConfig& cfg);

/// Saliency of an external point with known fitness against the pool.
double saliency_of_point(const Position& query, double fitness,
                         std::span<const Individual> pool,
                         const SaliencyConfig& cfg);

/// True iff the query's fitness strictly beats every neighbor in its
/// m-neighborhood. Empty neighborhood yields false.
bool is_absolutely_salient(std::size_t query_index,
                           std::span<const Individual> pool,
                           const SaliencyConfig& cfg);

/// Saliency of every population member against population ∪ archive.
/// Archive members are neighbor candidates only; they are not re-scored.
std::vector<double> batch_saliency(std::span<const Individual> population,
                                   std::span<const Individual> archive,
                                   const SaliencyConfig& cfg);

}  // namespace abso
