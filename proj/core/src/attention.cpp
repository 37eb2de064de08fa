#include "abso/attention.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace abso {
namespace {

NeighborSet k_smallest(std::vector<std::pair<double, std::size_t>>& cand,
                       std::size_t m) {
    // Stable ordering: distance first, then lower pool index.
    const std::size_t k = std::min(m, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + k, cand.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first < b.first;
                          return a.second < b.second;
                      });
    NeighborSet out;
    out.indices.reserve(k);
    out.distances.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.distances.push_back(cand[i].first);
        out.indices.push_back(cand[i].second);
    }
    return out;
}

double require_fitness(const Individual& ind) {
    if (!ind.fitness)
        throw std::invalid_argument("saliency: pool member has unset fitness");
    return *ind.fitness;
}

}  // namespace

void SaliencyConfig::validate() const {
    if (m < 1) throw std::invalid_argument("SaliencyConfig: m must be >= 1");
    if (!(sigma_sq > 0.0))
        throw std::invalid_argument("SaliencyConfig: sigma_sq must be positive");
}

NeighborSet nearest_neighbors(std::size_t query_index,
                              std::span<const Individual> pool,
                              const SaliencyConfig& cfg) {
    if (query_index >= pool.size())
        throw std::invalid_argument("nearest_neighbors: query index out of range");
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(pool.size() - 1);
    const Position& q = pool[query_index].position;
    for (std::size_t j = 0; j < pool.size(); ++j) {
        if (j == query_index) continue;
        cand.emplace_back(euclidean_distance(q, pool[j].position), j);
    }
    return k_smallest(cand, cfg.m);
}

NeighborSet nearest_neighbors_of_point(const Position& query,
                                       std::span<const Individual> pool,
                                       const SaliencyConfig& cfg) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(pool.size());
    for (std::size_t j = 0; j < pool.size(); ++j)
        cand.emplace_back(euclidean_distance(query, pool[j].position), j);
    return k_smallest(cand, cfg.m);
}

double weight(double d, const SaliencyConfig& cfg) {
    if (d < 0.0) throw std::invalid_argument("weight: negative distance");
    return std::exp(-d / cfg.sigma_sq);
}

namespace {

double saliency_over(const NeighborSet& nb, double query_fitness,
                     std::span<const Individual> pool, const SaliencyConfig& cfg) {
    if (nb.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t k = 0; k < nb.size(); ++k) {
        const double fj = require_fitness(pool[nb.indices[k]]);
        acc += weight(nb.distances[k], cfg) * (query_fitness - fj);
    }
    return acc / static_cast<double>(nb.size());
}

bool dominates_neighborhood(const NeighborSet& nb, double query_fitness,
                            std::span<const Individual> pool, Sense sense) {
    if (nb.empty()) return false;
    for (std::size_t idx : nb.indices) {
        const double fj = require_fitness(pool[idx]);
        const bool beats = sense == Sense::Maximize ? query_fitness > fj
                                                    : query_fitness < fj;
        if (!beats) return false;
    }
    return true;
}

}  // namespace

double saliency(std::size_t query_index, std::span<const Individual> pool,
                const SaliencyConfig& cfg) {
    cfg.validate();
    const double fi = require_fitness(pool[query_index]);
    return saliency_over(nearest_neighbors(query_index, pool, cfg), fi, pool, cfg);
}

double saliency_of_point(const Position& query, double fitness,
                         std::span<const Individual> pool,
                         const SaliencyConfig& cfg) {
    cfg.validate();
    return saliency_over(nearest_neighbors_of_point(query, pool, cfg), fitness,
                         pool, cfg);
}

bool is_absolutely_salient(std::size_t query_index,
                           std::span<const Individual> pool,
                           const SaliencyConfig& cfg) {
    cfg.validate();
    const double fi = require_fitness(pool[query_index]);
    return dominates_neighborhood(nearest_neighbors(query_index, pool, cfg), fi,
                                  pool, cfg.sense);
}

std::vector<double> batch_saliency(std::span<const Individual> population,
                                   std::span<const Individual> archive,
                                   const SaliencyConfig& cfg) {
    cfg.validate();
    std::vector<Individual> pool(population.begin(), population.end());
    pool.insert(pool.end(), archive.begin(), archive.end());
    std::vector<double> out(population.size());
    for (std::size_t i = 0; i < population.size(); ++i)
        out[i] = saliency(i, pool, cfg);
    return out;
}

}  // namespace abso
