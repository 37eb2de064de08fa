#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace abso {

/// A candidate point in the search space. Coordinates are problem units.
using Position = std::vector<double>;

/// Box constraints for the search space. lower[i] < upper[i] for all i.
struct Bounds {
    Position lower;
    Position upper;

    Bounds(Position lo, Position hi);

    [[nodiscard]] std::size_t dim() const { return lower.size(); }
    [[nodiscard]] bool contains(const Position& p) const;
};

/// One member of the population: a position with cached fitness and
/// cached saliency. Fitness must be set before saliency is computed.
struct Individual {
    Position position;
    std::optional<double> fitness;
    std::optional<double> saliency;
    int birth_generation = 0;
};

/// Deterministic random stream. One run owns exactly one RandomSource;
/// the engine documents its draw order so replays match bit for bit.
///
/// All transforms are implemented on top of the mt19937_64 output so the
/// stream is identical across platforms for a given seed.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed);

    /// Uniform real in [0, 1).
    double uniform01();

    /// Uniform real in [lo, hi).
    double uniform(double lo, double hi);

    /// Standard normal draw (Box-Muller, consumes two uniforms).
    double normal();

    /// Uniform integer in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t next();

    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Raised when an objective evaluation is requested past max_fes.
/// The engine catches it and finishes the run cleanly.
struct BudgetExhausted : std::runtime_error {
    BudgetExhausted() : std::runtime_error("evaluation budget exhausted") {}
};

/// Counts objective-function evaluations against MaxFes.
class EvaluationBudget {
  public:
    explicit EvaluationBudget(std::uint64_t max_fes);

    /// Consumes one evaluation. Throws BudgetExhausted if none remain.
    void consume();

    [[nodiscard]] std::uint64_t used() const { return used_; }
    [[nodiscard]] std::uint64_t max() const { return max_; }
    [[nodiscard]] bool exhausted() const { return used_ >= max_; }

  private:
    std::uint64_t max_;
    std::uint64_t used_ = 0;
};

/// Clamp each coordinate of p into the box b. Coordinates already inside
/// are unchanged.
Position clamp_to_bounds(const Position& p, const Bounds& b);

/// Sample a position uniformly inside the box, one uniform draw per
/// coordinate in index order.
Position uniform_position(const Bounds& b, RandomSource& rng);

/// Euclidean norm of a - b.
double euclidean_distance(const Position& a, const Position& b);

}  // namespace abso
