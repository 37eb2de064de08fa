#include "abso/core.hpp"

#include <algorithm>
#include <cmath>

namespace abso {

Bounds::Bounds(Position lo, Position hi) : lower(std::move(lo)), upper(std::move(hi)) {
    if (lower.size() != upper.size())
        throw std::invalid_argument("Bounds: lower/upper dimension mismatch");
    if (lower.empty()) throw std::invalid_argument("Bounds: zero dimension");
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (!(lower[i] < upper[i]))
            throw std::invalid_argument("Bounds: lower must be strictly below upper");
    }
}

bool Bounds::contains(const Position& p) const {
    if (p.size() != dim()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < lower[i] || p[i] > upper[i]) return false;
    }
    return true;
}

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t RandomSource::next() { return engine_(); }

double RandomSource::uniform01() {
    // 53 high bits -> [0,1); identical on every platform for a given seed.
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
}

double RandomSource::normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::size_t RandomSource::uniform_index(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
}

EvaluationBudget::EvaluationBudget(std::uint64_t max_fes) : max_(max_fes) {
    if (max_fes == 0) throw std::invalid_argument("EvaluationBudget: max_fes must be positive");
}

void EvaluationBudget::consume() {
    if (used_ >= max_) throw BudgetExhausted{};
    ++used_;
}

Position clamp_to_bounds(const Position& p, const Bounds& b) {
    if (p.size() != b.dim())
        throw std::invalid_argument("clamp_to_bounds: dimension mismatch");
    Position out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        out[i] = std::clamp(p[i], b.lower[i], b.upper[i]);
    return out;
}

Position uniform_position(const Bounds& b, RandomSource& rng) {
    Position out(b.dim());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = b.lower[i] + (b.upper[i] - b.lower[i]) * rng.uniform01();
    return out;
}

double euclidean_distance(const Position& a, const Position& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean_distance: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

}  // namespace abso
