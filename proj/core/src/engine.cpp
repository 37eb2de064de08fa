#include "abso/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace abso {

Mode parse_mode(const std::string& name) {
    if (name == "ABSO") return Mode::ABSO;
    if (name == "BSO_OS") return Mode::BSO_OS;
    throw std::invalid_argument("unknown mode: " + name);
}

std::string to_string(Mode mode) {
    return mode == Mode::ABSO ? "ABSO" : "BSO_OS";
}

SelectionCriterion EngineConfig::selection() const {
    if (selection_overridden) return selection_override;
    return mode == Mode::ABSO ? SelectionCriterion::Saliency
                              : SelectionCriterion::Fitness;
}

bool EngineConfig::redistribution() const {
    if (redistribution_overridden) return redistribution_override;
    return mode == Mode::ABSO;
}

bool EngineConfig::archive_enabled() const {
    if (archive_overridden) return archive_override;
    return mode == Mode::ABSO;
}

void EngineConfig::validate() const {
    auto prob = [](double v, const char* what) {
        if (!(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument(std::string("EngineConfig: ") + what +
                                        " must be in [0,1]");
    };
    prob(p_e, "p_e");
    prob(p_one, "p_one");
    prob(p_d, "p_d");
    if (!(perc_e > 0.0 && perc_e < 1.0))
        throw std::invalid_argument("EngineConfig: perc_e must be in (0,1)");
    if (population_size < 2)
        throw std::invalid_argument("EngineConfig: population_size must be >= 2");
    if (!(k > 0.0)) throw std::invalid_argument("EngineConfig: k must be positive");
    if (t_prime < 1)
        throw std::invalid_argument("EngineConfig: t_prime must be >= 1");
}

namespace {

double logsig(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double score_of(const Individual& ind, const EngineConfig& cfg) {
    if (cfg.mode == Mode::BSO_OS) return ind.fitness.value();
    return ind.saliency.value();
}

}  // namespace

double step_size(std::size_t t, std::size_t max_iterations,
                 const EngineConfig& cfg, RandomSource& rng) {
    const double x = (static_cast<double>(max_iterations) / 2.0 -
                      static_cast<double>(t)) /
                     cfg.k;
    return logsig(x) * rng.uniform01();
}

void cluster_by_attention(GenerationState& state, const EngineConfig& cfg) {
    const std::size_t n = state.population.size();
    std::size_t s = static_cast<std::size_t>(
        std::llround(cfg.perc_e * static_cast<double>(n)));
    s = std::max<std::size_t>(1, std::min(s, n - 1));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return score_of(state.population[a], cfg) >
               score_of(state.population[b], cfg);
    });

    state.salient_indices.assign(order.begin(), order.begin() + s);
    state.non_salient_indices.assign(order.begin() + s, order.end());
    std::sort(state.salient_indices.begin(), state.salient_indices.end());
    std::sort(state.non_salient_indices.begin(), state.non_salient_indices.end());
}

Position select_base(const GenerationState& state, const EngineConfig& cfg,
                     RandomSource& rng) {
    const bool from_salient = rng.uniform01() < cfg.p_e;
    const auto& cls =
        from_salient ? state.salient_indices : state.non_salient_indices;
    if (cls.empty())
        throw std::invalid_argument("select_base: empty class");

    const bool one_parent = rng.uniform01() < cfg.p_one || cls.size() < 2;
    if (one_parent) {
        const std::size_t pick = cls[rng.uniform_index(cls.size())];
        return state.population[pick].position;
    }

    const std::size_t i1 = rng.uniform_index(cls.size());
    std::size_t i2 = rng.uniform_index(cls.size() - 1);
    if (i2 >= i1) ++i2;
    const double r = rng.uniform01();
    const Position& x1 = state.population[cls[i1]].position;
    const Position& x2 = state.population[cls[i2]].position;
    Position out(x1.size());
    for (std::size_t d = 0; d < out.size(); ++d)
        out[d] = r * x1[d] + (1.0 - r) * x2[d];
    return out;
}

const Individual& select_survivor(const Individual& existing,
                                  const Individual& candidate,
                                  const EngineConfig& cfg) {
    const double e = cfg.selection() == SelectionCriterion::Saliency
                         ? existing.saliency.value()
                         : existing.fitness.value();
    const double c = cfg.selection() == SelectionCriterion::Saliency
                         ? candidate.saliency.value()
                         : candidate.fitness.value();
    // Ties keep the candidate, the newer solution.
    return e > c ? existing : candidate;
}

std::optional<std::size_t> maybe_disrupt(GenerationState& state,
                                         const Bounds& bounds,
                                         const EngineConfig& cfg,
                                         RandomSource& rng) {
    if (!(rng.uniform01() < cfg.p_d)) return std::nullopt;
    const std::size_t idx = rng.uniform_index(state.population.size());
    auto& ind = state.population[idx];
    ind.position = uniform_position(bounds, rng);
    ind.fitness.reset();
    ind.saliency.reset();
    return idx;
}

bool maybe_redistribute(GenerationState& state, const Bounds& bounds,
                        const EngineConfig& cfg, RandomSource& rng) {
    if (state.stagnation_counter < cfg.t_prime) return false;
    for (std::size_t idx : state.non_salient_indices) {
        auto& ind = state.population[idx];
        ind.position = uniform_position(bounds, rng);
        ind.fitness.reset();
        ind.saliency.reset();
    }
    state.stagnation_counter = 0;
    return true;
}

namespace {

std::vector<Individual> pooled(const std::vector<Individual>& population,
                               const Archive& archive) {
    std::vector<Individual> pool = population;
    pool.reserve(population.size() + archive.size());
    for (const auto& e : archive.entries()) {
        Individual ind;
        ind.position = e.position;
        ind.fitness = e.fitness;
        ind.saliency = e.saliency;
        ind.birth_generation = e.generation_found;
        pool.push_back(std::move(ind));
    }
    return pool;
}

TraceRecord make_record(std::size_t t, const std::vector<Individual>& population,
                        const Archive& archive, const EvaluationBudget& budget) {
    TraceRecord rec;
    rec.generation = t;
    rec.archive_size = archive.size();
    rec.fes_used = budget.used();
    double best = -std::numeric_limits<double>::infinity();
    double max_sal = -std::numeric_limits<double>::infinity();
    for (const auto& ind : population) {
        if (ind.fitness) best = std::max(best, *ind.fitness);
        if (ind.saliency) max_sal = std::max(max_sal, *ind.saliency);
    }
    for (const auto& e : archive.entries()) best = std::max(best, e.fitness);
    rec.best_fitness = best;
    rec.max_saliency = std::isfinite(max_sal) ? max_sal : 0.0;
    return rec;
}

}  // namespace

RunResult run(const BenchmarkFunction& function, const EngineConfig& engine_cfg,
              const SaliencyConfig& saliency_cfg, const ArchiveConfig& archive_cfg,
              std::uint64_t seed) {
    engine_cfg.validate();
    saliency_cfg.validate();
    archive_cfg.validate();

    const std::size_t n = engine_cfg.population_size;
    const std::size_t T = engine_cfg.max_iterations
                              ? *engine_cfg.max_iterations
                              : static_cast<std::size_t>(function.max_fes / n);

    RandomSource rng(seed);
    EvaluationBudget budget(function.max_fes);

    GenerationState state;
    state.population.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        state.population[i].position = uniform_position(function.bounds, rng);

    RunResult result;

    auto evaluate = [&](Individual& ind) {
        ind.fitness = function.evaluate(ind.position, budget);
    };

    std::size_t t = 0;
    try {
        for (;;) {
            // Fitness of any member not yet evaluated (initial population).
            for (auto& ind : state.population)
                if (!ind.fitness) evaluate(ind);

            // Saliency of every member against population ∪ archive.
            {
                auto pool = pooled(state.population, result.archive);
                for (std::size_t i = 0; i < n; ++i)
                    state.population[i].saliency = saliency(i, pool, saliency_cfg);

                // Archive every absolutely salient member.
                bool changed = false;
                if (engine_cfg.archive_enabled()) {
                    for (std::size_t i = 0; i < n; ++i) {
                        if (!is_absolutely_salient(i, pool, saliency_cfg)) continue;
                        ArchivedSolution sol{state.population[i].position,
                                             *state.population[i].fitness,
                                             *state.population[i].saliency,
                                             static_cast<int>(t)};
                        changed |= result.archive.try_insert(sol, archive_cfg);
                    }
                }
                state.stagnation_counter =
                    changed ? 0 : state.stagnation_counter + 1;
            }

            result.trace.records.push_back(
                make_record(t, state.population, result.archive, budget));
            result.generations_completed = t;
            if (t >= T) break;

            cluster_by_attention(state, engine_cfg);

            // Redistribution: resample the non-salient class after t'
            // iterations without archive change, then evaluate the resampled
            // members immediately.
            if (engine_cfg.redistribution() &&
                maybe_redistribute(state, function.bounds, engine_cfg, rng)) {
                for (std::size_t idx : state.non_salient_indices) {
                    state.population[idx].birth_generation =
                        static_cast<int>(t + 1);
                    evaluate(state.population[idx]);
                }
                auto pool = pooled(state.population, result.archive);
                for (std::size_t idx : state.non_salient_indices)
                    state.population[idx].saliency =
                        saliency(idx, pool, saliency_cfg);
            }

            // Disruption: re-initialize one uniformly chosen individual.
            if (auto idx = maybe_disrupt(state, function.bounds, engine_cfg, rng)) {
                auto& ind = state.population[*idx];
                ind.birth_generation = static_cast<int>(t + 1);
                evaluate(ind);
                auto pool = pooled(state.population, result.archive);
                ind.saliency = saliency(*idx, pool, saliency_cfg);
            }

            // New individuals: candidates score against the frozen pre-update
            // snapshot ∪ archive. Per-candidate draw order: base selection
            // draws, one step-size draw, dim normal draws.
            const auto snapshot = pooled(state.population, result.archive);
            for (std::size_t i = 0; i < n; ++i) {
                Individual candidate;
                candidate.birth_generation = static_cast<int>(t + 1);
                Position base = select_base(state, engine_cfg, rng);
                const double xi = step_size(t, T, engine_cfg, rng);
                for (std::size_t d = 0; d < base.size(); ++d)
                    base[d] += xi * rng.normal();
                candidate.position = clamp_to_bounds(base, function.bounds);
                evaluate(candidate);
                candidate.saliency = saliency_of_point(
                    candidate.position, *candidate.fitness, snapshot, saliency_cfg);
                state.population[i] =
                    select_survivor(state.population[i], candidate, engine_cfg);
            }
            ++t;
            state.generation = t;
        }
    } catch (const BudgetExhausted&) {
        // Mid-generation exhaustion: survivors chosen so far stand; emit a
        // final record for the partial generation.
        result.trace.records.push_back(
            make_record(t + 1, state.population, result.archive, budget));
        result.generations_completed = t;
    }

    result.fes_used = budget.used();
    return result;
}

}  // namespace abso
