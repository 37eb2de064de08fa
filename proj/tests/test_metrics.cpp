#include <doctest.h>

#include "abso/metrics.hpp"

using namespace abso;

namespace {

RunTrace trace_of(std::initializer_list<double> best) {
    RunTrace t;
    std::size_t g = 0;
    for (double v : best) {
        TraceRecord rec;
        rec.generation = g++;
        rec.best_fitness = v;
        t.records.push_back(rec);
    }
    return t;
}

}  // namespace

TEST_CASE("convergence_generation") {
    const double ph = 1.0;
    const double tol = 1e-4;

    CHECK(convergence_generation(trace_of({1.0, 1.0}), ph, tol) == 0);
    CHECK(convergence_generation(trace_of({0.2, 0.5, 0.9}), ph, tol) ==
          std::nullopt);
    CHECK(convergence_generation(RunTrace{}, ph, tol) == std::nullopt);

    // monotone trace crossing the threshold mid-way
    RunTrace t;
    for (std::size_t g = 0; g <= 100; ++g) {
        TraceRecord rec;
        rec.generation = g;
        rec.best_fitness = g >= 87 ? 1.0 : 0.5;
        t.records.push_back(rec);
    }
    CHECK(convergence_generation(t, ph, tol) == 87);

    CHECK_THROWS_AS(convergence_generation(t, ph, 0.0), std::invalid_argument);
}

TEST_CASE("convergence_generation is antitone in tol") {
    RunTrace t;
    for (std::size_t g = 0; g <= 50; ++g) {
        TraceRecord rec;
        rec.generation = g;
        rec.best_fitness = static_cast<double>(g) / 50.0;
        t.records.push_back(rec);
    }
    std::optional<std::size_t> prev;
    for (double tol : {1e-4, 1e-2, 0.1, 0.5}) {
        const auto g = convergence_generation(t, 1.0, tol);
        if (prev && g) CHECK(*g <= *prev);
        if (g) prev = g;
    }
}

TEST_CASE("default tolerance is scale aware") {
    CHECK(default_convergence_tol(1.0) == doctest::Approx(1e-4));
    CHECK(default_convergence_tol(200.0) == doctest::Approx(0.02));
    CHECK(default_convergence_tol(-2.0) == doctest::Approx(2e-4));
}

TEST_CASE("peak_ratio arithmetic") {
    const auto registry = registered_optima(FunctionId::F2);
    ArchiveConfig acfg{0.01};

    SUBCASE("empty archive") {
        Archive a;
        const auto pr = peak_ratio(a, registry, 0.1, 0.01);
        CHECK(pr.global_only == 0.0);
        CHECK(pr.combined == 0.0);
    }

    SUBCASE("4 of 5 matched gives 0.8") {
        Archive a;
        for (std::size_t i = 0; i < 4; ++i)
            a.try_insert({registry.global_optima[i], registry.fitness_at_global[i],
                          0.1, 0},
                         acfg);
        const auto pr = peak_ratio(a, registry, 0.1, 0.01);
        CHECK(pr.global_only == doctest::Approx(0.8));
    }

    SUBCASE("F1 global and combined ratios are tracked separately") {
        const auto r1 = registered_optima(FunctionId::F1);
        Archive a;
        ArchiveConfig c1{0.01};
        for (std::size_t i = 0; i < r1.global_optima.size(); ++i)
            a.try_insert({r1.global_optima[i], r1.fitness_at_global[i], 0.1, 0}, c1);
        auto pr = peak_ratio(a, r1, 0.1, 0.01);
        CHECK(pr.global_only == 1.0);
        CHECK(pr.combined == doctest::Approx(2.0 / 5.0));
        for (std::size_t i = 0; i < r1.local_optima.size(); ++i)
            a.try_insert({r1.local_optima[i], r1.fitness_at_local[i], 0.1, 0}, c1);
        pr = peak_ratio(a, r1, 0.1, 0.01);
        CHECK(pr.combined == 1.0);
    }
}

TEST_CASE("peak_ratio is monotone in epsilon") {
    const auto registry = registered_optima(FunctionId::F2);
    ArchiveConfig acfg{0.01};
    Archive a;
    // slightly off-peak entries with imperfect fitness
    for (std::size_t i = 0; i < 5; ++i) {
        Position p = registry.global_optima[i];
        a.try_insert({p, registry.fitness_at_global[i] - 0.02 * double(i), 0.1, 0},
                     acfg);
    }
    double prev = -1.0;
    for (double eps : {1e-3, 1e-2, 0.05, 0.1}) {
        const auto pr = peak_ratio(a, registry, eps, 0.01);
        CHECK(pr.combined >= prev);
        prev = pr.combined;
    }
}

TEST_CASE("aggregate") {
    SUBCASE("identical runs collapse to the single value") {
        RunMeasurement m;
        m.peak_ratio_global = 1.0;
        m.peak_ratio_combined = 1.0;
        m.convergence_generation = 17;
        const auto agg = aggregate(std::vector<RunMeasurement>(30, m));
        CHECK(agg.runs == 30);
        CHECK(agg.success_rate == 1.0);
        CHECK(agg.mean_convergence_generation == doctest::Approx(17.0));
        CHECK(agg.min_convergence_generation == 17);
        CHECK(agg.max_convergence_generation == 17);
    }

    SUBCASE("mean of {100, 200} is 150") {
        RunMeasurement a, b;
        a.convergence_generation = 100;
        b.convergence_generation = 200;
        a.peak_ratio_global = 0.5;
        b.peak_ratio_global = 1.0;
        const auto agg = aggregate({a, b});
        CHECK(agg.mean_convergence_generation == doctest::Approx(150.0));
        CHECK(agg.success_rate == doctest::Approx(0.5));
        CHECK(agg.mean_peak_ratio_global == doctest::Approx(0.75));
    }

    SUBCASE("non-converged runs lower the convergence rate") {
        RunMeasurement a, b;
        a.convergence_generation = 10;
        const auto agg = aggregate({a, b});
        CHECK(agg.convergence_rate == doctest::Approx(0.5));
        CHECK(agg.mean_convergence_generation == doctest::Approx(10.0));
    }

    CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
}
