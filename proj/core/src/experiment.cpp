#include "abso/experiment.hpp"

#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;

namespace abso {
namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const nlohmann::json& value) {
    auto bad = [&](const std::string& why) {
        throw std::invalid_argument("config key '" + key + "': " + why);
    };
    try {
        if (key == "functions") {
            cfg.functions.clear();
            for (const auto& v : value)
                cfg.functions.push_back(parse_function_id(v.get<std::string>()));
        } else if (key == "mode") {
            cfg.mode = parse_mode(value.get<std::string>());
            cfg.engine.mode = cfg.mode;
        } else if (key == "seeds") {
            cfg.seeds = value.get<std::vector<std::uint64_t>>();
        } else if (key == "seed_count") {
            const auto count = value.get<std::uint64_t>();
            if (count == 0) bad("must be positive");
            const std::uint64_t base = cfg.seeds.empty() ? 1 : cfg.seeds.front();
            cfg.seeds.clear();
            for (std::uint64_t i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
        } else if (key == "base_seed") {
            const auto base = value.get<std::uint64_t>();
            const std::size_t count = cfg.seeds.empty() ? 1 : cfg.seeds.size();
            cfg.seeds.clear();
            for (std::uint64_t i = 0; i < count; ++i) cfg.seeds.push_back(base + i);
        } else if (key == "out_dir") {
            cfg.out_dir = value.get<std::string>();
        } else if (key == "epsilon") {
            cfg.epsilon = value.get<double>();
            if (!(cfg.epsilon > 0)) bad("must be positive");
        } else if (key == "tol") {
            cfg.tol = value.get<double>();
            if (!(*cfg.tol > 0)) bad("must be positive");
        } else if (key == "workers") {
            cfg.workers = value.get<std::size_t>();
        } else if (key == "population_size") {
            cfg.engine.population_size = value.get<std::size_t>();
        } else if (key == "max_iterations") {
            cfg.engine.max_iterations = value.get<std::size_t>();
        } else if (key == "perc_e") {
            cfg.engine.perc_e = value.get<double>();
        } else if (key == "p_e") {
            cfg.engine.p_e = value.get<double>();
        } else if (key == "p_one") {
            cfg.engine.p_one = value.get<double>();
        } else if (key == "p_d") {
            cfg.engine.p_d = value.get<double>();
        } else if (key == "k") {
            cfg.engine.k = value.get<double>();
        } else if (key == "t_prime") {
            cfg.engine.t_prime = value.get<std::size_t>();
        } else if (key == "m") {
            cfg.saliency.m = value.get<std::size_t>();
        } else if (key == "sigma_sq") {
            cfg.saliency.sigma_sq = value.get<double>();
        } else if (key == "rho") {
            cfg.rho_override = value.get<double>();
            if (!(*cfg.rho_override > 0)) bad("must be positive");
        } else if (key == "selection") {
            const auto s = value.get<std::string>();
            if (s != "saliency" && s != "fitness") bad("must be 'saliency' or 'fitness'");
            cfg.engine.selection_overridden = true;
            cfg.engine.selection_override = s == "saliency"
                                                ? SelectionCriterion::Saliency
                                                : SelectionCriterion::Fitness;
        } else if (key == "redistribution") {
            cfg.engine.redistribution_overridden = true;
            cfg.engine.redistribution_override = value.get<bool>();
        } else if (key == "archive_enabled") {
            cfg.engine.archive_overridden = true;
            cfg.engine.archive_override = value.get<bool>();
        } else {
            bad("unknown key");
        }
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("bad value (") + e.what() + ")");
    }
}

void apply_document(ExperimentConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object())
        throw std::invalid_argument("config: expected a flat JSON object");
    // seed_count/base_seed interact; apply base_seed first, then seed_count,
    // then explicit seeds win.
    for (const char* ordered : {"base_seed", "seed_count", "seeds"}) {
        if (doc.contains(ordered)) apply_key(cfg, ordered, doc.at(ordered));
    }
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (it.key() == "base_seed" || it.key() == "seed_count" || it.key() == "seeds")
            continue;
        apply_key(cfg, it.key(), it.value());
    }
}

}  // namespace

void ExperimentConfig::validate() const {
    if (functions.empty())
        throw std::invalid_argument("config: at least one function required");
    if (seeds.empty())
        throw std::invalid_argument("config: at least one seed required");
    engine.validate();
    saliency.validate();
    if (!(epsilon > 0)) throw std::invalid_argument("config: epsilon must be positive");
    if (tol && !(*tol > 0)) throw std::invalid_argument("config: tol must be positive");
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    std::vector<std::string> fns;
    for (auto f : functions) fns.push_back(to_string(f));
    j["functions"] = fns;
    j["mode"] = to_string(mode);
    j["seeds"] = seeds;
    j["epsilon"] = epsilon;
    if (tol) j["tol"] = *tol;
    j["population_size"] = engine.population_size;
    if (engine.max_iterations) j["max_iterations"] = *engine.max_iterations;
    j["perc_e"] = engine.perc_e;
    j["p_e"] = engine.p_e;
    j["p_one"] = engine.p_one;
    j["p_d"] = engine.p_d;
    j["k"] = engine.k;
    j["t_prime"] = engine.t_prime;
    j["m"] = saliency.m;
    j["sigma_sq"] = saliency.sigma_sq;
    if (rho_override) j["rho"] = *rho_override;
    if (engine.selection_overridden)
        j["selection"] = engine.selection_override == SelectionCriterion::Saliency
                             ? "saliency"
                             : "fitness";
    if (engine.redistribution_overridden)
        j["redistribution"] = engine.redistribution_override;
    if (engine.archive_overridden) j["archive_enabled"] = engine.archive_override;
    return j;
}

std::string ExperimentConfig::hash() const {
    // FNV-1a over the canonical dump; nlohmann::json orders object keys.
    const std::string dump = to_json().dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

ExperimentConfig load_config(const std::optional<std::string>& path,
                             const nlohmann::json& flag_overrides) {
    ExperimentConfig cfg;
    for (const auto& f : all_functions()) cfg.functions.push_back(f.id);
    for (std::uint64_t i = 0; i < 30; ++i) cfg.seeds.push_back(1 + i);
    if (const char* env = std::getenv("ABSO_OUT_DIR")) cfg.out_dir = env;

    if (path) {
        std::ifstream in(*path);
        if (!in) throw std::invalid_argument("config: cannot open " + *path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw std::invalid_argument("config: parse error in " + *path + ": " +
                                        e.what());
        }
        apply_document(cfg, doc);
    }
    apply_document(cfg, flag_overrides);
    cfg.validate();
    return cfg;
}

std::string trace_path(const ExperimentConfig& cfg, FunctionId fn,
                       std::uint64_t seed) {
    return cfg.out_dir + "/trace_" + to_string(fn) + "_seed" + std::to_string(seed) +
           ".csv";
}

std::string archive_path(const ExperimentConfig& cfg, FunctionId fn,
                         std::uint64_t seed) {
    return cfg.out_dir + "/archive_" + to_string(fn) + "_seed" +
           std::to_string(seed) + ".csv";
}

namespace {

struct Job {
    FunctionId fn;
    std::uint64_t seed = 0;
};

struct JobOutcome {
    bool ok = false;
    bool skipped = false;
    std::string error;
    RunMeasurement measurement;
};

std::string header_line(const ExperimentConfig& cfg, FunctionId fn,
                        std::uint64_t seed, double tol) {
    return "# config_hash=" + cfg.hash() + " seed=" + std::to_string(seed) +
           " function=" + to_string(fn) + " mode=" + to_string(cfg.mode) +
           " epsilon=" + fmt_double(cfg.epsilon) + " tol=" + fmt_double(tol);
}

bool artifact_matches(const std::string& path, const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) return false;
    std::string first;
    std::getline(in, first);
    return first == expected_header;
}

void write_trace_csv(const std::string& path, const std::string& header,
                     FunctionId fn, std::uint64_t seed, const RunTrace& trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    const std::string run_id = to_string(fn) + "_s" + std::to_string(seed);
    out << header << "\n";
    out << "run_id,seed,function,generation,best_fitness,max_saliency,"
           "archive_size,fes_used\n";
    for (const auto& rec : trace.records) {
        out << run_id << ',' << seed << ',' << to_string(fn) << ','
            << rec.generation << ',' << fmt_double(rec.best_fitness) << ','
            << fmt_double(rec.max_saliency) << ',' << rec.archive_size << ','
            << rec.fes_used << "\n";
    }
}

void write_archive_csv(const std::string& path, const std::string& header,
                       FunctionId fn, const Archive& archive, std::size_t dim) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << header << "\n";
    out << "function,x0,x1,fitness,saliency,generation_found\n";
    for (const auto& e : archive.entries()) {
        out << to_string(fn) << ',' << fmt_double(e.position[0]) << ','
            << (dim > 1 ? fmt_double(e.position[1]) : std::string{}) << ','
            << fmt_double(e.fitness) << ',' << fmt_double(e.saliency) << ','
            << e.generation_found << "\n";
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

RunTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace: " + path);
    RunTrace trace;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("run_id,", 0) == 0) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 8) throw std::runtime_error("malformed trace row in " + path);
        TraceRecord rec;
        rec.generation = std::stoull(f[3]);
        rec.best_fitness = std::stod(f[4]);
        rec.max_saliency = std::stod(f[5]);
        rec.archive_size = std::stoull(f[6]);
        rec.fes_used = std::stoull(f[7]);
        trace.records.push_back(rec);
    }
    return trace;
}

std::vector<ArchivedSolution> read_archive_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open archive: " + path);
    std::vector<ArchivedSolution> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("function,", 0) == 0)
            continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw std::runtime_error("malformed archive row in " + path);
        ArchivedSolution sol;
        sol.position.push_back(std::stod(f[1]));
        if (!f[2].empty()) sol.position.push_back(std::stod(f[2]));
        sol.fitness = std::stod(f[3]);
        sol.saliency = std::stod(f[4]);
        sol.generation_found = std::stoi(f[5]);
        entries.push_back(std::move(sol));
    }
    return entries;
}

SuiteOutcome run_suite(const ExperimentConfig& cfg) {
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    {
        // Probe writability before any run starts.
        std::ofstream probe(cfg.out_dir + "/config.json", std::ios::trunc);
        if (!probe) throw std::runtime_error("output directory not writable: " + cfg.out_dir);
        nlohmann::json echo = cfg.to_json();
        echo["config_hash"] = cfg.hash();
        echo["out_dir"] = cfg.out_dir;
        probe << echo.dump(1) << "\n";
    }

    const auto registry_path = default_optima_path();
    std::vector<Job> jobs;
    for (auto fn : cfg.functions)
        for (auto seed : cfg.seeds) jobs.push_back({fn, seed});
    std::vector<JobOutcome> outcomes(jobs.size());

    const std::size_t workers = std::max<std::size_t>(
        1, cfg.workers > 0 ? cfg.workers : std::thread::hardware_concurrency());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            const Job& job = jobs[idx];
            JobOutcome& out = outcomes[idx];
            try {
                const auto function = make_function(job.fn);
                const auto registry = load_optima(job.fn, registry_path);
                const double tol =
                    cfg.tol ? *cfg.tol : default_convergence_tol(function.peak_height);
                const double rho =
                    cfg.rho_override ? *cfg.rho_override : function.niching_radius;
                const std::string header = header_line(cfg, job.fn, job.seed, tol);
                const std::string tpath = trace_path(cfg, job.fn, job.seed);
                const std::string apath = archive_path(cfg, job.fn, job.seed);

                RunTrace trace;
                Archive archive;
                if (artifact_matches(tpath, header) && artifact_matches(apath, header)) {
                    trace = read_trace_csv(tpath);
                    archive = Archive(read_archive_csv(apath));
                    out.skipped = true;
                } else {
                    EngineConfig ecfg = cfg.engine;
                    ecfg.mode = cfg.mode;
                    SaliencyConfig scfg = cfg.saliency;
                    ArchiveConfig acfg{rho};
                    RunResult result = run(function, ecfg, scfg, acfg, job.seed);
                    write_trace_csv(tpath, header, job.fn, job.seed, result.trace);
                    write_archive_csv(apath, header, job.fn, result.archive,
                                      function.dim);
                    trace = std::move(result.trace);
                    archive = std::move(result.archive);
                }

                RunResult measured;
                measured.archive = std::move(archive);
                measured.trace = std::move(trace);
                measured.fes_used = measured.trace.records.empty()
                                        ? 0
                                        : measured.trace.records.back().fes_used;
                out.measurement =
                    measure_run(measured, registry, function.peak_height,
                                function.niching_radius, cfg.epsilon, tol, job.seed);
                out.ok = true;
            } catch (const std::exception& e) {
                out.ok = false;
                out.error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    // Summary merge (single-threaded).
    SuiteOutcome outcome;
    nlohmann::json summary;
    summary["version"] = 1;
    summary["config"] = cfg.to_json();
    summary["config_hash"] = cfg.hash();
    nlohmann::json failures = nlohmann::json::array();
    nlohmann::json per_fn = nlohmann::json::object();

    for (auto fn : cfg.functions) {
        const auto function = make_function(fn);
        const double tol =
            cfg.tol ? *cfg.tol : default_convergence_tol(function.peak_height);
        const std::size_t T = cfg.engine.max_iterations
                                  ? *cfg.engine.max_iterations
                                  : function.max_fes / cfg.engine.population_size;
        nlohmann::json runs = nlohmann::json::array();
        std::vector<RunMeasurement> measurements;
        for (std::size_t idx = 0; idx < jobs.size(); ++idx) {
            if (jobs[idx].fn != fn) continue;
            const auto& out = outcomes[idx];
            if (!out.ok) {
                outcome.all_completed = false;
                failures.push_back({{"function", to_string(fn)},
                                    {"seed", jobs[idx].seed},
                                    {"error", out.error}});
                continue;
            }
            if (out.skipped) ++outcome.runs_skipped;
            else ++outcome.runs_executed;
            measurements.push_back(out.measurement);
            nlohmann::json r;
            r["seed"] = out.measurement.seed;
            r["pr_global"] = out.measurement.peak_ratio_global;
            r["pr_combined"] = out.measurement.peak_ratio_combined;
            if (out.measurement.convergence_generation)
                r["convergence_generation"] = *out.measurement.convergence_generation;
            else
                r["convergence_generation"] = nullptr;
            if (out.measurement.fes_at_convergence)
                r["fes_at_convergence"] = *out.measurement.fes_at_convergence;
            r["archive_size"] = out.measurement.archive_size;
            r["fes_used"] = out.measurement.fes_used;
            runs.push_back(std::move(r));
        }
        nlohmann::json fj;
        fj["name"] = function.name;
        fj["peak_height"] = function.peak_height;
        fj["niching_radius"] = function.niching_radius;
        fj["max_fes"] = function.max_fes;
        fj["max_iterations"] = T;
        fj["epsilon"] = cfg.epsilon;
        fj["tol"] = tol;
        fj["runs"] = std::move(runs);
        if (!measurements.empty()) {
            const auto agg = aggregate(measurements);
            nlohmann::json aj;
            aj["runs"] = agg.runs;
            aj["mean_pr_global"] = agg.mean_peak_ratio_global;
            aj["mean_pr_combined"] = agg.mean_peak_ratio_combined;
            aj["success_rate"] = agg.success_rate;
            aj["convergence_rate"] = agg.convergence_rate;
            if (agg.mean_convergence_generation)
                aj["mean_convergence_generation"] = *agg.mean_convergence_generation;
            if (agg.min_convergence_generation)
                aj["min_convergence_generation"] = *agg.min_convergence_generation;
            if (agg.max_convergence_generation)
                aj["max_convergence_generation"] = *agg.max_convergence_generation;
            fj["aggregate"] = std::move(aj);
        }
        per_fn[to_string(fn)] = std::move(fj);
    }
    summary["functions"] = std::move(per_fn);
    summary["failures"] = std::move(failures);

    outcome.summary_path = cfg.out_dir + "/summary.json";
    std::ofstream out(outcome.summary_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + outcome.summary_path);
    out << summary.dump(1) << "\n";
    return outcome;
}

bool VerifyReport::all_passed() const {
    for (const auto& c : criteria)
        if (!c.passed) return false;
    return true;
}

namespace {

double threshold(const std::map<std::string, double>& overrides,
                 const std::string& key, double fallback) {
    auto it = overrides.find(key);
    return it == overrides.end() ? fallback : it->second;
}

}  // namespace

VerifyReport verify(const std::string& summary_path,
                    const std::map<std::string, double>& threshold_overrides) {
    std::ifstream in(summary_path);
    if (!in) throw std::runtime_error("cannot open summary: " + summary_path);
    nlohmann::json summary;
    try {
        summary = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("malformed summary " + summary_path + ": " + e.what());
    }
    const auto& fns = summary.at("functions");

    VerifyReport report;
    auto push = [&](const std::string& name, bool passed, const std::string& detail) {
        report.criteria.push_back({name, passed, detail});
    };

    auto have = [&](const std::string& fn) {
        return fns.contains(fn) && fns.at(fn).contains("aggregate");
    };
    auto agg = [&](const std::string& fn) -> const nlohmann::json& {
        return fns.at(fn).at("aggregate");
    };
    auto not_run = [&](const std::string& name, const std::string& fn) {
        push(name, false, fn + " not run");
    };

    // Multimodal recovery.
    {
        const double th = threshold(threshold_overrides, "f2_success_rate", 0.8);
        const std::string name = "F2 all 5 global optima matched in >= " +
                                 fmt_double(th * 100) + "% of runs";
        if (!have("F2")) not_run(name, "F2");
        else {
            const double v = agg("F2").at("success_rate").get<double>();
            push(name, v >= th, "success_rate=" + fmt_double(v));
        }
    }
    {
        const double th = threshold(threshold_overrides, "f2_min_pr_global", 0.8);
        const std::string name = "F2 >= 4 of 5 global optima in every run";
        if (!have("F2")) not_run(name, "F2");
        else {
            double worst = 1.0;
            for (const auto& r : fns.at("F2").at("runs"))
                worst = std::min(worst, r.at("pr_global").get<double>());
            push(name, worst >= th, "min pr_global=" + fmt_double(worst));
        }
    }
    {
        const double th = threshold(threshold_overrides, "f1_global_success_rate", 0.8);
        const std::string name = "F1 both global optima matched in >= " +
                                 fmt_double(th * 100) + "% of runs";
        if (!have("F1")) not_run(name, "F1");
        else {
            const double v = agg("F1").at("success_rate").get<double>();
            push(name, v >= th, "success_rate=" + fmt_double(v));
        }
    }
    {
        const double th = threshold(threshold_overrides, "f1_combined_success_rate", 0.5);
        const std::string name = "F1 all 5 optima (global+local) matched in >= " +
                                 fmt_double(th * 100) + "% of runs";
        if (!have("F1")) not_run(name, "F1");
        else {
            std::size_t hits = 0, total = 0;
            for (const auto& r : fns.at("F1").at("runs")) {
                ++total;
                if (r.at("pr_combined").get<double>() >= 1.0) ++hits;
            }
            const double v = total ? double(hits) / double(total) : 0.0;
            push(name, v >= th, "rate=" + fmt_double(v));
        }
    }
    // Convergence speed on the 1D functions.
    const std::pair<const char*, double> conv_limits[] = {
        {"F1", threshold(threshold_overrides, "f1_mean_convergence", 350)},
        {"F2", threshold(threshold_overrides, "f2_mean_convergence", 200)},
        {"F3", threshold(threshold_overrides, "f3_mean_convergence", 60)},
    };
    for (const auto& [fn, limit] : conv_limits) {
        const std::string name = std::string(fn) + " mean convergence generation <= " +
                                 fmt_double(limit);
        if (!have(fn)) { not_run(name, fn); continue; }
        const auto& a = agg(fn);
        if (!a.contains("mean_convergence_generation")) {
            push(name, false, "no run converged");
            continue;
        }
        const double v = a.at("mean_convergence_generation").get<double>();
        push(name, v <= limit, "mean=" + fmt_double(v));
    }
    for (const char* fn : {"F1", "F2", "F3"}) {
        const double th = threshold(threshold_overrides, "convergence_rate", 0.9);
        const std::string name = std::string(fn) + " converged before generation " +
                                 "limit in >= " + fmt_double(th * 100) + "% of runs";
        if (!have(fn)) { not_run(name, fn); continue; }
        const double v = agg(fn).at("convergence_rate").get<double>();
        push(name, v >= th, "rate=" + fmt_double(v));
    }
    // 2D convergence bound: generation <= 40% of T.
    for (const char* fn : {"F4", "F5"}) {
        const double frac = threshold(threshold_overrides, "early_convergence_fraction", 0.4);
        const double th = threshold(threshold_overrides, "early_convergence_rate", 0.9);
        const std::string name = std::string(fn) + " convergence generation <= " +
                                 fmt_double(frac * 100) + "% of T in >= " +
                                 fmt_double(th * 100) + "% of runs";
        if (!have(fn)) { not_run(name, fn); continue; }
        const double T = fns.at(fn).at("max_iterations").get<double>();
        std::size_t hits = 0, total = 0;
        for (const auto& r : fns.at(fn).at("runs")) {
            ++total;
            const auto& cg = r.at("convergence_generation");
            if (!cg.is_null() && cg.get<double>() <= frac * T) ++hits;
        }
        const double v = total ? double(hits) / double(total) : 0.0;
        push(name, v >= th, "rate=" + fmt_double(v));
    }
    return report;
}

}  // namespace abso
