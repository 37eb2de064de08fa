#include <cstdio>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "abso/experiment.hpp"

namespace {

int cmd_list_functions() {
    std::printf("%-4s %-26s %4s %-16s %10s %10s %8s\n", "id", "name", "dim",
                "bounds", "PH", "rho", "MaxFes");
    for (const auto& f : abso::all_functions()) {
        std::string bounds = "[" + std::to_string(f.bounds.lower[0]) + "," +
                             std::to_string(f.bounds.upper[0]) + "]";
        if (f.dim == 2) bounds += "^2";
        std::printf("%-4s %-26s %4zu %-16s %10g %10g %8llu\n",
                    abso::to_string(f.id).c_str(), f.name.c_str(), f.dim,
                    bounds.c_str(), f.peak_height, f.niching_radius,
                    static_cast<unsigned long long>(f.max_fes));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ABSO multimodal optimization experiment runner"};
    app.require_subcommand(1);

    // --- run ---
    auto* run_cmd = app.add_subcommand("run", "Execute a suite of seeded runs");
    std::string config_path;
    std::vector<std::string> functions;
    std::string mode;
    std::vector<std::uint64_t> seeds;
    std::uint64_t seed_count = 0;
    std::uint64_t base_seed = 0;
    bool base_seed_set = false;
    std::string out_dir;
    std::size_t workers = 0;
    double epsilon = 0.0;
    double tol = 0.0;
    run_cmd->add_option("--config", config_path, "Flat JSON config file");
    run_cmd->add_option("--function", functions, "Function id (repeatable), e.g. F2");
    run_cmd->add_option("--mode", mode, "ABSO or BSO_OS");
    run_cmd->add_option("--seeds", seeds, "Explicit seed list");
    run_cmd->add_option("--seed-count", seed_count, "Number of seeds (base_seed + i)");
    run_cmd->add_option("--base-seed", base_seed, "First seed of a count-style sweep")
        ->each([&](const std::string&) { base_seed_set = true; });
    run_cmd->add_option("--out", out_dir, "Output directory (default $ABSO_OUT_DIR or ./out)");
    run_cmd->add_option("--workers", workers, "Parallel runs (default: hardware)");
    run_cmd->add_option("--epsilon", epsilon, "Peak-ratio matching accuracy");
    run_cmd->add_option("--tol", tol, "Convergence tolerance");

    // --- verify ---
    auto* verify_cmd = app.add_subcommand("verify", "Check a summary against acceptance thresholds");
    std::string summary_path;
    std::string thresholds_path;
    verify_cmd->add_option("summary", summary_path, "summary.json produced by run")
        ->required();
    verify_cmd->add_option("--thresholds", thresholds_path,
                           "JSON file overriding built-in threshold values");

    // --- list-functions ---
    auto* list_cmd = app.add_subcommand("list-functions", "Print benchmark metadata");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) return cmd_list_functions();

        if (run_cmd->parsed()) {
            nlohmann::json flags = nlohmann::json::object();
            if (!functions.empty()) flags["functions"] = functions;
            if (!mode.empty()) flags["mode"] = mode;
            if (!seeds.empty()) flags["seeds"] = seeds;
            if (base_seed_set) flags["base_seed"] = base_seed;
            if (seed_count > 0) flags["seed_count"] = seed_count;
            if (!out_dir.empty()) flags["out_dir"] = out_dir;
            if (workers > 0) flags["workers"] = workers;
            if (epsilon > 0) flags["epsilon"] = epsilon;
            if (tol > 0) flags["tol"] = tol;

            const auto cfg = abso::load_config(
                config_path.empty() ? std::nullopt
                                    : std::optional<std::string>(config_path),
                flags);
            const auto outcome = abso::run_suite(cfg);
            std::printf("executed %zu runs, reused %zu, summary: %s\n",
                        outcome.runs_executed, outcome.runs_skipped,
                        outcome.summary_path.c_str());
            if (!outcome.all_completed) {
                std::fprintf(stderr, "some runs failed; see summary failures\n");
                return 1;
            }
            return 0;
        }

        if (verify_cmd->parsed()) {
            std::map<std::string, double> overrides;
            if (!thresholds_path.empty()) {
                std::ifstream in(thresholds_path);
                if (!in) throw std::runtime_error("cannot open " + thresholds_path);
                for (const auto& [key, val] : nlohmann::json::parse(in).items())
                    overrides[key] = val.get<double>();
            }
            const auto report = abso::verify(summary_path, overrides);
            for (const auto& c : report.criteria)
                std::printf("[%s] %s (%s)\n", c.passed ? "PASS" : "FAIL",
                            c.name.c_str(), c.detail.c_str());
            std::printf("overall: %s\n", report.all_passed() ? "PASS" : "FAIL");
            return report.all_passed() ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
