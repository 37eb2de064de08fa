#include "abso/benchmarks.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <json.hpp>

namespace abso {
namespace {

double five_uneven_peak_trap(double x) {
    if (x < 2.5) return 80.0 * (2.5 - x);
    if (x < 5.0) return 64.0 * (x - 2.5);
    if (x < 7.5) return 64.0 * (7.5 - x);
    if (x < 12.5) return 28.0 * (x - 7.5);
    if (x < 17.5) return 28.0 * (17.5 - x);
    if (x < 22.5) return 32.0 * (x - 17.5);
    if (x < 27.5) return 32.0 * (27.5 - x);
    return 80.0 * (x - 27.5);
}

double equal_maxima(double x) {
    const double s = std::sin(5.0 * M_PI * x);
    return std::pow(s, 6);
}

double uneven_decreasing_maxima(double x) {
    const double e = std::exp(-2.0 * std::log(2.0) * std::pow((x - 0.08) / 0.854, 2));
    const double s = std::sin(5.0 * M_PI * (std::pow(x, 0.75) - 0.05));
    return e * std::pow(s, 6);
}

double himmelblau(double x, double y) {
    const double a = x * x + y - 11.0;
    const double b = x + y * y - 7.0;
    return 200.0 - a * a - b * b;
}

double six_hump_camel_back(double x, double y) {
    return -((4.0 - 2.1 * x * x + x * x * x * x / 3.0) * x * x + x * y +
             (4.0 * y * y - 4.0) * y * y);
}

double shubert_term(double x) {
    double acc = 0.0;
    for (int j = 1; j <= 5; ++j) acc += j * std::cos((j + 1) * x + j);
    return acc;
}

double shubert2d(double x, double y) { return -shubert_term(x) * shubert_term(y); }

double modified_rastrigin(double x, double y) {
    return -(10.0 + 9.0 * std::cos(2.0 * M_PI * 3.0 * x)) -
           (10.0 + 9.0 * std::cos(2.0 * M_PI * 4.0 * y));
}

}  // namespace

FunctionId parse_function_id(const std::string& name) {
    if (name == "F1") return FunctionId::F1;
    if (name == "F2") return FunctionId::F2;
    if (name == "F3") return FunctionId::F3;
    if (name == "F4") return FunctionId::F4;
    if (name == "F5") return FunctionId::F5;
    if (name == "F6") return FunctionId::F6;
    if (name == "F7") return FunctionId::F7;
    throw std::invalid_argument("unknown function id: " + name);
}

std::string to_string(FunctionId id) {
    switch (id) {
        case FunctionId::F1: return "F1";
        case FunctionId::F2: return "F2";
        case FunctionId::F3: return "F3";
        case FunctionId::F4: return "F4";
        case FunctionId::F5: return "F5";
        case FunctionId::F6: return "F6";
        case FunctionId::F7: return "F7";
    }
    throw std::invalid_argument("unknown function id");
}

double BenchmarkFunction::evaluate(const Position& p, EvaluationBudget& budget) const {
    if (!bounds.contains(p))
        throw std::invalid_argument("evaluate: position outside bounds for " + name);
    budget.consume();
    return raw(p);
}

BenchmarkFunction make_function(FunctionId id) {
    switch (id) {
        case FunctionId::F1:
            return {id, "Five-Uneven-Peak Trap", 1, Bounds{{0.0}, {30.0}},
                    200.0, 0.01, 50000,
                    [](const Position& p) { return five_uneven_peak_trap(p[0]); }};
        case FunctionId::F2:
            return {id, "Equal Maxima", 1, Bounds{{0.0}, {1.0}},
                    1.0, 0.01, 50000,
                    [](const Position& p) { return equal_maxima(p[0]); }};
        case FunctionId::F3:
            return {id, "Uneven Decreasing Maxima", 1, Bounds{{0.0}, {1.0}},
                    1.0, 0.01, 50000,
                    [](const Position& p) { return uneven_decreasing_maxima(p[0]); }};
        case FunctionId::F4:
            return {id, "Himmelblau", 2, Bounds{{-6.0, -6.0}, {6.0, 6.0}},
                    200.0, 0.01, 50000,
                    [](const Position& p) { return himmelblau(p[0], p[1]); }};
        case FunctionId::F5:
            return {id, "Six-Hump Camel Back", 2,
                    Bounds{{-1.9, -1.1}, {1.9, 1.1}},
                    1.03163, 0.5, 50000,
                    [](const Position& p) { return six_hump_camel_back(p[0], p[1]); }};
        case FunctionId::F6:
            return {id, "Shubert", 2, Bounds{{-10.0, -10.0}, {10.0, 10.0}},
                    186.731, 0.5, 200000,
                    [](const Position& p) { return shubert2d(p[0], p[1]); }};
        case FunctionId::F7:
            return {id, "Modified Rastrigin", 2, Bounds{{0.0, 0.0}, {1.0, 1.0}},
                    -2.0, 0.01, 200000,
                    [](const Position& p) { return modified_rastrigin(p[0], p[1]); }};
    }
    throw std::invalid_argument("unknown function id");
}

std::vector<BenchmarkFunction> all_functions() {
    std::vector<BenchmarkFunction> out;
    for (auto id : {FunctionId::F1, FunctionId::F2, FunctionId::F3, FunctionId::F4,
                    FunctionId::F5, FunctionId::F6, FunctionId::F7})
        out.push_back(make_function(id));
    return out;
}

OptimaRegistry load_optima(FunctionId id, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open optima registry: " + path);
    nlohmann::json doc = nlohmann::json::parse(in);
    const auto& fn = doc.at("functions").at(to_string(id));

    OptimaRegistry reg;
    reg.function_id = id;
    for (const auto& e : fn.at("global_optima")) {
        reg.global_optima.push_back(e.at("x").get<Position>());
        reg.fitness_at_global.push_back(e.at("f").get<double>());
    }
    for (const auto& e : fn.at("local_optima")) {
        reg.local_optima.push_back(e.at("x").get<Position>());
        reg.fitness_at_local.push_back(e.at("f").get<double>());
    }
    return reg;
}

std::string default_optima_path() {
    if (const char* env = std::getenv("ABSO_DATA_DIR"))
        return std::string(env) + "/optima.json";
#ifdef ABSO_DATA_DIR
    return std::string(ABSO_DATA_DIR) + "/optima.json";
#else
    return "data/optima.json";
#endif
}

OptimaRegistry registered_optima(FunctionId id) {
    return load_optima(id, default_optima_path());
}

}  // namespace abso
