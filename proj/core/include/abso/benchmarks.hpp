#pragma once

#include <functional>
#include <string>
#include <vector>

#include "abso/core.hpp"

namespace abso {

enum class FunctionId { F1, F2, F3, F4, F5, F6, F7 };

FunctionId parse_function_id(const std::string& name);
std::string to_string(FunctionId id);

/// A maximization test function with its metadata: box bounds, known peak
/// height, niching radius, and the per-run evaluation budget.
struct BenchmarkFunction {
    FunctionId id;
    std::string name;
    std::size_t dim;
    Bounds bounds;
    double peak_height;
    double niching_radius;
    std::uint64_t max_fes;
    std::function<double(const Position&)> raw;  // pure, no budget accounting

    /// Budget-counted objective evaluation. Throws BudgetExhausted when the
    /// budget is spent; throws std::invalid_argument outside bounds.
    double evaluate(const Position& p, EvaluationBudget& budget) const;
};

/// Known optima of one function, loaded from the shipped registry file.
struct OptimaRegistry {
    FunctionId function_id;
    std::vector<Position> global_optima;
    std::vector<Position> local_optima;
    std::vector<double> fitness_at_global;
    std::vector<double> fitness_at_local;

    [[nodiscard]] std::size_t total() const {
        return global_optima.size() + local_optima.size();
    }
};

/// Construct one of the seven test functions with its metadata.
BenchmarkFunction make_function(FunctionId id);

/// All seven, in id order.
std::vector<BenchmarkFunction> all_functions();

/// Load the optima registry for one function from a registry JSON file.
OptimaRegistry load_optima(FunctionId id, const std::string& path);

/// Registry for one function from the default shipped data file. The path
/// resolves to $ABSO_DATA_DIR/optima.json when the env var is set, else the
/// build-time data directory.
OptimaRegistry registered_optima(FunctionId id);

/// Path of the registry file registered_optima() reads.
std::string default_optima_path();

}  // namespace abso
