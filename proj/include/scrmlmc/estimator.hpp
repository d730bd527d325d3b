#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "scrmlmc/parallel.hpp"
#include "scrmlmc/rng.hpp"

namespace scrmlmc {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A nested-expectation problem: outer scenarios X, vector-valued conditional
// draws Y|X with `components` coordinates, and an outer weight.
struct NestedProblem {
    int components = 1;
    double inner_cost_hint = 1.0;
    std::function<std::any(RngStream&)> sample_outer;
    // Writes one conditional draw of Y given the outer sample into `out`
    // (size = components). Independent streams give i.i.d. draws.
    std::function<void(const std::any&, RngStream&, std::span<double>)> sample_inner;
    std::function<double(const std::any&)> weight;
};

struct Aggregator {
    std::string label;
    std::function<double(std::span<const double>)> apply;
};

Aggregator max_aggregator();
Aggregator positive_max_aggregator();   // max over components and 0
Aggregator identity_aggregator();       // single-component passthrough

struct EstimatorConfig {
    double epsilon = 0.0625;  // target RMSE scale
    double eta = 1.0;         // regularity parameter in (0,1]
    int base_inner_count = 2; // K0, even and >= 2

    void validate() const;
};

struct LevelSchedule {
    std::vector<long> replications;  // J_l
    std::vector<long> inner_counts;  // K_l = K0 * 2^l

    int levels() const { return static_cast<int>(replications.size()) - 1; }
    double total_cost(double inner_cost_hint) const;
    void validate() const;
};

LevelSchedule schedule_plain(const EstimatorConfig& config);
LevelSchedule schedule_antithetic(const EstimatorConfig& config);

struct LevelStats {
    int level = 0;
    long replications = 0;
    long inner_count = 0;
    double mean = 0.0;
    double variance = 0.0;
};

struct EstimatorReport {
    double value = 0.0;
    double std_error = 0.0;
    double total_cost = 0.0;
    std::vector<LevelStats> levels;
    std::uint64_t seed = 0;
};

EstimatorReport nested_estimate(const NestedProblem& problem, const Aggregator& agg, long outer_count,
                                long inner_count, std::uint64_t seed, const ExecPolicy& exec = {});

EstimatorReport mlmc_estimate(const NestedProblem& problem, const Aggregator& agg,
                              const LevelSchedule& schedule, std::uint64_t seed,
                              const ExecPolicy& exec = {});

// Evaluates every aggregator on the same simulated draws (one pass).
std::vector<EstimatorReport> antithetic_mlmc_estimate(const NestedProblem& problem,
                                                      std::span<const Aggregator> aggs,
                                                      const LevelSchedule& schedule,
                                                      std::uint64_t seed,
                                                      const ExecPolicy& exec = {});

// Reference for bias diagnostics: either a global value of I, or a
// per-scenario conditional value h(E[Y|X])phi(X) when a closed form exists.
using DiagnosticsReference = std::variant<double, std::function<double(const std::any&)>>;

struct LevelDiagnosticsRow {
    long inner_count = 0;
    double bias_proxy = 0.0;
    double bias_std_error = 0.0;
    double var_plain = 0.0;
    double var_antithetic = 0.0;
};

std::vector<LevelDiagnosticsRow> level_diagnostics(const NestedProblem& problem,
                                                   const Aggregator& agg,
                                                   std::span<const long> inner_counts,
                                                   long outer_count,
                                                   const DiagnosticsReference& reference,
                                                   std::uint64_t seed,
                                                   const ExecPolicy& exec = {});

// ((x+y)/2)^+ - (x^+ + y^+)/2, the two-argument antithetic defect.
double antithetic_h(double x, double y);

}  // namespace scrmlmc
