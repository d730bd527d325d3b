#pragma once

#include <Eigen/Dense>

#include "scrmlmc/estimator.hpp"

namespace scrmlmc {

// Regular partition of a d-dimensional box into n_r cells per axis. Points
// outside the box are clamped to the boundary cells.
struct HypercubePartition {
    int dims = 1;
    int cells_per_axis = 1;
    std::vector<std::pair<double, double>> bounds;  // empty until fitted

    long cell_count() const;
    bool has_bounds() const { return !bounds.empty(); }
    long cell_index(std::span<const double> point) const;
    void validate() const;

    static HypercubePartition with_bounds(int cells_per_axis,
                                          std::vector<std::pair<double, double>> bounds);
    // Empirical min/max per column, expanded by 1% of the range on each side.
    static HypercubePartition fit(const Eigen::MatrixXd& features, int cells_per_axis);
};

struct RegressionModel {
    HypercubePartition partition;
    Eigen::MatrixXd alpha;   // cell_count x P, zero in empty cells
    Eigen::VectorXd gamma;   // per-cell max over components
    Eigen::VectorXi counts;

    double evaluate_gamma(std::span<const double> point) const;
};

RegressionModel fit_indicator_regression(const Eigen::MatrixXd& features,
                                         const Eigen::MatrixXd& targets,
                                         const HypercubePartition& partition);

using FeatureMap = std::function<void(const std::any&, std::span<double>)>;

// Single-draw regression estimator of I; the model is fitted and evaluated on
// the same sample. Unbounded partitions are fitted on the sampled features.
EstimatorReport lsmc_estimate(const NestedProblem& problem, const FeatureMap& feature_map,
                              int feature_dims, long outer_count, HypercubePartition partition,
                              std::uint64_t seed, const ExecPolicy& exec = {});

struct SelectionResult {
    std::vector<int> ordered_features;
    std::vector<double> rmse_path;
};

// Greedy forward selection of regressors by in-sample RMSE; ties break toward
// the lower feature index.
SelectionResult forward_select(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                               int cells_per_axis, int max_vars);

// Per-scenario aggregates of K-draw inner means for the given outer samples.
std::vector<double> nested_targets(const NestedProblem& problem, const Aggregator& agg,
                                   std::span<const std::any> scenarios, long inner_count,
                                   std::uint64_t seed, const ExecPolicy& exec = {});

}  // namespace scrmlmc
