#include "scrmlmc/lsmc.hpp"

#include <cmath>

#include "scrmlmc/numerics.hpp"

namespace scrmlmc {

long HypercubePartition::cell_count() const {
    long n = 1;
    for (int k = 0; k < dims; ++k) n *= cells_per_axis;
    return n;
}

void HypercubePartition::validate() const {
    if (dims < 1) throw ConfigError("partition: dims must be >= 1");
    if (cells_per_axis < 1) throw ConfigError("partition: cells per axis must be >= 1");
    if (has_bounds() && static_cast<int>(bounds.size()) != dims)
        throw ConfigError("partition: bounds size must match dims");
    for (const auto& [lo, hi] : bounds)
        if (!(lo < hi)) throw ConfigError("partition: each axis needs lo < hi");
    if (cell_count() > (1L << 31)) throw ConfigError("partition: too many cells");
}

long HypercubePartition::cell_index(std::span<const double> point) const {
    long index = 0;
    long stride = 1;
    for (int k = 0; k < dims; ++k) {
        const auto& [lo, hi] = bounds[k];
        const double scaled = (point[k] - lo) / (hi - lo);
        long cell = static_cast<long>(std::floor(scaled * cells_per_axis));
        cell = std::clamp(cell, 0L, static_cast<long>(cells_per_axis - 1));
        index += cell * stride;
        stride *= cells_per_axis;
    }
    return index;
}

HypercubePartition HypercubePartition::with_bounds(int cells_per_axis,
                                                   std::vector<std::pair<double, double>> bounds) {
    HypercubePartition p;
    p.dims = static_cast<int>(bounds.size());
    p.cells_per_axis = cells_per_axis;
    p.bounds = std::move(bounds);
    p.validate();
    return p;
}

HypercubePartition HypercubePartition::fit(const Eigen::MatrixXd& features, int cells_per_axis) {
    if (features.rows() < 1) throw ConfigError("partition fit: empty sample");
    std::vector<std::pair<double, double>> bounds(features.cols());
    for (Eigen::Index k = 0; k < features.cols(); ++k) {
        double lo = features.col(k).minCoeff();
        double hi = features.col(k).maxCoeff();
        if (!(lo < hi)) {  // constant column: widen to an arbitrary unit box
            lo -= 0.5;
            hi += 0.5;
        }
        const double pad = 0.01 * (hi - lo);
        bounds[k] = {lo - pad, hi + pad};
    }
    return with_bounds(cells_per_axis, std::move(bounds));
}

double RegressionModel::evaluate_gamma(std::span<const double> point) const {
    return gamma[partition.cell_index(point)];
}

RegressionModel fit_indicator_regression(const Eigen::MatrixXd& features,
                                         const Eigen::MatrixXd& targets,
                                         const HypercubePartition& partition) {
    if (features.rows() != targets.rows())
        throw ConfigError("indicator regression: features/targets row mismatch");
    if (features.rows() < 1) throw ConfigError("indicator regression: empty sample");
    if (static_cast<int>(features.cols()) != partition.dims)
        throw ConfigError("indicator regression: feature dimension mismatch");
    RegressionModel model;
    model.partition = partition;
    if (!model.partition.has_bounds()) model.partition = HypercubePartition::fit(features, partition.cells_per_axis);
    const long cells = model.partition.cell_count();
    const auto p = targets.cols();
    model.alpha = Eigen::MatrixXd::Zero(cells, p);
    model.counts = Eigen::VectorXi::Zero(cells);
    std::vector<double> point(model.partition.dims);
    for (Eigen::Index j = 0; j < features.rows(); ++j) {
        for (int k = 0; k < model.partition.dims; ++k) point[k] = features(j, k);
        const long cell = model.partition.cell_index(point);
        model.counts[cell] += 1;
        model.alpha.row(cell) += targets.row(j);
    }
    for (long n = 0; n < cells; ++n) {
        if (model.counts[n] > 0)
            model.alpha.row(n) /= static_cast<double>(model.counts[n]);
        // empty cells keep coefficient 0 (the 0/0 = 0 convention)
    }
    model.gamma = model.alpha.rowwise().maxCoeff();
    return model;
}

EstimatorReport lsmc_estimate(const NestedProblem& problem, const FeatureMap& feature_map,
                              int feature_dims, long outer_count, HypercubePartition partition,
                              std::uint64_t seed, const ExecPolicy& exec) {
    if (outer_count < 1) throw ConfigError("lsmc_estimate: J must be >= 1");
    partition.dims = feature_dims;
    Eigen::MatrixXd features(outer_count, feature_dims);
    Eigen::MatrixXd targets(outer_count, problem.components);
    std::vector<double> weights(outer_count);
    parallel_for(outer_count, exec, [&](long j) {
        RngStream outer_rng(seed, 0, static_cast<std::uint32_t>(j), 0);
        const std::any outer = problem.sample_outer(outer_rng);
        std::vector<double> feat(feature_dims);
        feature_map(outer, feat);
        for (int k = 0; k < feature_dims; ++k) features(j, k) = feat[k];
        std::vector<double> draw(problem.components);
        RngStream inner_rng(seed, 0, static_cast<std::uint32_t>(j), 1);
        problem.sample_inner(outer, inner_rng, draw);
        for (int p = 0; p < problem.components; ++p) targets(j, p) = draw[p];
        weights[j] = problem.weight(outer);
    });
    const RegressionModel model = fit_indicator_regression(features, targets, partition);
    std::vector<double> values(outer_count);
    std::vector<double> point(feature_dims);
    for (long j = 0; j < outer_count; ++j) {
        for (int k = 0; k < feature_dims; ++k) point[k] = features(j, k);
        values[j] = weights[j] * model.evaluate_gamma(point);
    }
    const auto mv = mean_and_variance(values);
    EstimatorReport report;
    report.seed = seed;
    report.value = mv.mean;
    report.std_error = std::sqrt(mv.variance / static_cast<double>(outer_count));
    report.total_cost = static_cast<double>(outer_count) * problem.inner_cost_hint;
    report.levels.push_back({0, outer_count, 1, mv.mean, mv.variance});
    return report;
}

SelectionResult forward_select(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                               int cells_per_axis, int max_vars) {
    const int total = static_cast<int>(features.cols());
    if (max_vars < 1 || max_vars > total)
        throw ConfigError("forward_select: max_vars must lie in [1, feature count]");
    if (features.rows() != targets.rows())
        throw ConfigError("forward_select: features/targets row mismatch");
    const long rows = features.rows();
    SelectionResult result;
    std::vector<int> selected;
    Eigen::MatrixXd target_mat = targets;
    while (static_cast<int>(selected.size()) < max_vars) {
        int best = -1;
        double best_rmse = 0.0;
        for (int candidate = 0; candidate < total; ++candidate) {
            if (std::find(selected.begin(), selected.end(), candidate) != selected.end()) continue;
            Eigen::MatrixXd sub(rows, selected.size() + 1);
            for (std::size_t k = 0; k < selected.size(); ++k) sub.col(k) = features.col(selected[k]);
            sub.col(selected.size()) = features.col(candidate);
            HypercubePartition partition;
            partition.dims = static_cast<int>(sub.cols());
            partition.cells_per_axis = cells_per_axis;
            const RegressionModel model = fit_indicator_regression(sub, target_mat, partition);
            double sq = 0.0;
            std::vector<double> point(partition.dims);
            for (long j = 0; j < rows; ++j) {
                for (int k = 0; k < partition.dims; ++k) point[k] = sub(j, k);
                const double err = targets[j] - model.evaluate_gamma(point);
                sq += err * err;
            }
            const double rmse = std::sqrt(sq / static_cast<double>(rows));
            if (best < 0 || rmse < best_rmse) {
                best = candidate;
                best_rmse = rmse;
            }
        }
        selected.push_back(best);
        result.ordered_features.push_back(best);
        result.rmse_path.push_back(best_rmse);
    }
    return result;
}

std::vector<double> nested_targets(const NestedProblem& problem, const Aggregator& agg,
                                   std::span<const std::any> scenarios, long inner_count,
                                   std::uint64_t seed, const ExecPolicy& exec) {
    if (inner_count < 1) throw ConfigError("nested_targets: K must be >= 1");
    std::vector<double> out(scenarios.size());
    parallel_for(static_cast<long>(scenarios.size()), exec, [&](long j) {
        std::vector<double> sums(problem.components, 0.0);
        std::vector<double> draw(problem.components);
        for (long k = 1; k <= inner_count; ++k) {
            RngStream rng(seed, 0, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(k));
            problem.sample_inner(scenarios[j], rng, draw);
            for (int p = 0; p < problem.components; ++p) sums[p] += draw[p];
        }
        for (int p = 0; p < problem.components; ++p) sums[p] /= static_cast<double>(inner_count);
        out[j] = agg.apply(sums);
    });
    return out;
}

}  // namespace scrmlmc
