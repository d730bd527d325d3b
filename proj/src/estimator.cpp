#include "scrmlmc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "scrmlmc/numerics.hpp"

namespace scrmlmc {

namespace {

// Ceiling with a small slack so expressions that are integers in exact
// arithmetic are not pushed up by floating-point noise.
long ceil_int(double x) { return static_cast<long>(std::ceil(x - 1e-9)); }

int schedule_levels(const EstimatorConfig& config) {
    const double abs_log_eps = -std::log(config.epsilon);
    return static_cast<int>(ceil_int(2.0 / (1.0 + config.eta) * abs_log_eps / std::numbers::ln2));
}

struct ScenarioMeans {
    std::vector<double> lower;  // means of the first K/2 draws
    std::vector<double> upper;  // means of the last K/2 draws
    std::vector<double> full;   // (lower + upper) / 2
    std::vector<double> draw;

    explicit ScenarioMeans(int components)
        : lower(components), upper(components), full(components), draw(components) {}
};

// Draws `inner_count` conditional samples (stream draw ids 1..K) and fills the
// half-sample and full-sample means. `inner_count` must be even.
void fill_half_means(const NestedProblem& problem, const std::any& outer, std::uint64_t seed,
                     std::uint32_t domain, std::uint32_t scenario, long inner_count,
                     ScenarioMeans& m) {
    const int p = problem.components;
    std::fill(m.lower.begin(), m.lower.end(), 0.0);
    std::fill(m.upper.begin(), m.upper.end(), 0.0);
    const long half = inner_count / 2;
    for (long k = 1; k <= inner_count; ++k) {
        RngStream rng(seed, domain, scenario, static_cast<std::uint32_t>(k));
        problem.sample_inner(outer, rng, m.draw);
        auto& acc = (k <= half) ? m.lower : m.upper;
        for (int i = 0; i < p; ++i) acc[i] += m.draw[i];
    }
    for (int i = 0; i < p; ++i) {
        m.lower[i] /= static_cast<double>(half);
        m.upper[i] /= static_cast<double>(half);
        m.full[i] = 0.5 * (m.lower[i] + m.upper[i]);
    }
}

void fill_plain_means(const NestedProblem& problem, const std::any& outer, std::uint64_t seed,
                      std::uint32_t domain, std::uint32_t scenario, long inner_count,
                      ScenarioMeans& m) {
    const int p = problem.components;
    std::fill(m.full.begin(), m.full.end(), 0.0);
    for (long k = 1; k <= inner_count; ++k) {
        RngStream rng(seed, domain, scenario, static_cast<std::uint32_t>(k));
        problem.sample_inner(outer, rng, m.draw);
        for (int i = 0; i < p; ++i) m.full[i] += m.draw[i];
    }
    for (int i = 0; i < p; ++i) m.full[i] /= static_cast<double>(inner_count);
}

std::any draw_outer(const NestedProblem& problem, std::uint64_t seed, std::uint32_t domain,
                    std::uint32_t scenario) {
    RngStream rng(seed, domain, scenario, 0);
    return problem.sample_outer(rng);
}

LevelStats summarize(int level, long replications, long inner_count,
                     std::span<const double> values) {
    const auto mv = mean_and_variance(values);
    return LevelStats{level, replications, inner_count, mv.mean, mv.variance};
}

}  // namespace

Aggregator max_aggregator() {
    return {"max", [](std::span<const double> v) {
                double m = v[0];
                for (double x : v.subspan(1)) m = std::max(m, x);
                return m;
            }};
}

Aggregator positive_max_aggregator() {
    return {"max+", [](std::span<const double> v) {
                double m = 0.0;
                for (double x : v) m = std::max(m, x);
                return m;
            }};
}

Aggregator identity_aggregator() {
    return {"identity", [](std::span<const double> v) { return v[0]; }};
}

void EstimatorConfig::validate() const {
    if (!(epsilon > 0.0) || epsilon >= 1.0)
        throw ConfigError("estimator config: epsilon must lie in (0,1)");
    if (!(eta > 0.0) || eta > 1.0) throw ConfigError("estimator config: eta must lie in (0,1]");
    if (base_inner_count < 2 || base_inner_count % 2 != 0)
        throw ConfigError("estimator config: K0 must be even and >= 2");
}

double LevelSchedule::total_cost(double inner_cost_hint) const {
    double cost = 0.0;
    for (std::size_t l = 0; l < replications.size(); ++l)
        cost += static_cast<double>(replications[l]) * static_cast<double>(inner_counts[l]) *
                inner_cost_hint;
    return cost;
}

void LevelSchedule::validate() const {
    if (replications.empty() || replications.size() != inner_counts.size())
        throw ConfigError("level schedule: empty or inconsistently sized");
    if (inner_counts[0] < 1) throw ConfigError("level schedule: K0 must be >= 1");
    for (std::size_t l = 0; l < replications.size(); ++l) {
        if (replications[l] < 1) throw ConfigError("level schedule: every J_l must be >= 1");
        if (l > 0 && inner_counts[l] != 2 * inner_counts[l - 1])
            throw ConfigError("level schedule: inner counts must double per level");
    }
}

LevelSchedule schedule_plain(const EstimatorConfig& config) {
    config.validate();
    const int levels = schedule_levels(config);
    const double abs_log_eps = -std::log(config.epsilon);
    const long j0_exp =
        ceil_int((2.0 * abs_log_eps + std::fabs(std::log(abs_log_eps))) / std::numbers::ln2);
    const long j0 = 1L << j0_exp;
    LevelSchedule schedule;
    for (int l = 0; l <= levels; ++l) {
        schedule.replications.push_back(std::max(1L, j0 >> l));
        schedule.inner_counts.push_back(static_cast<long>(config.base_inner_count) << l);
    }
    return schedule;
}

LevelSchedule schedule_antithetic(const EstimatorConfig& config) {
    config.validate();
    const int levels = schedule_levels(config);
    const double abs_log_eps = -std::log(config.epsilon);
    const long j0_exp = ceil_int(2.0 * abs_log_eps / std::numbers::ln2);
    const long j0 = 1L << j0_exp;
    LevelSchedule schedule;
    for (int l = 0; l <= levels; ++l) {
        const double decay = std::exp2(-(1.0 + config.eta / 4.0) * l);
        schedule.replications.push_back(
            std::max(1L, ceil_int(static_cast<double>(j0) * decay)));
        schedule.inner_counts.push_back(static_cast<long>(config.base_inner_count) << l);
    }
    return schedule;
}

EstimatorReport nested_estimate(const NestedProblem& problem, const Aggregator& agg,
                                long outer_count, long inner_count, std::uint64_t seed,
                                const ExecPolicy& exec) {
    if (outer_count < 1 || inner_count < 1)
        throw ConfigError("nested_estimate: J and K must be >= 1");
    std::vector<double> values(outer_count);
    parallel_for(outer_count, exec, [&](long j) {
        ScenarioMeans m(problem.components);
        const std::any outer = draw_outer(problem, seed, 0, static_cast<std::uint32_t>(j));
        fill_plain_means(problem, outer, seed, 0, static_cast<std::uint32_t>(j), inner_count, m);
        values[j] = agg.apply(m.full) * problem.weight(outer);
    });
    EstimatorReport report;
    report.seed = seed;
    report.levels.push_back(summarize(0, outer_count, inner_count, values));
    report.value = report.levels[0].mean;
    report.std_error = std::sqrt(report.levels[0].variance / static_cast<double>(outer_count));
    report.total_cost = static_cast<double>(outer_count) * static_cast<double>(inner_count) *
                        problem.inner_cost_hint;
    return report;
}

EstimatorReport mlmc_estimate(const NestedProblem& problem, const Aggregator& agg,
                              const LevelSchedule& schedule, std::uint64_t seed,
                              const ExecPolicy& exec) {
    schedule.validate();
    EstimatorReport report;
    report.seed = seed;
    double value = 0.0;
    double variance_sum = 0.0;
    for (int l = 0; l <= schedule.levels(); ++l) {
        const long reps = schedule.replications[l];
        const long inner = schedule.inner_counts[l];
        std::vector<double> values(reps);
        parallel_for(reps, exec, [&](long j) {
            ScenarioMeans m(problem.components);
            const auto scen = static_cast<std::uint32_t>(j);
            const std::any outer = draw_outer(problem, seed, static_cast<std::uint32_t>(l), scen);
            const double phi = problem.weight(outer);
            if (l == 0) {
                fill_plain_means(problem, outer, seed, 0, scen, inner, m);
                values[j] = agg.apply(m.full) * phi;
            } else {
                fill_half_means(problem, outer, seed, static_cast<std::uint32_t>(l), scen, inner, m);
                values[j] = (agg.apply(m.full) - agg.apply(m.lower)) * phi;
            }
        });
        const LevelStats stats = summarize(l, reps, inner, values);
        report.levels.push_back(stats);
        value += stats.mean;
        variance_sum += stats.variance / static_cast<double>(reps);
    }
    report.value = value;
    report.std_error = std::sqrt(variance_sum);
    report.total_cost = schedule.total_cost(problem.inner_cost_hint);
    return report;
}

std::vector<EstimatorReport> antithetic_mlmc_estimate(const NestedProblem& problem,
                                                      std::span<const Aggregator> aggs,
                                                      const LevelSchedule& schedule,
                                                      std::uint64_t seed, const ExecPolicy& exec) {
    schedule.validate();
    if (aggs.empty()) throw ConfigError("antithetic_mlmc_estimate: no aggregators");
    const std::size_t n_aggs = aggs.size();
    std::vector<EstimatorReport> reports(n_aggs);
    for (auto& r : reports) r.seed = seed;
    std::vector<double> values_flat;
    for (int l = 0; l <= schedule.levels(); ++l) {
        const long reps = schedule.replications[l];
        const long inner = schedule.inner_counts[l];
        values_flat.assign(n_aggs * static_cast<std::size_t>(reps), 0.0);
        parallel_for(reps, exec, [&](long j) {
            ScenarioMeans m(problem.components);
            const auto scen = static_cast<std::uint32_t>(j);
            const std::any outer = draw_outer(problem, seed, static_cast<std::uint32_t>(l), scen);
            const double phi = problem.weight(outer);
            if (l == 0) {
                fill_plain_means(problem, outer, seed, 0, scen, inner, m);
                for (std::size_t a = 0; a < n_aggs; ++a)
                    values_flat[a * reps + j] = aggs[a].apply(m.full) * phi;
            } else {
                fill_half_means(problem, outer, seed, static_cast<std::uint32_t>(l), scen, inner, m);
                for (std::size_t a = 0; a < n_aggs; ++a) {
                    const double fine = aggs[a].apply(m.full);
                    const double coarse =
                        0.5 * (aggs[a].apply(m.lower) + aggs[a].apply(m.upper));
                    values_flat[a * reps + j] = (fine - coarse) * phi;
                }
            }
        });
        for (std::size_t a = 0; a < n_aggs; ++a) {
            const std::span<const double> values(values_flat.data() + a * reps,
                                                 static_cast<std::size_t>(reps));
            reports[a].levels.push_back(summarize(l, reps, inner, values));
        }
    }
    for (auto& r : reports) {
        double value = 0.0, variance_sum = 0.0;
        for (const auto& stats : r.levels) {
            value += stats.mean;
            variance_sum += stats.variance / static_cast<double>(stats.replications);
        }
        r.value = value;
        r.std_error = std::sqrt(variance_sum);
        r.total_cost = schedule.total_cost(problem.inner_cost_hint);
    }
    return reports;
}

std::vector<LevelDiagnosticsRow> level_diagnostics(const NestedProblem& problem,
                                                   const Aggregator& agg,
                                                   std::span<const long> inner_counts,
                                                   long outer_count,
                                                   const DiagnosticsReference& reference,
                                                   std::uint64_t seed, const ExecPolicy& exec) {
    if (outer_count < 1) throw ConfigError("level_diagnostics: J must be >= 1");
    for (long k : inner_counts)
        if (k < 2 || k % 2 != 0) throw ConfigError("level_diagnostics: inner counts must be even");
    std::vector<LevelDiagnosticsRow> rows;
    rows.reserve(inner_counts.size());
    const auto* conditional = std::get_if<std::function<double(const std::any&)>>(&reference);
    for (std::size_t row = 0; row < inner_counts.size(); ++row) {
        const long inner = inner_counts[row];
        std::vector<double> bias_samples(outer_count);
        std::vector<double> plain_samples(outer_count);
        std::vector<double> anti_samples(outer_count);
        parallel_for(outer_count, exec, [&](long j) {
            ScenarioMeans m(problem.components);
            const auto domain = static_cast<std::uint32_t>(row);
            const auto scen = static_cast<std::uint32_t>(j);
            const std::any outer = draw_outer(problem, seed, domain, scen);
            const double phi = problem.weight(outer);
            fill_half_means(problem, outer, seed, domain, scen, inner, m);
            const double fine = agg.apply(m.full) * phi;
            bias_samples[j] = conditional ? fine - (*conditional)(outer) : fine;
            plain_samples[j] = (agg.apply(m.full) - agg.apply(m.lower)) * phi;
            anti_samples[j] =
                (agg.apply(m.full) - 0.5 * (agg.apply(m.lower) + agg.apply(m.upper))) * phi;
        });
        const auto bias = mean_and_variance(bias_samples);
        LevelDiagnosticsRow out;
        out.inner_count = inner;
        out.bias_proxy = conditional ? bias.mean : bias.mean - std::get<double>(reference);
        out.bias_std_error = std::sqrt(bias.variance / static_cast<double>(outer_count));
        out.var_plain = mean_and_variance(plain_samples).variance;
        out.var_antithetic = mean_and_variance(anti_samples).variance;
        rows.push_back(out);
    }
    return rows;
}

double antithetic_h(double x, double y) {
    const auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
    return pos(0.5 * (x + y)) - 0.5 * (pos(x) + pos(y));
}

}  // namespace scrmlmc
