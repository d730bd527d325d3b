#include "scrmlmc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "scrmlmc/csv.hpp"
#include "scrmlmc/lsmc.hpp"
#include "scrmlmc/numerics.hpp"

namespace scrmlmc {

namespace {

double num(ConfigFile& c, const std::string& section, const std::string& key, double fallback) {
    if (!c.has(section, key)) c.set(section, key, CsvWriter::format_number(fallback));
    return c.get_number(section, key, fallback);
}

long integer(ConfigFile& c, const std::string& section, const std::string& key, long fallback) {
    if (!c.has(section, key)) c.set(section, key, std::to_string(fallback));
    return c.get_integer(section, key, fallback);
}

std::string text(ConfigFile& c, const std::string& section, const std::string& key,
                 const std::string& fallback) {
    if (!c.has(section, key)) c.set(section, key, fallback);
    return c.get_string(section, key, fallback);
}

std::vector<double> numbers(ConfigFile& c, const std::string& section, const std::string& key,
                            const std::vector<double>& fallback) {
    if (!c.has(section, key)) {
        std::string joined;
        for (double v : fallback) {
            if (!joined.empty()) joined += ",";
            joined += CsvWriter::format_number(v);
        }
        c.set(section, key, joined);
    }
    return c.get_number_list(section, key, fallback);
}

std::vector<long> integers(ConfigFile& c, const std::string& section, const std::string& key,
                           const std::vector<long>& fallback) {
    if (!c.has(section, key)) {
        std::string joined;
        for (long v : fallback) {
            if (!joined.empty()) joined += ",";
            joined += std::to_string(v);
        }
        c.set(section, key, joined);
    }
    return c.get_integer_list(section, key, fallback);
}

double empirical_rmse(std::span<const double> estimates, double reference) {
    double sq = 0.0;
    for (double v : estimates) sq += (v - reference) * (v - reference);
    return std::sqrt(sq / static_cast<double>(estimates.size()));
}

void write_manifest(const std::string& name, ConfigFile& config,
                    const std::filesystem::path& out_dir) {
    config.set("run", "experiment", name);
    config.set("run", "version", "1");
    const auto path = out_dir / (name + ".manifest.cfg");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest " + path.string());
    out << config.serialize();
}

// ---------------------------------------------------------------------------
// Toy experiments (butterfly problem)
// ---------------------------------------------------------------------------

void run_toy_bias(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ButterflyParams bf = resolve_butterfly(cfg);
    const auto k_grid = integers(cfg, "experiment", "k_grid", {16, 32, 64, 128, 256, 512, 1024});
    const long j = integer(cfg, "experiment", "j", 10000);
    const NestedProblem problem = toy_problem(bf);
    const Aggregator agg = max_aggregator();
    const DiagnosticsReference reference = std::function<double(const std::any&)>(
        [bf](const std::any& outer) {
            return butterfly_conditional_max(std::any_cast<double>(outer), bf);
        });
    CsvWriter csv(out / "toy-bias.csv", {"k", "bias", "stderr"});
    std::vector<double> bias(k_grid.size(), 0.0), se2(k_grid.size(), 0.0);
    for (int rep = 0; rep < run.n_batch; ++rep) {
        const auto rows = level_diagnostics(problem, agg, k_grid, j, reference,
                                            run.seed + static_cast<std::uint64_t>(rep), run.exec);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            bias[i] += rows[i].bias_proxy;
            se2[i] += rows[i].bias_std_error * rows[i].bias_std_error;
        }
    }
    for (std::size_t i = 0; i < k_grid.size(); ++i)
        csv.write_row({static_cast<double>(k_grid[i]), bias[i] / run.n_batch,
                       std::sqrt(se2[i]) / run.n_batch});
}

void run_toy_levelvar(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ButterflyParams bf = resolve_butterfly(cfg);
    const auto k_grid = integers(cfg, "experiment", "k_grid", {16, 32, 64, 128, 256, 512, 1024});
    const long j = integer(cfg, "experiment", "j", 10000);
    const auto rows = level_diagnostics(toy_problem(bf), max_aggregator(), k_grid, j, 0.0,
                                        run.seed, run.exec);
    CsvWriter csv(out / "toy-levelvar.csv", {"k", "var_plain", "var_antithetic"});
    for (const auto& row : rows)
        csv.write_row({static_cast<double>(row.inner_count), row.var_plain, row.var_antithetic});
}

void run_toy_rmse(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ButterflyParams bf = resolve_butterfly(cfg);
    EstimatorConfig est = resolve_estimator(cfg);
    const auto eta_grid = numbers(cfg, "experiment", "eta_grid", {0.5, 0.75, 1.0});
    const auto eps_grid =
        numbers(cfg, "experiment", "epsilon_grid", {0.25, 0.125, 0.0625, 0.03125, 0.015625});
    const double tol = num(cfg, "experiment", "reference_tol", 1e-8);
    const double reference = reference_value(bf, tol);
    const NestedProblem problem = toy_problem(bf);
    const Aggregator aggs[] = {max_aggregator()};
    CsvWriter csv(out / "toy-rmse.csv", {"eta", "epsilon", "cost", "rmse", "mean", "reference"});
    for (double eta : eta_grid) {
        for (double eps : eps_grid) {
            est.eta = eta;
            est.epsilon = eps;
            const LevelSchedule schedule = schedule_antithetic(est);
            std::vector<double> estimates;
            for (int rep = 0; rep < run.n_batch; ++rep) {
                const auto reports = antithetic_mlmc_estimate(
                    problem, aggs, schedule, run.seed + static_cast<std::uint64_t>(rep), run.exec);
                estimates.push_back(reports[0].value);
            }
            const auto stats = mean_and_variance(estimates);
            csv.write_row({eta, eps, schedule.total_cost(1.0),
                           empirical_rmse(estimates, reference), stats.mean, reference});
        }
    }
}

void run_toy_lsmc(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ButterflyParams bf = resolve_butterfly(cfg);
    const auto j_grid =
        integers(cfg, "experiment", "j_grid", {1000, 10000, 100000, 1000000});
    const double nr_scale = num(cfg, "experiment", "n_r_scale", 1.0);
    const double tol = num(cfg, "experiment", "reference_tol", 1e-8);
    const double reference = reference_value(bf, tol);
    const NestedProblem problem = toy_problem(bf);
    // Standardized log-spot regressor on [-3,3], as cells of a 1-d partition.
    const double s0 = bf.s0, sig = bf.sigma, t = bf.horizon;
    const FeatureMap features = [s0, sig, t](const std::any& outer, std::span<double> f) {
        const double x = std::any_cast<double>(outer);
        f[0] = (std::log(x / s0) + 0.5 * sig * sig * t) / (sig * std::sqrt(t));
    };
    CsvWriter csv(out / "toy-lsmc.csv", {"j", "n_r", "rmse", "mean", "reference"});
    for (long j : j_grid) {
        const int n_r = std::max(2, static_cast<int>(std::lround(nr_scale * std::cbrt(j))));
        const auto partition = HypercubePartition::with_bounds(n_r, {{-3.0, 3.0}});
        std::vector<double> estimates;
        for (int rep = 0; rep < run.n_batch; ++rep) {
            estimates.push_back(lsmc_estimate(problem, features, 1, j, partition,
                                              run.seed + static_cast<std::uint64_t>(rep), run.exec)
                                    .value);
        }
        const auto stats = mean_and_variance(estimates);
        csv.write_row({static_cast<double>(j), static_cast<double>(n_r),
                       empirical_rmse(estimates, reference), stats.mean, reference});
    }
}

// ---------------------------------------------------------------------------
// ALM experiments
// ---------------------------------------------------------------------------

const char* kRiskFactorNames[12] = {"S",   "r",   "phi_S", "phi_b", "BV_b", "BV_S",
                                    "MR",  "PSR", "CR",    "MV",    "MV_b", "MV_S"};

// Collected outer scenarios with per-module conditional aggregates.
struct ScrSample {
    std::array<double, 12> factors{};
    double cum_dw = 0.0;
    double cum_dz = 0.0;
    double scr_up = 0.0, scr_down = 0.0, scr_eq = 0.0, scr_int = 0.0, scr_mkt = 0.0;
};

std::vector<ScrSample> collect_scr_samples(const NestedProblem& problem,
                                           const MarketParams& market, const ShiftCurve& shift,
                                           int cache_years, long outer, long inner,
                                           std::uint64_t seed, const ExecPolicy& exec) {
    std::vector<ScrSample> samples(outer);
    const VasicekCache cache(market, shift, cache_years);
    parallel_for(outer, exec, [&](long jdx) {
        RngStream outer_rng(seed, 0, static_cast<std::uint32_t>(jdx), 0);
        const std::any any_sample = problem.sample_outer(outer_rng);
        const auto& sample = *std::any_cast<const std::shared_ptr<const ScrOuterSample>&>(any_sample);
        std::vector<double> sums(problem.components, 0.0), draw(problem.components);
        for (long k = 1; k <= inner; ++k) {
            RngStream rng(seed, 0, static_cast<std::uint32_t>(jdx), static_cast<std::uint32_t>(k));
            problem.sample_inner(any_sample, rng, draw);
            for (int p = 0; p < problem.components; ++p) sums[p] += draw[p];
        }
        for (int p = 0; p < problem.components; ++p) sums[p] /= static_cast<double>(inner);
        ScrSample& s = samples[jdx];
        const SCRReport report = make_scr_report(sums);
        s.scr_up = report.scr_up;
        s.scr_down = report.scr_down;
        s.scr_eq = report.scr_eq;
        s.scr_int = report.scr_int;
        s.scr_mkt = report.scr_mkt;
        s.factors = risk_factors(sample.sheet, sample.market, cache);
        s.cum_dw = sample.market.cum_dw;
        s.cum_dz = sample.market.cum_dz;
    });
    return samples;
}

// SCR modules at t = 0 (deterministic state, inner sampling only).
SCRReport scr_at_origin(const ALMParams& alm, const MarketParams& market,
                        const RateShock& shocks, long inner, std::uint64_t seed,
                        const ExecPolicy& exec, std::array<double, 4>* std_errors = nullptr) {
    const BalanceSheet sheet0 = initial_sheet(alm, market, market.shift);
    const MarketState state0 = initial_state(market, market.shift);
    const double base = bof(sheet0, state0, ScrShockKind::none, inner, alm, market, shocks, seed, exec);
    const double up = bof(sheet0, state0, ScrShockKind::rate_up, inner, alm, market, shocks, seed, exec);
    const double down =
        bof(sheet0, state0, ScrShockKind::rate_down, inner, alm, market, shocks, seed, exec);
    const double eq = bof(sheet0, state0, ScrShockKind::equity, inner, alm, market, shocks, seed, exec);
    const double means[4] = {base - up, base - down, base - eq, 0.0};
    if (std_errors) std_errors->fill(0.0);
    return make_scr_report(means);
}

void run_alm_frontier(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    const EstimatorConfig est = resolve_estimator(cfg);
    const auto t_grid = integers(cfg, "experiment", "t_grid", {0, 10, 20});
    const auto ws_grid = numbers(cfg, "experiment", "w_s_grid", {0.01, 0.05, 0.10, 0.15});
    const long origin_inner = integer(cfg, "experiment", "origin_inner", 2000);
    CsvWriter csv(out / "alm-frontier.csv",
                  {"t", "w_s", "scr_mkt", "scr_eq", "scr_int", "scr_up", "scr_down", "se_mkt",
                   "se_eq", "se_int", "se_up", "se_down"});
    const Aggregator aggs[] = {scr_market_aggregator(), scr_equity_aggregator(),
                               scr_interest_aggregator(), scr_up_aggregator(),
                               scr_down_aggregator()};
    for (long t : t_grid) {
        for (double ws : ws_grid) {
            ALMParams alm_ws = alm;
            alm_ws.equity_weight = ws;
            if (t == 0) {
                const SCRReport r =
                    scr_at_origin(alm_ws, market, shocks, origin_inner, run.seed, run.exec);
                csv.write_row({0.0, ws, r.scr_mkt, r.scr_eq, r.scr_int, r.scr_up, r.scr_down, 0.0,
                               0.0, 0.0, 0.0, 0.0});
                continue;
            }
            const NestedProblem problem = scr_problem(static_cast<int>(t), alm_ws, market, shocks);
            const LevelSchedule schedule = schedule_antithetic(est);
            const auto reports = antithetic_mlmc_estimate(problem, aggs, schedule, run.seed, run.exec);
            csv.write_row({static_cast<double>(t), ws, reports[0].value, reports[1].value,
                           reports[2].value, reports[3].value, reports[4].value,
                           reports[0].std_error, reports[1].std_error, reports[2].std_error,
                           reports[3].std_error, reports[4].std_error});
        }
    }
}

void run_alm_select(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    const int t = static_cast<int>(integer(cfg, "experiment", "t", 10));
    const long j_v = integer(cfg, "experiment", "j_v", 2000);
    const long inner = integer(cfg, "experiment", "inner_k", 10000);
    const int n_r = static_cast<int>(integer(cfg, "experiment", "n_r", 5));
    const int max_vars = static_cast<int>(integer(cfg, "experiment", "max_vars", 3));
    const NestedProblem problem = scr_problem(t, alm, market, shocks);
    const int cache_years = alm.horizon_years + alm.ladder_years;
    const auto samples = collect_scr_samples(problem, market, market.shift, cache_years, j_v,
                                             inner, run.seed, run.exec);
    Eigen::MatrixXd features(j_v, 12);
    Eigen::VectorXd targets(j_v);
    for (long j = 0; j < j_v; ++j) {
        for (int f = 0; f < 12; ++f) features(j, f) = samples[j].factors[f];
        targets[j] = samples[j].scr_int;
    }
    const SelectionResult result = forward_select(features, targets, n_r, max_vars);
    CsvWriter csv(out / "alm-select.csv", {"step", "feature_index", "feature_name", "rmse"});
    for (std::size_t step = 0; step < result.ordered_features.size(); ++step) {
        const int f = result.ordered_features[step];
        csv.write_row({std::to_string(step + 1), std::to_string(f + 1), kRiskFactorNames[f],
                       CsvWriter::format_number(result.rmse_path[step])});
    }
}

double alm_reference_value(const NestedProblem& problem, const Aggregator& agg, double budget,
                           std::uint64_t seed, const ExecPolicy& exec) {
    const long outer = std::max(1L, static_cast<long>(std::lround(std::pow(budget, 2.0 / 3.0))));
    const long inner = std::max(1L, static_cast<long>(std::lround(std::cbrt(budget))));
    return nested_estimate(problem, agg, outer, inner, seed, exec).value;
}

void run_alm_rmse(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    EstimatorConfig est = resolve_estimator(cfg);
    const int t = static_cast<int>(integer(cfg, "experiment", "t", 10));
    const double budget = num(cfg, "experiment", "reference_budget", 1e6);
    const auto eps_grid = numbers(cfg, "experiment", "epsilon_grid", {0.25, 0.125, 0.0625});
    const auto j_grid = integers(cfg, "experiment", "j_grid", {1000, 10000, 100000});
    const auto lsmc_features = integers(cfg, "experiment", "lsmc_features", {5, 2, 1});
    const auto nr_by_dim = integers(cfg, "experiment", "n_r_by_dim", {50, 23, 13});
    const NestedProblem problem = scr_problem(t, alm, market, shocks);
    const Aggregator agg = scr_interest_aggregator();
    const double reference =
        alm_reference_value(problem, agg, budget, run.seed ^ 0x9E3779B97F4A7C15ull, run.exec);
    CsvWriter csv(out / "alm-rmse.csv",
                  {"estimator", "size", "cost", "rmse", "mean", "reference"});
    for (double eps : eps_grid) {
        est.epsilon = eps;
        const LevelSchedule schedule = schedule_antithetic(est);
        const Aggregator aggs[] = {agg};
        std::vector<double> estimates;
        for (int rep = 0; rep < run.n_batch; ++rep)
            estimates.push_back(antithetic_mlmc_estimate(problem, aggs, schedule,
                                                         run.seed + static_cast<std::uint64_t>(rep),
                                                         run.exec)[0]
                                    .value);
        const auto stats = mean_and_variance(estimates);
        csv.write_row({"mlmc_antithetic", CsvWriter::format_number(eps),
                       CsvWriter::format_number(schedule.total_cost(1.0)),
                       CsvWriter::format_number(empirical_rmse(estimates, reference)),
                       CsvWriter::format_number(stats.mean), CsvWriter::format_number(reference)});
    }
    const int cache_years = alm.horizon_years + alm.ladder_years;
    const VasicekCache cache(market, market.shift, cache_years);
    for (std::size_t dim = 1; dim <= lsmc_features.size(); ++dim) {
        const std::vector<long> chosen(lsmc_features.begin(), lsmc_features.begin() + dim);
        const int n_r = static_cast<int>(nr_by_dim[std::min(dim, nr_by_dim.size()) - 1]);
        const FeatureMap features = [chosen, &cache](const std::any& outer, std::span<double> f) {
            const auto& sample =
                *std::any_cast<const std::shared_ptr<const ScrOuterSample>&>(outer);
            const auto all = risk_factors(sample.sheet, sample.market, cache);
            for (std::size_t k = 0; k < chosen.size(); ++k) f[k] = all[chosen[k] - 1];
        };
        for (long j : j_grid) {
            HypercubePartition partition;
            partition.dims = static_cast<int>(dim);
            partition.cells_per_axis = n_r;
            std::vector<double> estimates;
            for (int rep = 0; rep < run.n_batch; ++rep)
                estimates.push_back(lsmc_estimate(problem, features, static_cast<int>(dim), j,
                                                  partition,
                                                  run.seed + static_cast<std::uint64_t>(rep),
                                                  run.exec)
                                        .value);
            const auto stats = mean_and_variance(estimates);
            csv.write_row({"lsmc_dim" + std::to_string(dim), std::to_string(j),
                           CsvWriter::format_number(static_cast<double>(j)),
                           CsvWriter::format_number(empirical_rmse(estimates, reference)),
                           CsvWriter::format_number(stats.mean),
                           CsvWriter::format_number(reference)});
        }
    }
}

void run_alm_eta(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    EstimatorConfig est = resolve_estimator(cfg);
    const int t = static_cast<int>(integer(cfg, "experiment", "t", 10));
    const double budget = num(cfg, "experiment", "reference_budget", 1e6);
    const auto eta_grid = numbers(cfg, "experiment", "eta_grid", {0.5, 0.75, 1.0});
    const auto eps_grid = numbers(cfg, "experiment", "epsilon_grid", {0.25, 0.125, 0.0625});
    const NestedProblem problem = scr_problem(t, alm, market, shocks);
    const Aggregator agg = scr_interest_aggregator();
    const double reference =
        alm_reference_value(problem, agg, budget, run.seed ^ 0x9E3779B97F4A7C15ull, run.exec);
    CsvWriter csv(out / "alm-eta.csv", {"eta", "epsilon", "cost", "rmse", "mean", "reference"});
    const Aggregator aggs[] = {agg};
    for (double eta : eta_grid) {
        for (double eps : eps_grid) {
            est.eta = eta;
            est.epsilon = eps;
            const LevelSchedule schedule = schedule_antithetic(est);
            std::vector<double> estimates;
            for (int rep = 0; rep < run.n_batch; ++rep)
                estimates.push_back(antithetic_mlmc_estimate(problem, aggs, schedule,
                                                             run.seed +
                                                                 static_cast<std::uint64_t>(rep),
                                                             run.exec)[0]
                                        .value);
            const auto stats = mean_and_variance(estimates);
            csv.write_row({eta, eps, schedule.total_cost(1.0),
                           empirical_rmse(estimates, reference), stats.mean, reference});
        }
    }
}

void run_alm_sensitivity(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    const EstimatorConfig est = resolve_estimator(cfg);
    const int t = static_cast<int>(integer(cfg, "experiment", "t", 10));
    const double d_s0 = num(cfg, "experiment", "delta_s0", 0.01);
    const double d_r0 = num(cfg, "experiment", "delta_r0", 0.001);
    CsvWriter csv(out / "alm-sensitivity.csv", {"bump", "delta", "sensitivity"});
    const double sens_s0 =
        scr_sensitivity(t, BumpKind::initial_stock, d_s0, est, alm, market, shocks, run.seed,
                        run.exec);
    csv.write_row({"s0", CsvWriter::format_number(d_s0), CsvWriter::format_number(sens_s0)});
    const double sens_r0 =
        scr_sensitivity(t, BumpKind::initial_rate, d_r0, est, alm, market, shocks, run.seed,
                        run.exec);
    csv.write_row({"r0", CsvWriter::format_number(d_r0), CsvWriter::format_number(sens_r0)});
}

void run_alm_premia(ConfigFile& cfg, const std::filesystem::path& out) {
    const RunSettings run = resolve_run(cfg);
    const ALMParams alm = resolve_alm(cfg);
    const MarketParams market = resolve_market(cfg);
    const RateShock shocks = resolve_shock_table(cfg);
    const auto t_grid = integers(cfg, "experiment", "t_grid", {5, 10});
    const auto lambda_w_grid = numbers(cfg, "experiment", "lambda_w_grid", {0.0, 0.1, 0.2});
    const auto lambda_z_grid = numbers(cfg, "experiment", "lambda_z_grid", {0.0, 0.1, 0.2});
    const long outer = integer(cfg, "experiment", "outer_j", 400);
    const long inner = integer(cfg, "experiment", "inner_k", 50);
    CsvWriter csv(out / "alm-premia.csv",
                  {"module", "lambda_w", "lambda_z", "t", "value", "stderr"});
    const int cache_years = alm.horizon_years + alm.ladder_years;
    for (long t : t_grid) {
        // The pricing-measure paths do not depend on the premia, so one set of
        // simulations serves every lambda through the weight L_t.
        const NestedProblem problem = scr_problem(static_cast<int>(t), alm, market, shocks);
        const auto samples = collect_scr_samples(problem, market, market.shift, cache_years,
                                                 outer, inner, run.seed, run.exec);
        const auto weighted = [&](double lw, double lz, auto module) {
            std::vector<double> values(samples.size());
            const double drift =
                0.5 * (lw * lw + lz * lz + 2.0 * market.correlation * lw * lz) *
                static_cast<double>(t);
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const double weight =
                    std::exp(lw * samples[i].cum_dw + lz * samples[i].cum_dz - drift);
                values[i] = weight * module(samples[i]);
            }
            const auto stats = mean_and_variance(values);
            return std::pair<double, double>(
                stats.mean, std::sqrt(stats.variance / static_cast<double>(values.size())));
        };
        for (double lz : lambda_z_grid) {
            const auto [value, se] =
                weighted(0.0, lz, [](const ScrSample& s) { return s.scr_int; });
            csv.write_row({"scr_int", 0.0, lz, static_cast<double>(t), value, se});
        }
        for (double lw : lambda_w_grid) {
            const auto [value, se] =
                weighted(lw, 0.0, [](const ScrSample& s) { return s.scr_eq; });
            csv.write_row({"scr_eq", lw, 0.0, static_cast<double>(t), value, se});
        }
    }
}

}  // namespace

std::vector<std::string> experiment_names() {
    return {"toy-bias",  "toy-levelvar", "toy-rmse",        "toy-lsmc",  "alm-select",
            "alm-rmse",  "alm-eta",      "alm-frontier",    "alm-sensitivity", "alm-premia"};
}

bool is_experiment(const std::string& name) {
    const auto names = experiment_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

MarketParams resolve_market(ConfigFile& cfg) {
    MarketParams p;
    p.s0 = num(cfg, "market", "s0", 1.0);
    p.sigma_s = num(cfg, "market", "sigma_s", 0.1);
    p.x0 = num(cfg, "market", "x0", 0.02);
    p.mean_reversion = num(cfg, "market", "k", 0.2);
    p.theta = num(cfg, "market", "theta", 0.02);
    p.sigma_r = num(cfg, "market", "sigma_r", 0.01);
    p.correlation = num(cfg, "market", "gamma", 0.0);
    p.lambda_w = num(cfg, "market", "lambda_w", 0.0);
    p.lambda_z = num(cfg, "market", "lambda_z", 0.0);
    p.shift.annual = numbers(cfg, "market", "shift", {});
    p.shift.extrapolation = num(cfg, "market", "shift_extrapolation",
                                p.shift.annual.empty() ? 0.0 : p.shift.annual.back());
    p.validate();
    return p;
}

ALMParams resolve_alm(ConfigFile& cfg) {
    ALMParams p;
    p.equity_weight = num(cfg, "alm", "w_s", 0.05);
    p.participation = num(cfg, "alm", "participation", 0.9);
    p.min_guaranteed_rate = num(cfg, "alm", "r_g", 0.015);
    p.base_exit_rate = num(cfg, "alm", "exit_rate", 0.05);
    p.dsr_max = num(cfg, "alm", "dsr_max", 0.3);
    p.dsr_alpha = num(cfg, "alm", "dsr_alpha", -0.05);
    p.dsr_beta = num(cfg, "alm", "dsr_beta", -0.01);
    p.psr_smoothing = num(cfg, "alm", "psr_smoothing", 0.5);
    p.ladder_years = static_cast<int>(integer(cfg, "alm", "ladder_years", 20));
    p.horizon_years = static_cast<int>(integer(cfg, "alm", "horizon_years", 30));
    p.initial_reserve = num(cfg, "alm", "mr0", 1.0);
    p.equity_shock = num(cfg, "alm", "equity_shock", 0.39);
    p.validate();
    return p;
}

EstimatorConfig resolve_estimator(ConfigFile& cfg) {
    EstimatorConfig p;
    p.epsilon = num(cfg, "estimator", "epsilon", 0.0625);
    p.eta = num(cfg, "estimator", "eta", 0.75);
    p.base_inner_count = static_cast<int>(integer(cfg, "estimator", "k0", 2));
    p.validate();
    return p;
}

ButterflyParams resolve_butterfly(ConfigFile& cfg) {
    ButterflyParams p;
    p.s0 = num(cfg, "butterfly", "s0", 100.0);
    p.sigma = num(cfg, "butterfly", "sigma", 0.3);
    p.strike_low = num(cfg, "butterfly", "k1", 50.0);
    p.strike_high = num(cfg, "butterfly", "k2", 150.0);
    p.maturity = num(cfg, "butterfly", "maturity", 2.0);
    p.horizon = num(cfg, "butterfly", "horizon", 1.0);
    p.shock_up = num(cfg, "butterfly", "shock_up", 0.2);
    p.shock_down = num(cfg, "butterfly", "shock_down", -0.2);
    p.validate();
    return p;
}

RateShock resolve_shock_table(ConfigFile& cfg) {
    const std::string path = text(cfg, "market", "shock_table", "");
    if (path.empty()) return RateShock::default_table();
    return RateShock::from_file(path);
}

RunSettings resolve_run(ConfigFile& cfg) {
    RunSettings run;
    run.seed = static_cast<std::uint64_t>(integer(cfg, "run", "seed", 12345));
    run.n_batch = static_cast<int>(integer(cfg, "run", "n_batch", 10));
    run.exec.threads = static_cast<int>(integer(cfg, "run", "threads", 0));
    if (run.n_batch < 1) throw ConfigError("run: n_batch must be >= 1");
    return run;
}

void run_experiment(const std::string& name, ConfigFile& config,
                    const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    // Manifests carry these; consume them so a manifest re-run is clean.
    config.get_string("run", "experiment", name);
    config.get_string("run", "version", "1");
    if (name == "toy-bias") run_toy_bias(config, out_dir);
    else if (name == "toy-levelvar") run_toy_levelvar(config, out_dir);
    else if (name == "toy-rmse") run_toy_rmse(config, out_dir);
    else if (name == "toy-lsmc") run_toy_lsmc(config, out_dir);
    else if (name == "alm-select") run_alm_select(config, out_dir);
    else if (name == "alm-rmse") run_alm_rmse(config, out_dir);
    else if (name == "alm-eta") run_alm_eta(config, out_dir);
    else if (name == "alm-frontier") run_alm_frontier(config, out_dir);
    else if (name == "alm-sensitivity") run_alm_sensitivity(config, out_dir);
    else if (name == "alm-premia") run_alm_premia(config, out_dir);
    else throw ConfigError("unknown experiment '" + name + "'");
    config.ensure_fully_consumed();
    write_manifest(name, config, out_dir);
}

}  // namespace scrmlmc
