#pragma once

#include <array>
#include <memory>

#include "scrmlmc/estimator.hpp"
#include "scrmlmc/market.hpp"

namespace scrmlmc {

struct ALMParams {
    double equity_weight = 0.05;       // w_S
    double participation = 0.9;        // pi_pr
    double min_guaranteed_rate = 0.015;
    double base_exit_rate = 0.05;
    double dsr_max = 0.3;
    double dsr_alpha = -0.05;
    double dsr_beta = -0.01;
    double psr_smoothing = 0.5;        // rho_bar
    int ladder_years = 20;             // n
    int horizon_years = 30;            // T
    double initial_reserve = 1.0;      // MR_0
    double equity_shock = 0.39;        // relative drop of S under the equity shock

    void validate() const;
};

struct BalanceSheet {
    double equity_units = 0.0;           // phi_S
    double bond_units = 0.0;             // phi_b (n buckets of bond_units/n each)
    std::vector<double> coupons;         // c^1..c^n
    std::vector<double> bond_unit_book;  // book value per unit, per bucket
    double equity_book = 0.0;
    double bond_book = 0.0;
    double reserve = 0.0;  // MR
    double psr = 0.0;
    double cr = 0.0;
    double market_value = 0.0;  // post-step market value of assets
    double crediting_rate = 0.0;  // last credited rate (drives next year's DSR)
    bool insolvent = false;
};

enum class CreditingCase { A, B, C, D };

struct CreditingOutcome {
    CreditingCase credit_case = CreditingCase::A;
    double credited_rate = 0.0;
    double margin = 0.0;
    double pnl = 0.0;
    double realized_equity_gain = 0.0;
};

// Dynamic surrender rate as a function of the crediting-competitor spread.
double dsr(double delta, const ALMParams& params);

BalanceSheet initial_sheet(const ALMParams& params, const MarketParams& market,
                           const ShiftCurve& shift);

struct StepWorkspace {
    std::vector<double> zc;
    std::vector<double> aged_price;
};

// One year of the five-step reallocation; `liquidate` replaces the final
// reallocation by a full clearing with MR paid back. The sheet is advanced in
// place; the outcome carries the crediting case and the period P&L.
CreditingOutcome step_year(BalanceSheet& sheet, const MarketState& prev_market,
                           const MarketState& market, bool liquidate, const ALMParams& params,
                           const VasicekCache& curve, StepWorkspace& ws);

struct YearOutcome {
    BalanceSheet sheet;
    CreditingOutcome credit;
};

// Projects over states[1..], where states[0] matches the sheet's year;
// liquidates on the last state when its year equals the horizon.
std::vector<YearOutcome> project(const BalanceSheet& sheet, std::span<const MarketState> states,
                                 const ALMParams& params, const VasicekCache& curve);

enum class ScrShockKind { none, rate_up, rate_down, equity };

// Basic own funds at the sheet's date: mean over K inner paths of the
// discounted future P&L, with the shock (if any) applied immediately after t.
// Shocked and base valuations reuse identical inner Gaussian draws.
double bof(const BalanceSheet& sheet, const MarketState& market, ScrShockKind shock,
           long inner_count, const ALMParams& params, const MarketParams& market_params,
           const RateShock& shock_table, std::uint64_t seed, const ExecPolicy& exec = {});

// The SCR nested problem at date t: outer samples are pricing-measure paths
// to t weighted by L_t; one inner draw returns the single-path discounted
// P&L differences (base-up, base-down, base-equity, 0).
NestedProblem scr_problem(int t, const ALMParams& params, const MarketParams& market,
                          const RateShock& shock_table);
// Variant with a frozen initial sheet (used for bump sensitivities).
NestedProblem scr_problem(int t, const ALMParams& params, const MarketParams& market,
                          const RateShock& shock_table, BalanceSheet sheet0);

// Payload carried by scr_problem outer samples.
struct ScrOuterSample {
    BalanceSheet sheet;
    MarketState market;
    ShiftCurve shift_up;
    ShiftCurve shift_down;
    std::shared_ptr<const VasicekCache> curve_base;
    std::shared_ptr<const VasicekCache> curve_up;
    std::shared_ptr<const VasicekCache> curve_down;
};

Aggregator scr_up_aggregator();
Aggregator scr_down_aggregator();
Aggregator scr_equity_aggregator();
Aggregator scr_interest_aggregator();
Aggregator scr_market_aggregator();

// Standard-formula market aggregation; epsilon is 0 when the interest
// exposure comes from the upward shock and 1/2 when from the downward one.
double aggregate_mkt(double scr_eq, double scr_int, ShockDirection interest_driver);

struct SCRReport {
    double scr_up = 0.0;
    double scr_down = 0.0;
    double scr_int = 0.0;
    double scr_eq = 0.0;
    double scr_mkt = 0.0;
    double epsilon_used = 0.0;
};

// Builds the module report from the conditional means (up, down, eq, 0).
SCRReport make_scr_report(std::span<const double> component_means);

// Table 3 risk factors, in table order.
std::array<double, 12> risk_factors(const BalanceSheet& sheet, const MarketState& market,
                                    const VasicekCache& curve);

enum class BumpKind { initial_stock, initial_rate };

// Finite-difference sensitivity of E[SCR_mkt at t] with common random
// numbers; the initial sheet is formed at the base parameters and only the
// simulated market is bumped.
double scr_sensitivity(int t, BumpKind bump, double delta, const EstimatorConfig& config,
                       const ALMParams& params, const MarketParams& market,
                       const RateShock& shock_table, std::uint64_t seed,
                       const ExecPolicy& exec = {});

}  // namespace scrmlmc
