#include "scrmlmc/alm.hpp"

#include <cmath>

#include "scrmlmc/numerics.hpp"

namespace scrmlmc {

namespace {

void ensure(bool condition, const char* message) {
    if (!condition) throw std::logic_error(message);
}

struct WaterfallResult {
    CreditingCase credit_case = CreditingCase::A;
    double realize = 0.0;  // latent equity gain (+) or loss (-) realized
    double credited = 0.0;
    double rate = 0.0;
    double psr_release = 0.0;
    double psr_feed = 0.0;
    double margin = 0.0;
};

// Step 4. `gains` are the period's realized financial gains (coupons and
// realized equity results), `latent` the unrealized equity gain or loss.
WaterfallResult crediting_waterfall(double gains, double reserve_base, double latent, double psr,
                                    double competitor_rate, const ALMParams& p) {
    WaterfallResult w;
    if (reserve_base <= 0.0) {
        w.rate = p.min_guaranteed_rate;
        w.margin = gains;
        return w;
    }
    const double release_cap = p.psr_smoothing * psr;
    const double target_rate =
        std::max({p.min_guaranteed_rate, competitor_rate, p.participation * gains / reserve_base});
    const double target_amount = target_rate * reserve_base;
    const double slack = gains + release_cap - target_amount;
    bool reached = false;
    if (latent <= 0.0) {
        if (slack + latent >= 0.0) {
            w.credit_case = CreditingCase::A;
            w.realize = latent;  // all latent losses absorbed
            reached = true;
        } else if (slack >= 0.0) {
            w.credit_case = CreditingCase::B;
            w.realize = -slack;  // partial loss realization
            reached = true;
        }
    } else {
        if (slack >= 0.0) {
            w.credit_case = CreditingCase::A;
            reached = true;
        } else if (slack + latent >= 0.0) {
            w.credit_case = CreditingCase::B;
            w.realize = -slack;  // just enough latent gain
            reached = true;
        }
    }
    if (reached) {
        const double income = gains + w.realize;
        w.credited = target_amount;
        w.psr_release = std::min(release_cap, std::max(0.0, target_amount - income));
        const double surplus = income + w.psr_release - target_amount;
        w.psr_feed = p.psr_smoothing * surplus;
        w.margin = surplus - w.psr_feed;
    } else {
        w.realize = std::max(latent, 0.0);  // all latent gains
        const double income = gains + w.realize;
        if (income + release_cap >= p.min_guaranteed_rate * reserve_base) {
            w.credit_case = CreditingCase::C;
            w.psr_release = release_cap;
            w.credited = std::min(target_amount, income + release_cap);
            w.margin = income + w.psr_release - w.credited;
        } else {
            w.credit_case = CreditingCase::D;
            w.psr_release = psr;  // cleared out
            w.credited = std::max(p.min_guaranteed_rate * reserve_base,
                                  p.participation * std::max(income, 0.0));
            w.margin = income + w.psr_release - w.credited;
        }
    }
    w.rate = w.credited / reserve_base;
    return w;
}

CreditingOutcome frozen_outcome() { return CreditingOutcome{CreditingCase::D, 0.0, 0.0, 0.0, 0.0}; }

}  // namespace

void ALMParams::validate() const {
    if (equity_weight < 0.0 || equity_weight > 1.0)
        throw ConfigError("alm params: w_S must lie in [0,1]");
    if (participation < 0.0 || participation > 1.0)
        throw ConfigError("alm params: participation must lie in [0,1]");
    if (!(dsr_alpha < dsr_beta) || dsr_beta > 0.0)
        throw ConfigError("alm params: need alpha < beta <= 0");
    if (base_exit_rate < 0.0 || base_exit_rate > 1.0)
        throw ConfigError("alm params: exit rate must lie in [0,1]");
    if (psr_smoothing < 0.0 || psr_smoothing > 1.0)
        throw ConfigError("alm params: PSR smoothing must lie in [0,1]");
    if (ladder_years < 1 || horizon_years < 1)
        throw ConfigError("alm params: ladder and horizon must be >= 1");
    if (!(initial_reserve > 0.0)) throw ConfigError("alm params: MR0 must be > 0");
    if (equity_shock < 0.0 || equity_shock >= 1.0)
        throw ConfigError("alm params: equity shock must lie in [0,1)");
}

double dsr(double delta, const ALMParams& p) {
    if (delta <= p.dsr_alpha) return p.dsr_max;
    if (delta < p.dsr_beta) return p.dsr_max * (p.dsr_beta - delta) / (p.dsr_beta - p.dsr_alpha);
    return 0.0;
}

BalanceSheet initial_sheet(const ALMParams& params, const MarketParams& market,
                           const ShiftCurve& shift) {
    params.validate();
    market.validate();
    const int n = params.ladder_years;
    BalanceSheet sheet;
    sheet.reserve = params.initial_reserve;
    sheet.equity_book = params.equity_weight * params.initial_reserve;
    sheet.equity_units = sheet.equity_book / market.s0;
    std::vector<double> zc(n);
    for (int i = 1; i <= n; ++i) zc[i - 1] = zc_price(0, i, market.x0, market, shift);
    sheet.coupons.resize(n);
    sheet.bond_unit_book.resize(n);
    for (int i = 1; i <= n; ++i) {
        sheet.coupons[i - 1] = swap_rate(zc, i);
        sheet.bond_unit_book[i - 1] = bond_value(zc, i, sheet.coupons[i - 1]);  // par, cost basis
        ensure(std::fabs(sheet.bond_unit_book[i - 1] - 1.0) <= 1e-12,
               "initial ladder is not at par");
    }
    const double bond_market = (1.0 - params.equity_weight) * params.initial_reserve;
    const double pbar = portfolio_value(zc, sheet.coupons);
    sheet.bond_units = bond_market / pbar;
    sheet.bond_book = sheet.bond_units / n *
                      pairwise_sum(std::span<const double>(sheet.bond_unit_book));
    sheet.market_value = params.initial_reserve;
    sheet.crediting_rate = market.x0 + shift.value(0.0);  // no spread in the first year
    return sheet;
}

CreditingOutcome step_year(BalanceSheet& sheet, const MarketState& prev_market,
                           const MarketState& market, bool liquidate, const ALMParams& p,
                           const VasicekCache& curve, StepWorkspace& ws) {
    if (sheet.insolvent) return frozen_outcome();
    const int n = p.ladder_years;
    const int t = market.year;
    ws.zc.resize(n);
    for (int i = 1; i <= n; ++i) ws.zc[i - 1] = curve.zc(t, i, market.factor);

    // Step 1: bond cash inflows and book movements.
    const double nominal = sheet.bond_units / n;
    double coupon_income = 0.0;
    for (double c : sheet.coupons) coupon_income += c;
    coupon_income *= nominal;
    double realized_bond = (1.0 - sheet.bond_unit_book[0]) * nominal;

    // Step 2: exits, remunerated at half the guaranteed rate for the year.
    const double spread = sheet.crediting_rate - prev_market.short_rate;
    const double exit_rate = std::min(1.0, p.base_exit_rate + dsr(spread, p));
    const double exit_payment = exit_rate * sheet.reserve * (1.0 + 0.5 * p.min_guaranteed_rate);
    const double reserve_base = sheet.reserve * (1.0 - exit_rate);

    double cash = nominal + coupon_income - exit_payment;

    // Aged ladder: a bond with maturity i+1 becomes one with maturity i.
    ws.aged_price.resize(n - 1);
    for (int i = 1; i <= n - 1; ++i)
        ws.aged_price[i - 1] = bond_value(ws.zc, i, sheet.coupons[i]);

    double equity_units = sheet.equity_units;
    double equity_book = sheet.equity_book;
    double bucket_qty = nominal;
    double realized_equity = 0.0;

    double equity_mv = equity_units * market.stock;
    double aged_sum = 0.0;
    for (double price : ws.aged_price) aged_sum += price;
    double market_value = cash + equity_mv + bucket_qty * aged_sum;

    if (market_value <= 0.0) {
        sheet = BalanceSheet{};
        sheet.insolvent = true;
        CreditingOutcome out = frozen_outcome();
        out.pnl = market_value;  // shortfall absorbed by the shareholder
        return out;
    }

    // Negative liquidity gap: sell assets pro-rata at market before the
    // reallocation, registering the realized results.
    if (cash < 0.0) {
        const double assets = equity_mv + bucket_qty * aged_sum;
        const double fraction = std::min(1.0, -cash / assets);
        realized_equity += fraction * (equity_mv - equity_book);
        equity_units *= (1.0 - fraction);
        equity_book *= (1.0 - fraction);
        for (int i = 1; i <= n - 1; ++i)
            realized_bond += fraction * bucket_qty *
                             (ws.aged_price[i - 1] - sheet.bond_unit_book[i]);
        bucket_qty *= (1.0 - fraction);
        equity_mv = equity_units * market.stock;
        cash += fraction * assets;
    }

    double latent = 0.0;
    if (liquidate) {
        realized_equity += equity_mv - equity_book;
        for (int i = 1; i <= n - 1; ++i)
            realized_bond += bucket_qty * (ws.aged_price[i - 1] - sheet.bond_unit_book[i]);
        equity_units = 0.0;
        equity_book = 0.0;
        bucket_qty = 0.0;
        sheet.bond_units = 0.0;
        sheet.bond_book = 0.0;
        sheet.coupons.assign(n, 0.0);
        sheet.bond_unit_book.assign(n, 0.0);
    } else {
        // Step 3: reallocation to the target weights.
        const double target_units = p.equity_weight * market_value / market.stock;
        if (target_units >= equity_units) {
            equity_book += (target_units - equity_units) * market.stock;
        } else {
            const double proceeds = (equity_units - target_units) * market.stock;
            const double book_removed = equity_book * (1.0 - target_units / equity_units);
            realized_equity += proceeds - book_removed;
            equity_book -= book_removed;
        }
        equity_units = target_units;

        const double new_coupon = swap_rate(ws.zc, n);
        const double par_price = bond_value(ws.zc, n, new_coupon);
        ensure(std::fabs(par_price - 1.0) <= 1e-12, "newly issued bond is not at par");
        const double pbar = (aged_sum + par_price) / n;
        const double target_bond_units = (1.0 - p.equity_weight) * market_value / pbar;
        const double qty_new = target_bond_units / n;
        for (int i = 1; i <= n - 1; ++i) {
            const double book = sheet.bond_unit_book[i];
            const double price = ws.aged_price[i - 1];
            if (qty_new < bucket_qty) {
                realized_bond += (price - book) * (bucket_qty - qty_new);
                sheet.bond_unit_book[i - 1] = book;
            } else {
                sheet.bond_unit_book[i - 1] =
                    (bucket_qty * book + (qty_new - bucket_qty) * price) / qty_new;
            }
            sheet.coupons[i - 1] = sheet.coupons[i];
        }
        sheet.coupons[n - 1] = new_coupon;
        sheet.bond_unit_book[n - 1] = par_price;
        sheet.bond_units = target_bond_units;
        double book_sum = 0.0;
        for (double b : sheet.bond_unit_book) book_sum += b;
        sheet.bond_book = qty_new * book_sum;
        latent = equity_units * market.stock - equity_book;
    }

    // Bond capital results feed the capitalization reserve; losses beyond it
    // hit the period P&L.
    double excess_loss = 0.0;
    double cr = sheet.cr + realized_bond;
    if (cr < 0.0) {
        excess_loss = -cr;
        cr = 0.0;
    }

    // Step 4: crediting.
    const double gains = coupon_income + realized_equity;
    const WaterfallResult w =
        crediting_waterfall(gains, reserve_base, latent, sheet.psr, market.short_rate, p);
    ensure(w.rate >= p.min_guaranteed_rate - 1e-12, "crediting rate fell below the floor");
    if (w.credit_case == CreditingCase::A || w.credit_case == CreditingCase::B)
        ensure(w.credited + 1e-9 * (1.0 + std::fabs(gains)) >= p.participation * gains,
               "participation bound violated");
    equity_book += w.realize;

    const double reserve_new = reserve_base + w.credited;
    double psr = sheet.psr - w.psr_release + w.psr_feed;
    ensure(psr >= -1e-12, "PSR went negative");
    psr = std::max(psr, 0.0);

    // Step 5: externalization of the margin and of the CR interest.
    const double one_year_rate = 1.0 / curve.zc(t - 1, 1, prev_market.factor) - 1.0;
    const double cr_interest = sheet.cr * one_year_rate;

    CreditingOutcome out;
    out.credit_case = w.credit_case;
    out.credited_rate = w.rate;
    out.margin = w.margin;
    out.realized_equity_gain = realized_equity;

    if (liquidate) {
        out.pnl = market_value - reserve_new;  // residual after paying back MR
        sheet.equity_units = 0.0;
        sheet.equity_book = 0.0;
        sheet.reserve = reserve_new;
        sheet.psr = 0.0;
        sheet.cr = 0.0;
        sheet.market_value = 0.0;
        sheet.crediting_rate = w.rate;
        return out;
    }

    out.pnl = w.margin + cr_interest - excess_loss;
    const double market_value_final = market_value - out.pnl;
    if (market_value_final <= 0.0) {
        sheet = BalanceSheet{};
        sheet.insolvent = true;
        out.pnl = market_value;
        return out;
    }
    const double scale = market_value_final / market_value;
    sheet.equity_units = equity_units * scale;
    sheet.equity_book = equity_book * scale;
    sheet.bond_units *= scale;
    sheet.bond_book *= scale;
    sheet.reserve = reserve_new;
    sheet.psr = psr;
    sheet.cr = cr;
    sheet.market_value = market_value_final;
    sheet.crediting_rate = w.rate;
    ensure(std::fabs(sheet.equity_units * market.stock / sheet.market_value - p.equity_weight) <=
               1e-10 * (1.0 + p.equity_weight),
           "post-reallocation equity weight missed the target");
    return out;
}

std::vector<YearOutcome> project(const BalanceSheet& sheet, std::span<const MarketState> states,
                                 const ALMParams& params, const VasicekCache& curve) {
    std::vector<YearOutcome> out;
    if (states.size() < 2) return out;
    out.reserve(states.size() - 1);
    BalanceSheet current = sheet;
    StepWorkspace ws;
    for (std::size_t i = 1; i < states.size(); ++i) {
        const bool liquidate = states[i].year == params.horizon_years;
        CreditingOutcome credit =
            step_year(current, states[i - 1], states[i], liquidate, params, curve, ws);
        out.push_back({current, credit});
    }
    return out;
}

namespace {

MarketState shocked_start(const MarketState& market, ScrShockKind shock,
                          const ShiftCurve& shift, const ALMParams& params) {
    MarketState start = market;
    switch (shock) {
        case ScrShockKind::equity:
            start.stock *= (1.0 - params.equity_shock);
            break;
        case ScrShockKind::rate_up:
        case ScrShockKind::rate_down:
            start.short_rate = start.factor + shift.value(static_cast<double>(start.year));
            break;
        case ScrShockKind::none:
            break;
    }
    return start;
}

// Discounted P&L of one inner path driven by the given Gaussian triples.
double inner_discounted_pnl(const BalanceSheet& sheet, const MarketState& start,
                            std::span<const GaussianTriple> triples, const ALMParams& params,
                            const MarketParams& market_params, const ShiftCurve& shift,
                            const VasicekCache& curve, StepWorkspace& ws) {
    BalanceSheet current = sheet;
    MarketState prev = start;
    double discount = 1.0;
    double total = 0.0;
    for (std::size_t i = 0; i < triples.size(); ++i) {
        const MarketState next = step_exact(prev, market_params, shift, triples[i]);
        discount *= discount_increment(next, shift);
        const bool liquidate = next.year == params.horizon_years;
        const CreditingOutcome credit =
            step_year(current, prev, next, liquidate, params, curve, ws);
        total += discount * credit.pnl;
        prev = next;
    }
    return total;
}

struct ScrContext {
    int t = 0;
    ALMParams alm;
    MarketParams market;
    RateShock shocks;
    BalanceSheet sheet0;
    std::shared_ptr<const VasicekCache> curve_base;
};

std::shared_ptr<const ScrOuterSample> make_outer_sample(const ScrContext& ctx, RngStream& rng) {
    auto sample = std::make_shared<ScrOuterSample>();
    MarketState state = initial_state(ctx.market, ctx.market.shift);
    BalanceSheet sheet = ctx.sheet0;
    StepWorkspace ws;
    MarketState prev = state;
    for (int year = 1; year <= ctx.t; ++year) {
        const GaussianTriple triple =
            gaussian_triple(rng, ctx.market.mean_reversion, ctx.market.correlation);
        const MarketState next = step_exact(prev, ctx.market, ctx.market.shift, triple);
        step_year(sheet, prev, next, next.year == ctx.alm.horizon_years, ctx.alm,
                  *ctx.curve_base, ws);
        prev = next;
    }
    sample->sheet = std::move(sheet);
    sample->market = prev;
    const int horizon = ctx.alm.horizon_years - ctx.t + ctx.alm.ladder_years;
    const auto zero = zero_curve(ctx.t, prev.factor, ctx.market, ctx.market.shift, horizon);
    sample->shift_up = apply_rate_shock(zero, ctx.shocks, ShockDirection::up, ctx.t, prev.factor,
                                        ctx.market, ctx.market.shift);
    sample->shift_down = apply_rate_shock(zero, ctx.shocks, ShockDirection::down, ctx.t,
                                          prev.factor, ctx.market, ctx.market.shift);
    const int cache_years = ctx.alm.horizon_years + ctx.alm.ladder_years;
    sample->curve_base = ctx.curve_base;
    sample->curve_up =
        std::make_shared<VasicekCache>(ctx.market, sample->shift_up, cache_years);
    sample->curve_down =
        std::make_shared<VasicekCache>(ctx.market, sample->shift_down, cache_years);
    return sample;
}

NestedProblem make_scr_problem(ScrContext ctx) {
    ctx.alm.validate();
    ctx.market.validate();
    if (ctx.t < 1 || ctx.t >= ctx.alm.horizon_years)
        throw ConfigError("scr_problem: t must lie in [1, T-1]");
    if (ctx.alm.horizon_years - ctx.t > 64)
        throw ConfigError("scr_problem: inner horizon exceeds 64 years");
    const int cache_years = ctx.alm.horizon_years + ctx.alm.ladder_years;
    ctx.curve_base = std::make_shared<VasicekCache>(ctx.market, ctx.market.shift, cache_years);
    auto context = std::make_shared<const ScrContext>(std::move(ctx));

    NestedProblem problem;
    problem.components = 4;
    problem.inner_cost_hint = 1.0;
    problem.sample_outer = [context](RngStream& rng) -> std::any {
        return make_outer_sample(*context, rng);
    };
    problem.weight = [](const std::any& outer) {
        return std::any_cast<const std::shared_ptr<const ScrOuterSample>&>(outer)->market.rn_weight;
    };
    problem.sample_inner = [context](const std::any& outer, RngStream& rng,
                                     std::span<double> out) {
        const auto& sample = *std::any_cast<const std::shared_ptr<const ScrOuterSample>&>(outer);
        const auto& ctx = *context;
        const int years = ctx.alm.horizon_years - ctx.t;
        GaussianTriple triples[64];
        for (int i = 0; i < years; ++i)
            triples[i] = gaussian_triple(rng, ctx.market.mean_reversion, ctx.market.correlation);
        const std::span<const GaussianTriple> path(triples, static_cast<std::size_t>(years));
        StepWorkspace ws;
        const double base =
            inner_discounted_pnl(sample.sheet, sample.market, path, ctx.alm, ctx.market,
                                 ctx.market.shift, *sample.curve_base, ws);
        const MarketState up_start =
            shocked_start(sample.market, ScrShockKind::rate_up, sample.shift_up, ctx.alm);
        const double up = inner_discounted_pnl(sample.sheet, up_start, path, ctx.alm, ctx.market,
                                               sample.shift_up, *sample.curve_up, ws);
        const MarketState down_start =
            shocked_start(sample.market, ScrShockKind::rate_down, sample.shift_down, ctx.alm);
        const double down = inner_discounted_pnl(sample.sheet, down_start, path, ctx.alm,
                                                 ctx.market, sample.shift_down,
                                                 *sample.curve_down, ws);
        const MarketState eq_start =
            shocked_start(sample.market, ScrShockKind::equity, ctx.market.shift, ctx.alm);
        const double eq = inner_discounted_pnl(sample.sheet, eq_start, path, ctx.alm, ctx.market,
                                               ctx.market.shift, *sample.curve_base, ws);
        out[0] = base - up;
        out[1] = base - down;
        out[2] = base - eq;
        out[3] = 0.0;
    };
    return problem;
}

}  // namespace

double bof(const BalanceSheet& sheet, const MarketState& market, ScrShockKind shock,
           long inner_count, const ALMParams& params, const MarketParams& market_params,
           const RateShock& shock_table, std::uint64_t seed, const ExecPolicy& exec) {
    if (inner_count < 1) throw ConfigError("bof: K must be >= 1");
    if (market.year >= params.horizon_years) throw ConfigError("bof: t must be < T");
    const int t = market.year;
    const int years = params.horizon_years - t;
    if (years > 64) throw ConfigError("bof: horizon too long");
    const int cache_years = params.horizon_years + params.ladder_years;
    ShiftCurve shift = market_params.shift;
    if (shock == ScrShockKind::rate_up || shock == ScrShockKind::rate_down) {
        const int horizon = years + params.ladder_years;
        const auto zero = zero_curve(t, market.factor, market_params, market_params.shift, horizon);
        shift = apply_rate_shock(zero, shock_table,
                                 shock == ScrShockKind::rate_up ? ShockDirection::up
                                                                : ShockDirection::down,
                                 t, market.factor, market_params, market_params.shift);
    }
    const VasicekCache curve(market_params, shift, cache_years);
    const MarketState start = shocked_start(market, shock, shift, params);
    std::vector<double> values(inner_count);
    parallel_for(inner_count, exec, [&](long k) {
        std::vector<GaussianTriple> triples(years);
        RngStream rng(seed, 1, 0, static_cast<std::uint32_t>(k + 1));
        for (int i = 0; i < years; ++i)
            triples[i] = gaussian_triple(rng, market_params.mean_reversion,
                                         market_params.correlation);
        StepWorkspace ws;
        values[k] = inner_discounted_pnl(sheet, start, triples, params, market_params, shift,
                                         curve, ws);
    });
    return pairwise_sum(values) / static_cast<double>(inner_count);
}

NestedProblem scr_problem(int t, const ALMParams& params, const MarketParams& market,
                          const RateShock& shock_table) {
    return scr_problem(t, params, market, shock_table,
                       initial_sheet(params, market, market.shift));
}

NestedProblem scr_problem(int t, const ALMParams& params, const MarketParams& market,
                          const RateShock& shock_table, BalanceSheet sheet0) {
    ScrContext ctx;
    ctx.t = t;
    ctx.alm = params;
    ctx.market = market;
    ctx.shocks = shock_table;
    ctx.sheet0 = std::move(sheet0);
    return make_scr_problem(std::move(ctx));
}

Aggregator scr_up_aggregator() {
    return {"scr_up", [](std::span<const double> m) { return std::max(m[0], 0.0); }};
}

Aggregator scr_down_aggregator() {
    return {"scr_down", [](std::span<const double> m) { return std::max(m[1], 0.0); }};
}

Aggregator scr_equity_aggregator() {
    return {"scr_eq", [](std::span<const double> m) { return std::max(m[2], 0.0); }};
}

Aggregator scr_interest_aggregator() {
    return {"scr_int",
            [](std::span<const double> m) { return std::max(std::max(m[0], m[1]), 0.0); }};
}

Aggregator scr_market_aggregator() {
    return {"scr_mkt", [](std::span<const double> m) {
                const double up = std::max(m[0], 0.0);
                const double down = std::max(m[1], 0.0);
                const double eq = std::max(m[2], 0.0);
                const double interest = std::max(up, down);
                return aggregate_mkt(eq, interest,
                                     up >= down ? ShockDirection::up : ShockDirection::down);
            }};
}

double aggregate_mkt(double scr_eq, double scr_int, ShockDirection interest_driver) {
    if (scr_eq < 0.0 || scr_int < 0.0)
        throw std::domain_error("aggregate_mkt: inputs must be nonnegative");
    const double eps = interest_driver == ShockDirection::up ? 0.0 : 0.5;
    return std::sqrt(scr_eq * scr_eq + scr_int * scr_int + 2.0 * eps * scr_eq * scr_int);
}

SCRReport make_scr_report(std::span<const double> component_means) {
    SCRReport report;
    report.scr_up = std::max(component_means[0], 0.0);
    report.scr_down = std::max(component_means[1], 0.0);
    report.scr_eq = std::max(component_means[2], 0.0);
    report.scr_int = std::max(report.scr_up, report.scr_down);
    const ShockDirection driver =
        report.scr_up >= report.scr_down ? ShockDirection::up : ShockDirection::down;
    report.epsilon_used = driver == ShockDirection::up ? 0.0 : 0.5;
    report.scr_mkt = aggregate_mkt(report.scr_eq, report.scr_int, driver);
    return report;
}

std::array<double, 12> risk_factors(const BalanceSheet& sheet, const MarketState& market,
                                    const VasicekCache& curve) {
    const int n = static_cast<int>(sheet.coupons.size());
    std::vector<double> zc(n);
    for (int i = 1; i <= n; ++i) zc[i - 1] = curve.zc(market.year, i, market.factor);
    const double pbar = portfolio_value(zc, sheet.coupons);
    return {market.stock,
            market.short_rate,
            sheet.equity_units,
            sheet.bond_units,
            sheet.bond_book,
            sheet.equity_book,
            sheet.reserve,
            sheet.psr,
            sheet.cr,
            sheet.market_value,
            sheet.bond_units * pbar,
            sheet.equity_units * market.stock};
}

double scr_sensitivity(int t, BumpKind bump, double delta, const EstimatorConfig& config,
                       const ALMParams& params, const MarketParams& market,
                       const RateShock& shock_table, std::uint64_t seed, const ExecPolicy& exec) {
    if (delta == 0.0) throw ConfigError("scr_sensitivity: bump must be nonzero");
    const BalanceSheet sheet0 = initial_sheet(params, market, market.shift);
    MarketParams bumped = market;
    if (bump == BumpKind::initial_stock)
        bumped.s0 += delta;
    else
        bumped.x0 += delta;
    const LevelSchedule schedule = schedule_antithetic(config);
    const Aggregator agg[] = {scr_market_aggregator()};
    const auto base_reports = antithetic_mlmc_estimate(
        scr_problem(t, params, market, shock_table, sheet0), agg, schedule, seed, exec);
    const auto bump_reports = antithetic_mlmc_estimate(
        scr_problem(t, params, bumped, shock_table, sheet0), agg, schedule, seed, exec);
    return (bump_reports[0].value - base_reports[0].value) / delta;
}

}  // namespace scrmlmc
