#include "scrmlmc/market.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scrmlmc/estimator.hpp"

namespace scrmlmc {

namespace {

double vasicek_b(double k, double tau) { return (1.0 - std::exp(-k * tau)) / k; }

double vasicek_log_a(const MarketParams& p, double tau) {
    const double b = vasicek_b(p.mean_reversion, tau);
    const double s2 = p.sigma_r * p.sigma_r;
    const double k = p.mean_reversion;
    return (p.theta - 0.5 * s2 / (k * k)) * (b - tau) - 0.25 * s2 * b * b / k;
}

}  // namespace

double ShiftCurve::value(double t) const {
    if (t < 0.0) throw std::domain_error("shift curve: t must be >= 0");
    const auto idx = static_cast<std::size_t>(t);
    return idx < annual.size() ? annual[idx] : extrapolation;
}

double ShiftCurve::integral(int from, int to) const {
    if (from < 0 || to < from) throw std::domain_error("shift curve: bad integration bounds");
    double total = 0.0;
    for (int i = from; i < to; ++i)
        total += (static_cast<std::size_t>(i) < annual.size()) ? annual[i] : extrapolation;
    return total;
}

void MarketParams::validate() const {
    if (!(mean_reversion > 0.0)) throw ConfigError("market params: k must be > 0");
    if (sigma_s < 0.0 || sigma_r < 0.0) throw ConfigError("market params: volatilities must be >= 0");
    if (std::fabs(correlation) > 1.0) throw ConfigError("market params: |gamma| must be <= 1");
    if (!(s0 > 0.0)) throw ConfigError("market params: s0 must be > 0");
}

GaussianTriple gaussian_triple(RngStream& rng, double mean_reversion, double correlation) {
    const double k = mean_reversion;
    const double g1 = rng.normal();
    const double g2 = rng.normal();
    const double g3 = rng.normal();
    const double slope = (1.0 - std::exp(-k)) / k;
    const double a = correlation * slope;
    const double b = std::sqrt(1.0 - correlation * correlation) * slope;
    const double var = (1.0 - std::exp(-2.0 * k)) / (2.0 * k) - slope * slope;
    const double c = std::sqrt(std::max(var, 0.0));
    return {g1, g2, a * g1 + b * g2 + c * g3};
}

MarketState initial_state(const MarketParams& params, const ShiftCurve& shift) {
    MarketState state;
    state.year = 0;
    state.stock = params.s0;
    state.factor = params.x0;
    state.short_rate = params.x0 + shift.value(0.0);
    state.rn_weight = 1.0;
    return state;
}

MarketState step_exact(const MarketState& state, const MarketParams& params,
                       const ShiftCurve& shift, const GaussianTriple& triple) {
    const double k = params.mean_reversion;
    const double gamma = params.correlation;
    const double root = std::sqrt(1.0 - gamma * gamma);
    MarketState next;
    next.year = state.year + 1;
    const double decay = std::exp(-k);
    next.factor = state.factor * decay + params.theta * (1.0 - decay) +
                  params.sigma_r * triple.ou_integral;
    next.factor_integral = (state.factor - next.factor) / k + params.theta +
                           params.sigma_r / k * (gamma * triple.dw + root * triple.dz);
    const double shift_int = shift.integral(state.year, next.year);
    next.stock = state.stock * std::exp(next.factor_integral + shift_int +
                                        params.sigma_s * triple.dw -
                                        0.5 * params.sigma_s * params.sigma_s);
    const double lw = params.lambda_w;
    const double lz = params.lambda_z;
    next.rn_weight = state.rn_weight *
                     std::exp(lw * triple.dw + lz * triple.dz -
                              0.5 * (lw * lw + lz * lz + 2.0 * gamma * lw * lz));
    next.short_rate = next.factor + shift.value(static_cast<double>(next.year));
    next.cum_dw = state.cum_dw + triple.dw;
    next.cum_dz = state.cum_dz + triple.dz;
    return next;
}

double discount_increment(const MarketState& state, const ShiftCurve& shift) {
    return std::exp(-(state.factor_integral + shift.integral(state.year - 1, state.year)));
}

double zc_price(int t, int maturity_years, double factor, const MarketParams& params,
                const ShiftCurve& shift) {
    if (maturity_years < 0) throw std::domain_error("zc_price: maturity must be >= 0");
    if (maturity_years == 0) return 1.0;
    const double tau = static_cast<double>(maturity_years);
    const double log_af = vasicek_log_a(params, tau) - vasicek_b(params.mean_reversion, tau) * factor;
    return std::exp(log_af - shift.integral(t, t + maturity_years));
}

VasicekCache::VasicekCache(const MarketParams& params, const ShiftCurve& shift, int max_year) {
    affine_a_.resize(max_year + 1);
    affine_b_.resize(max_year + 1);
    shift_prefix_.resize(max_year + 1);
    shift_prefix_[0] = 0.0;
    for (int i = 0; i <= max_year; ++i) {
        const double tau = static_cast<double>(i);
        affine_a_[i] = vasicek_log_a(params, tau);
        affine_b_[i] = vasicek_b(params.mean_reversion, tau);
        if (i > 0) shift_prefix_[i] = shift_prefix_[i - 1] + shift.integral(i - 1, i);
    }
}

double VasicekCache::zc(int t, int maturity_years, double factor) const {
    if (maturity_years == 0) return 1.0;
    const double shift_int = shift_prefix_[t + maturity_years] - shift_prefix_[t];
    return std::exp(affine_a_[maturity_years] - affine_b_[maturity_years] * factor - shift_int);
}

double swap_rate(std::span<const double> zc, int n) {
    if (n < 1 || static_cast<std::size_t>(n) > zc.size())
        throw std::domain_error("swap_rate: need prices out to maturity n");
    double annuity = 0.0;
    for (int i = 0; i < n; ++i) annuity += zc[i];
    if (!(annuity > 0.0)) throw std::domain_error("swap_rate: zero annuity");
    return (1.0 - zc[n - 1]) / annuity;
}

double bond_value(std::span<const double> zc, int n, double coupon) {
    if (n < 1 || static_cast<std::size_t>(n) > zc.size())
        throw std::domain_error("bond_value: need prices out to maturity n");
    double value = zc[n - 1];
    for (int i = 0; i < n; ++i) value += coupon * zc[i];
    return value;
}

double portfolio_value(std::span<const double> zc, std::span<const double> coupons) {
    const int n = static_cast<int>(coupons.size());
    if (zc.size() < coupons.size())
        throw std::domain_error("portfolio_value: need prices out to the ladder length");
    double total = 0.0;
    for (int i = 1; i <= n; ++i) total += bond_value(zc, i, coupons[i - 1]);
    return total / static_cast<double>(n);
}

std::vector<double> zero_curve(int t, double factor, const MarketParams& params,
                               const ShiftCurve& shift, int max_maturity) {
    std::vector<double> rates(max_maturity);
    for (int i = 1; i <= max_maturity; ++i)
        rates[i - 1] = -std::log(zc_price(t, i, factor, params, shift)) / static_cast<double>(i);
    return rates;
}

double RateShock::at(int maturity_years, ShockDirection direction) const {
    const auto& table = (direction == ShockDirection::up) ? up : down;
    if (table.empty()) throw std::domain_error("rate shock: empty table");
    const auto idx = static_cast<std::size_t>(maturity_years - 1);
    return idx < table.size() ? table[idx] : table.back();
}

RateShock RateShock::default_table() {
    RateShock shock;
    shock.up = {0.70, 0.70, 0.64, 0.59, 0.55, 0.52, 0.49, 0.47, 0.44, 0.42,
                0.39, 0.37, 0.35, 0.34, 0.33, 0.31, 0.30, 0.29, 0.27, 0.26};
    shock.down = {0.75, 0.65, 0.56, 0.50, 0.46, 0.42, 0.39, 0.36, 0.33, 0.31,
                  0.30, 0.29, 0.28, 0.28, 0.27, 0.28, 0.28, 0.28, 0.29, 0.29};
    return shock;
}

RateShock RateShock::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("rate shock: cannot open " + path.string());
    std::vector<std::pair<int, std::pair<double, double>>> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        int maturity;
        double up_mult, down_mult;
        if (!(ls >> maturity)) continue;  // blank line
        if (!(ls >> up_mult >> down_mult))
            throw std::runtime_error("rate shock: malformed line " + std::to_string(line_no) +
                                     " in " + path.string());
        rows.emplace_back(maturity, std::make_pair(up_mult, down_mult));
    }
    if (rows.empty()) throw std::runtime_error("rate shock: no rows in " + path.string());
    RateShock shock;
    int expected = 1;
    for (const auto& [maturity, mults] : rows) {
        if (maturity != expected)
            throw std::runtime_error("rate shock: maturities must start at 1 and be contiguous");
        shock.up.push_back(mults.first);
        shock.down.push_back(mults.second);
        ++expected;
    }
    return shock;
}

ShiftCurve shift_from_zero_curve(int t, double factor, const MarketParams& params,
                                 std::span<const double> zero_rates, const ShiftCurve& base) {
    ShiftCurve out;
    out.annual.resize(t + zero_rates.size());
    for (int i = 0; i < t; ++i) out.annual[i] = base.value(static_cast<double>(i));
    double prev_cumulative = 0.0;
    for (std::size_t i = 1; i <= zero_rates.size(); ++i) {
        const double tau = static_cast<double>(i);
        // Cumulative shift integral needed so that P(t,t+i) = exp(-z_i i).
        const double cumulative =
            zero_rates[i - 1] * tau + vasicek_log_a(params, tau) -
            vasicek_b(params.mean_reversion, tau) * factor;
        out.annual[t + i - 1] = cumulative - prev_cumulative;
        prev_cumulative = cumulative;
    }
    out.extrapolation = out.annual.empty() ? 0.0 : out.annual.back();
    return out;
}

ShiftCurve apply_rate_shock(std::span<const double> zero_rates, const RateShock& shock,
                            ShockDirection direction, int t, double factor,
                            const MarketParams& params, const ShiftCurve& base) {
    std::vector<double> shocked(zero_rates.size());
    for (std::size_t i = 0; i < zero_rates.size(); ++i) {
        const double m = shock.at(static_cast<int>(i + 1), direction);
        shocked[i] = (direction == ShockDirection::up) ? zero_rates[i] * (1.0 + m)
                                                       : zero_rates[i] * (1.0 - std::fabs(m));
    }
    return shift_from_zero_curve(t, factor, params, shocked, base);
}

}  // namespace scrmlmc
