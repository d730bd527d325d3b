#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "scrmlmc/rng.hpp"

namespace scrmlmc {

// Deterministic shift phi(t), piecewise constant on integer-year intervals
// with a flat extrapolation value beyond the stored grid.
struct ShiftCurve {
    std::vector<double> annual;  // value on [i, i+1)
    double extrapolation = 0.0;

    double value(double t) const;
    // Integral over [from, to] for integer year bounds.
    double integral(int from, int to) const;
};

struct MarketParams {
    double s0 = 1.0;
    double sigma_s = 0.1;
    double x0 = 0.02;
    double mean_reversion = 0.2;  // k
    double theta = 0.02;
    double sigma_r = 0.01;
    double correlation = 0.0;  // gamma
    double lambda_w = 0.0;
    double lambda_z = 0.0;
    ShiftCurve shift;

    void validate() const;
};

// One-year Brownian increments and the exponentially weighted OU integral
// int_{t-1}^t e^{-k(t-u)} (gamma dW + sqrt(1-gamma^2) dZ).
struct GaussianTriple {
    double dw = 0.0;
    double dz = 0.0;
    double ou_integral = 0.0;
};

GaussianTriple gaussian_triple(RngStream& rng, double mean_reversion, double correlation);

struct MarketState {
    int year = 0;
    double stock = 0.0;
    double factor = 0.0;       // x_t
    double short_rate = 0.0;   // r_t = x_t + phi(t)
    double rn_weight = 1.0;    // L_t
    double factor_integral = 0.0;  // int_{t-1}^t x_u du
    double cum_dw = 0.0;
    double cum_dz = 0.0;
};

MarketState initial_state(const MarketParams& params, const ShiftCurve& shift);

// Exact one-year transition under the pricing measure; L is updated jointly.
MarketState step_exact(const MarketState& state, const MarketParams& params,
                       const ShiftCurve& shift, const GaussianTriple& triple);

// Discount factor increment exp(-int_{t-1}^t r_u du) for the step into `state`.
double discount_increment(const MarketState& state, const ShiftCurve& shift);

// Affine zero-coupon price P(t, t+i) given the factor value at t.
double zc_price(int t, int maturity_years, double factor, const MarketParams& params,
                const ShiftCurve& shift);

// Precomputed affine coefficients and shift integrals for repeated pricing.
class VasicekCache {
public:
    VasicekCache(const MarketParams& params, const ShiftCurve& shift, int max_year);

    double zc(int t, int maturity_years, double factor) const;
    int max_year() const { return static_cast<int>(shift_prefix_.size()) - 1; }

private:
    std::vector<double> affine_a_;
    std::vector<double> affine_b_;
    std::vector<double> shift_prefix_;  // integral of phi over [0, i]
};

// zc[i-1] = P(t, t+i), i = 1..n.
double swap_rate(std::span<const double> zc, int n);
double bond_value(std::span<const double> zc, int n, double coupon);
double portfolio_value(std::span<const double> zc, std::span<const double> coupons);

// Continuously compounded zero rates z_i = -ln P(t,t+i)/i for i = 1..n.
std::vector<double> zero_curve(int t, double factor, const MarketParams& params,
                               const ShiftCurve& shift, int max_maturity);

enum class ShockDirection { up, down };

// Per-maturity relative multipliers; flat extrapolation beyond the table.
struct RateShock {
    std::vector<double> up;
    std::vector<double> down;

    double at(int maturity_years, ShockDirection direction) const;
    static RateShock default_table();
    static RateShock from_file(const std::filesystem::path& path);
};

// Calibrates the shift on [t, t+curve size) so the model reproduces the given
// zero curve at (t, factor); values before t are copied from `base`.
ShiftCurve shift_from_zero_curve(int t, double factor, const MarketParams& params,
                                 std::span<const double> zero_rates, const ShiftCurve& base);

ShiftCurve apply_rate_shock(std::span<const double> zero_rates, const RateShock& shock,
                            ShockDirection direction, int t, double factor,
                            const MarketParams& params, const ShiftCurve& base);

}  // namespace scrmlmc
