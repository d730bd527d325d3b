#include <doctest.h>

#include <cmath>
#include <fstream>

#include "scrmlmc/market.hpp"
#include "scrmlmc/numerics.hpp"

using namespace scrmlmc;

namespace {

MarketParams table_defaults() {
    MarketParams p;
    p.s0 = 1.0;
    p.sigma_s = 0.1;
    p.x0 = 0.02;
    p.mean_reversion = 0.2;
    p.theta = 0.02;
    p.sigma_r = 0.01;
    p.correlation = 0.0;
    return p;
}

}  // namespace

TEST_CASE("shift curve evaluation and integrals") {
    ShiftCurve shift{{0.01, 0.02, 0.03}, 0.05};
    CHECK(shift.value(0.0) == 0.01);
    CHECK(shift.value(1.9) == 0.02);
    CHECK(shift.value(7.0) == 0.05);
    CHECK(shift.integral(0, 3) == doctest::Approx(0.06).epsilon(1e-15));
    CHECK(shift.integral(2, 5) == doctest::Approx(0.03 + 0.05 + 0.05).epsilon(1e-15));
    CHECK(shift.integral(4, 4) == 0.0);
    CHECK_THROWS_AS(shift.integral(3, 1), std::domain_error);
}

TEST_CASE("gaussian triple covariance structure") {
    const double k = 0.2;
    SUBCASE("independent case has uncorrelated dW and OU integral") {
        RngStream rng(5, 0, 0, 0);
        const int n = 200000;
        double sum_wi = 0.0, sum_i2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const GaussianTriple t = gaussian_triple(rng, k, 0.0);
            sum_wi += t.dw * t.ou_integral;
            sum_i2 += t.ou_integral * t.ou_integral;
        }
        CHECK(std::fabs(sum_wi / n) < 4.0 * std::sqrt(0.83 / n));
        CHECK(sum_i2 / n == doctest::Approx(0.8241998849109017).epsilon(0.02));
    }
    SUBCASE("correlated case matches the analytic covariance matrix") {
        const double gamma = 0.5;
        RngStream rng(6, 0, 0, 0);
        const int n = 400000;
        double c12 = 0, c13 = 0, c23 = 0, v1 = 0, v2 = 0, v3 = 0;
        for (int i = 0; i < n; ++i) {
            const GaussianTriple t = gaussian_triple(rng, k, gamma);
            c12 += t.dw * t.dz;
            c13 += t.dw * t.ou_integral;
            c23 += t.dz * t.ou_integral;
            v1 += t.dw * t.dw;
            v2 += t.dz * t.dz;
            v3 += t.ou_integral * t.ou_integral;
        }
        const double slope = (1.0 - std::exp(-k)) / k;
        CHECK(v1 / n == doctest::Approx(1.0).epsilon(0.02));
        CHECK(v2 / n == doctest::Approx(1.0).epsilon(0.02));
        CHECK(v3 / n == doctest::Approx(0.8241998849109017).epsilon(0.02));
        CHECK(std::fabs(c12 / n) < 0.01);
        CHECK(c13 / n == doctest::Approx(gamma * slope).epsilon(0.03));
        CHECK(c23 / n == doctest::Approx(std::sqrt(0.75) * slope).epsilon(0.03));
    }
}

TEST_CASE("deterministic limit of the exact step") {
    MarketParams p = table_defaults();
    p.sigma_s = 0.0;
    p.sigma_r = 0.0;
    MarketState state = initial_state(p, p.shift);
    RngStream rng(9, 0, 0, 0);
    for (int t = 1; t <= 10; ++t) {
        state = step_exact(state, p, p.shift, gaussian_triple(rng, p.mean_reversion, 0.0));
        CHECK(state.factor == doctest::Approx(0.02).epsilon(1e-14));
        CHECK(state.stock == doctest::Approx(std::exp(0.02 * t)).epsilon(1e-13));
        CHECK(state.rn_weight == 1.0);
        CHECK(state.factor_integral == doctest::Approx(0.02).epsilon(1e-14));
    }
}

TEST_CASE("one-year transition moments match the OU law") {
    MarketParams p = table_defaults();
    p.x0 = 0.05;  // away from theta so the mean reversion is visible
    const int n = 200000;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(123, 0, static_cast<std::uint32_t>(i), 0);
        const MarketState next =
            step_exact(initial_state(p, p.shift), p, p.shift, gaussian_triple(rng, 0.2, 0.0));
        xs[i] = next.factor;
    }
    const auto mv = mean_and_variance(xs);
    const double mean_exact = 0.05 * std::exp(-0.2) + 0.02 * (1.0 - std::exp(-0.2));
    const double var_exact = 1e-4 * (1.0 - std::exp(-0.4)) / 0.4;
    CHECK(std::fabs(mv.mean - mean_exact) <= 4.0 * std::sqrt(var_exact / n));
    CHECK(mv.variance == doctest::Approx(var_exact).epsilon(0.02));
}

TEST_CASE("zero-coupon pricing") {
    MarketParams p = table_defaults();
    CHECK(zc_price(0, 0, 0.02, p, p.shift) == 1.0);

    MarketParams flat = p;
    flat.sigma_r = 0.0;
    CHECK(zc_price(0, 7, flat.theta, flat, flat.shift) ==
          doctest::Approx(std::exp(-0.02 * 7)).epsilon(1e-14));

    // Monte-Carlo oracle for the affine formula.
    const int n = 200000;
    const int maturity = 3;
    std::vector<double> discounts(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(321, 0, static_cast<std::uint32_t>(i), 0);
        MarketState state = initial_state(p, p.shift);
        double integral = 0.0;
        for (int t = 0; t < maturity; ++t) {
            state = step_exact(state, p, p.shift, gaussian_triple(rng, p.mean_reversion, 0.0));
            integral += state.factor_integral;
        }
        discounts[i] = std::exp(-integral);
    }
    const auto mv = mean_and_variance(discounts);
    const double se = std::sqrt(mv.variance / n);
    CHECK(std::fabs(mv.mean - zc_price(0, maturity, p.x0, p, p.shift)) <= 3.0 * se);

    // Shift contributes exp(-integral of phi).
    ShiftCurve shifted{{0.01, 0.01, 0.005}, 0.005};
    CHECK(zc_price(0, 2, p.x0, p, shifted) ==
          doctest::Approx(zc_price(0, 2, p.x0, p, p.shift) * std::exp(-0.02)).epsilon(1e-13));
}

TEST_CASE("swap rates and bond pricing") {
    std::vector<double> zc1 = {std::exp(-0.02)};
    CHECK(swap_rate(zc1, 1) == doctest::Approx(0.020201340026755776).epsilon(1e-14));

    std::vector<double> flat_one = {1.0, 1.0, 1.0};
    CHECK(swap_rate(flat_one, 3) == 0.0);

    std::vector<double> zc = {0.98, 0.955, 0.93, 0.9, 0.875};
    for (int n = 1; n <= 5; ++n) {
        const double c = swap_rate(zc, n);
        CHECK(bond_value(zc, n, c) == doctest::Approx(1.0).epsilon(1e-13));
    }
    CHECK(bond_value(zc, 3, 0.0) == 0.93);
    std::vector<double> single = {0.98};
    CHECK(bond_value(single, 1, 0.02) == doctest::Approx(1.02 * 0.98).epsilon(1e-15));

    std::vector<double> coupons(5);
    for (int i = 1; i <= 5; ++i) coupons[i - 1] = swap_rate(zc, i);
    CHECK(portfolio_value(zc, coupons) == doctest::Approx(1.0).epsilon(1e-13));

    CHECK_THROWS_AS(swap_rate(zc, 9), std::domain_error);
}

TEST_CASE("rate shocks move the zero curve multiplicatively") {
    MarketParams p = table_defaults();
    const int maturities = 12;
    const auto base_curve = zero_curve(0, p.x0, p, p.shift, maturities);

    SUBCASE("identity shock leaves the shift unchanged") {
        RateShock zero;
        zero.up.assign(maturities, 0.0);
        zero.down.assign(maturities, 0.0);
        const ShiftCurve shifted =
            apply_rate_shock(base_curve, zero, ShockDirection::up, 0, p.x0, p, p.shift);
        for (int i = 1; i <= maturities; ++i)
            CHECK(zc_price(0, i, p.x0, p, shifted) ==
                  doctest::Approx(zc_price(0, i, p.x0, p, p.shift)).epsilon(1e-13));
    }

    SUBCASE("flat curve with a uniform up multiplier") {
        // Calibrate the base shift so the zero curve is flat at 2%.
        std::vector<double> flat(maturities, 0.02);
        const ShiftCurve base = shift_from_zero_curve(0, p.x0, p, flat, p.shift);
        const auto curve = zero_curve(0, p.x0, p, base, maturities);
        for (double z : curve) CHECK(z == doctest::Approx(0.02).epsilon(1e-12));
        RateShock uniform;
        uniform.up.assign(maturities, 0.5);
        uniform.down.assign(maturities, 0.5);
        const ShiftCurve shocked =
            apply_rate_shock(curve, uniform, ShockDirection::up, 0, p.x0, p, base);
        for (int i = 1; i <= maturities; ++i)
            CHECK(zc_price(0, i, p.x0, p, shocked) ==
                  doctest::Approx(std::exp(-0.03 * i)).epsilon(1e-12));
    }

    SUBCASE("up then down composes multiplicatively") {
        const RateShock table = RateShock::default_table();
        const ShiftCurve up_shift =
            apply_rate_shock(base_curve, table, ShockDirection::up, 0, p.x0, p, p.shift);
        const auto up_curve = zero_curve(0, p.x0, p, up_shift, maturities);
        const ShiftCurve down_shift =
            apply_rate_shock(up_curve, table, ShockDirection::down, 0, p.x0, p, up_shift);
        const auto final_curve = zero_curve(0, p.x0, p, down_shift, maturities);
        for (int i = 1; i <= maturities; ++i) {
            const double up_m = table.at(i, ShockDirection::up);
            const double down_m = table.at(i, ShockDirection::down);
            CHECK(final_curve[i - 1] ==
                  doctest::Approx(base_curve[i - 1] * (1.0 + up_m) * (1.0 - down_m))
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("shock table files") {
    const auto path = std::filesystem::temp_directory_path() / "scrmlmc_shocks.txt";
    {
        std::ofstream out(path);
        out << "# maturity up down\n";
        out << "1 0.7 0.75\n2 0.7 0.65\n3 0.64 0.56\n";
    }
    const RateShock shock = RateShock::from_file(path);
    CHECK(shock.up.size() == 3);
    CHECK(shock.at(2, ShockDirection::down) == 0.65);
    CHECK(shock.at(9, ShockDirection::up) == 0.64);  // flat extrapolation

    {
        std::ofstream out(path);
        out << "1 0.7 0.75\n3 0.64 0.56\n";  // gap at maturity 2
    }
    CHECK_THROWS(RateShock::from_file(path));
    std::filesystem::remove(path);
}

TEST_CASE("risk-neutral consistency at a small sample size") {
    MarketParams p = table_defaults();
    const int n = 200000;
    const int horizon = 3;
    std::vector<double> discounted(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(55, 0, static_cast<std::uint32_t>(i), 0);
        MarketState state = initial_state(p, p.shift);
        double integral = 0.0;
        for (int t = 0; t < horizon; ++t) {
            state = step_exact(state, p, p.shift, gaussian_triple(rng, p.mean_reversion, 0.0));
            integral += state.factor_integral;
        }
        discounted[i] = std::exp(-integral) * state.stock;
    }
    const auto mv = mean_and_variance(discounted);
    CHECK(std::fabs(mv.mean - p.s0) <= 3.0 * std::sqrt(mv.variance / n));
}

TEST_CASE("change-of-measure weight is mean one") {
    MarketParams p = table_defaults();
    p.lambda_w = 0.2;
    p.lambda_z = 0.2;
    p.correlation = 0.5;
    const int n = 200000;
    const int horizon = 2;
    std::vector<double> weights(n);
    for (int i = 0; i < n; ++i) {
        RngStream rng(66, 0, static_cast<std::uint32_t>(i), 0);
        MarketState state = initial_state(p, p.shift);
        for (int t = 0; t < horizon; ++t)
            state = step_exact(state, p, p.shift,
                               gaussian_triple(rng, p.mean_reversion, p.correlation));
        weights[i] = state.rn_weight;
    }
    const auto mv = mean_and_variance(weights);
    CHECK(std::fabs(mv.mean - 1.0) <= 3.0 * std::sqrt(mv.variance / n));
}
