#include <doctest.h>

#include <cmath>

#include "scrmlmc/butterfly.hpp"
#include "scrmlmc/lsmc.hpp"
#include "scrmlmc/numerics.hpp"

using namespace scrmlmc;

namespace {

const ButterflyParams kDefaults{};

// Test-side quadrature oracle, independent of the library integrator:
// composite Simpson on the standard-normal axis.
double simpson_lognormal(const std::function<double(double)>& payoff, double spot, double sigma,
                         double tau) {
    const int n = 20000;
    const double lo = -10.0, hi = 10.0;
    const double h = (hi - lo) / n;
    auto f = [&](double g) {
        const double terminal = spot * std::exp(sigma * std::sqrt(tau) * g - 0.5 * sigma * sigma * tau);
        return payoff(terminal) * norm_pdf(g);
    };
    double sum = f(lo) + f(hi);
    for (int i = 1; i < n; ++i) sum += f(lo + i * h) * ((i % 2) ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("Black-Scholes call edge cases and quadrature check") {
    CHECK(call_bs(0.0, 120.0, 100.0, 0.3) == 20.0);
    CHECK(call_bs(0.0, 80.0, 100.0, 0.3) == 0.0);
    CHECK(call_bs(1.0, 100.0, 1e-12, 0.3) == doctest::Approx(100.0).epsilon(1e-9));
    const double quad = simpson_lognormal(
        [](double s) { return std::max(s - 100.0, 0.0); }, 100.0, 0.3, 1.0);
    CHECK(call_bs(1.0, 100.0, 100.0, 0.3) == doctest::Approx(quad).epsilon(1e-8));
    CHECK(call_bs(1.0, 100.0, 100.0, 0.3) ==
          doctest::Approx(11.923538474048504).epsilon(1e-13));
    CHECK_THROWS_AS(call_bs(-1.0, 100.0, 100.0, 0.3), std::domain_error);
    CHECK_THROWS_AS(call_bs(1.0, -5.0, 100.0, 0.3), std::domain_error);
}

TEST_CASE("butterfly payoff and price") {
    CHECK(butterfly_payoff(100.0, kDefaults) == 50.0);
    CHECK(butterfly_payoff(50.0, kDefaults) == 0.0);
    CHECK(butterfly_payoff(150.0, kDefaults) == 0.0);
    CHECK(butterfly_payoff(170.0, kDefaults) == 0.0);
    CHECK(butterfly_price(0.0, 100.0, kDefaults) == 50.0);

    for (int i = 0; i <= 400; ++i) {
        const double s = 1.0 + i;
        const double payoff = butterfly_payoff(s, kDefaults);
        CHECK(payoff >= 0.0);
        CHECK(payoff <= 50.0);
    }

    const double quad = simpson_lognormal(
        [](double s) { return butterfly_payoff(s, kDefaults); }, 100.0, 0.3, 1.0);
    CHECK(butterfly_price(1.0, 100.0, kDefaults) == doctest::Approx(quad).epsilon(1e-8));
    CHECK(butterfly_price(1.0, 100.0, kDefaults) ==
          doctest::Approx(27.713448611908580).epsilon(1e-13));
}

TEST_CASE("conditional means match the closed form") {
    const auto at100 = butterfly_conditional_means(100.0, kDefaults);
    CHECK(at100[0] == doctest::Approx(3.2812847210100508).epsilon(1e-12));
    CHECK(at100[1] == doctest::Approx(4.0959331130472894).epsilon(1e-12));
    CHECK(at100[2] == 0.0);
    CHECK(butterfly_conditional_max(100.0, kDefaults) == doctest::Approx(4.0959331130472894).epsilon(1e-12));
    CHECK(butterfly_conditional_max(80.0, kDefaults) == doctest::Approx(9.0873284244420610).epsilon(1e-12));
    CHECK(butterfly_conditional_max(120.0, kDefaults) == doctest::Approx(7.6256081386906140).epsilon(1e-12));
}

TEST_CASE("inner sampler is conditionally unbiased for the closed form") {
    const NestedProblem problem = toy_problem(kDefaults);
    int idx = 0;
    for (double x : {60.0, 75.0, 80.0, 90.0, 95.0, 100.0, 105.0, 110.0, 115.0, 120.0,
                     125.0, 130.0, 140.0, 150.0, 160.0, 175.0, 190.0, 210.0, 240.0, 280.0}) {
        const long draws = 1000000;
        const std::any outer = x;
        std::vector<double> y1(draws);
        double out[3];
        for (long k = 0; k < draws; ++k) {
            RngStream rng(777, 50, static_cast<std::uint32_t>(idx), static_cast<std::uint32_t>(k));
            problem.sample_inner(outer, rng, out);
            y1[k] = out[0];
        }
        const auto mv = mean_and_variance(y1);
        const double se = std::sqrt(mv.variance / static_cast<double>(draws));
        const double closed = butterfly_conditional_means(x, kDefaults)[0];
        CHECK(std::fabs(mv.mean - closed) <= 3.0 * se + 1e-12);
        ++idx;
    }
}

TEST_CASE("quadrature reference value") {
    CHECK(reference_value(kDefaults, 1e-8) == doctest::Approx(7.08059792333441).epsilon(2e-8));

    ButterflyParams no_shock = kDefaults;
    no_shock.shock_up = 0.0;
    no_shock.shock_down = 0.0;
    CHECK(reference_value(no_shock, 1e-10) == 0.0);

    ButterflyParams tiny_vol = kDefaults;
    tiny_vol.sigma = 1e-5;
    const auto means = butterfly_conditional_means(kDefaults.s0, tiny_vol);
    const double point_mass = std::max({means[0], means[1], 0.0});
    CHECK(reference_value(tiny_vol, 1e-10) == doctest::Approx(point_mass).epsilon(1e-4));
}

TEST_CASE("zero shocks give identically zero inner draws") {
    ButterflyParams p = kDefaults;
    p.shock_up = 0.0;
    p.shock_down = 0.0;
    const NestedProblem problem = toy_problem(p);
    RngStream rng(1, 0, 0, 1);
    double out[3];
    problem.sample_inner(std::any(100.0), rng, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == 0.0);
}

TEST_CASE("all four estimators agree with the quadrature reference") {
    const double reference = reference_value(kDefaults, 1e-8);
    const NestedProblem problem = toy_problem(kDefaults);
    const Aggregator agg = max_aggregator();

    const EstimatorReport nested = nested_estimate(problem, agg, 20000, 256, 31);
    CHECK(std::fabs(nested.value - reference) <= 3.0 * nested.std_error);

    const EstimatorConfig config{0.0625, 1.0, 2};
    const EstimatorReport plain = mlmc_estimate(problem, agg, schedule_plain(config), 32);
    CHECK(std::fabs(plain.value - reference) <= 3.0 * plain.std_error);

    const Aggregator aggs[] = {agg};
    const auto anti =
        antithetic_mlmc_estimate(problem, aggs, schedule_antithetic(config), 33);
    CHECK(std::fabs(anti[0].value - reference) <= 3.0 * anti[0].std_error);

    const double s0 = kDefaults.s0, sig = kDefaults.sigma, t = kDefaults.horizon;
    const FeatureMap feature = [s0, sig, t](const std::any& outer, std::span<double> f) {
        f[0] = (std::log(std::any_cast<double>(outer) / s0) + 0.5 * sig * sig * t) /
               (sig * std::sqrt(t));
    };
    const auto partition = HypercubePartition::with_bounds(24, {{-3.0, 3.0}});
    const EstimatorReport lsmc = lsmc_estimate(problem, feature, 1, 40000, partition, 34);
    CHECK(std::fabs(lsmc.value - reference) <= 3.0 * lsmc.std_error);
}
