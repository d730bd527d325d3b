#include "scrmlmc/butterfly.hpp"

#include <cmath>
#include <stdexcept>

#include "scrmlmc/numerics.hpp"

namespace scrmlmc {

void ButterflyParams::validate() const {
    if (!(s0 > 0.0) || !(sigma > 0.0)) throw ConfigError("butterfly: s0 and sigma must be > 0");
    if (!(strike_low > 0.0) || !(strike_low < strike_high))
        throw ConfigError("butterfly: need 0 < K1 < K2");
    if (!(horizon > 0.0) || !(horizon < maturity))
        throw ConfigError("butterfly: need 0 < t < T");
}

double call_bs(double tau, double spot, double strike, double sigma) {
    if (tau < 0.0 || !(spot > 0.0) || !(strike > 0.0) || !(sigma > 0.0))
        throw std::domain_error("call_bs: invalid arguments");
    if (tau == 0.0) return std::max(spot - strike, 0.0);
    const double vol = sigma * std::sqrt(tau);
    const double d1 = std::log(spot / strike) / vol + 0.5 * vol;
    return spot * norm_cdf(d1) - strike * norm_cdf(d1 - vol);
}

double butterfly_payoff(double spot, const ButterflyParams& params) {
    const auto pos = [](double v) { return v > 0.0 ? v : 0.0; };
    const double mid = 0.5 * (params.strike_low + params.strike_high);
    return pos(spot - params.strike_low) + pos(spot - params.strike_high) -
           2.0 * pos(spot - mid);
}

double butterfly_price(double tau, double spot, const ButterflyParams& params) {
    const double mid = 0.5 * (params.strike_low + params.strike_high);
    return call_bs(tau, spot, params.strike_low, params.sigma) +
           call_bs(tau, spot, params.strike_high, params.sigma) -
           2.0 * call_bs(tau, spot, mid, params.sigma);
}

std::array<double, 3> butterfly_conditional_means(double x, const ButterflyParams& params) {
    const double tau = params.maturity - params.horizon;
    const double base = butterfly_price(tau, x, params);
    return {base - butterfly_price(tau, (1.0 + params.shock_up) * x, params),
            base - butterfly_price(tau, (1.0 + params.shock_down) * x, params), 0.0};
}

double butterfly_conditional_max(double x, const ButterflyParams& params) {
    const auto m = butterfly_conditional_means(x, params);
    return std::max(std::max(m[0], m[1]), 0.0);
}

NestedProblem toy_problem(const ButterflyParams& params) {
    params.validate();
    NestedProblem problem;
    problem.components = 3;
    problem.inner_cost_hint = 1.0;
    const double t = params.horizon;
    const double tau = params.maturity - params.horizon;
    const double sig = params.sigma;
    const double s0 = params.s0;
    problem.sample_outer = [s0, sig, t](RngStream& rng) -> std::any {
        return s0 * std::exp(sig * std::sqrt(t) * rng.normal() - 0.5 * sig * sig * t);
    };
    problem.sample_inner = [params, sig, tau](const std::any& outer, RngStream& rng,
                                              std::span<double> out) {
        const double x = std::any_cast<double>(outer);
        const double terminal =
            x * std::exp(sig * std::sqrt(tau) * rng.normal() - 0.5 * sig * sig * tau);
        const double base = butterfly_payoff(terminal, params);
        out[0] = base - butterfly_payoff((1.0 + params.shock_up) * terminal, params);
        out[1] = base - butterfly_payoff((1.0 + params.shock_down) * terminal, params);
        out[2] = 0.0;
    };
    problem.weight = [](const std::any&) { return 1.0; };
    return problem;
}

double reference_value(const ButterflyParams& params, double abs_tol) {
    params.validate();
    const double t = params.horizon;
    const double sig = params.sigma;
    const auto integrand = [&](double g) {
        const double x = params.s0 * std::exp(sig * std::sqrt(t) * g - 0.5 * sig * sig * t);
        return butterfly_conditional_max(x, params) * norm_pdf(g);
    };
    // Truncation at +-8 standard deviations loses < 1e-14 of the mass.
    return integrate_adaptive(integrand, -8.0, 8.0, abs_tol);
}

}  // namespace scrmlmc
