#pragma once

#include <array>

#include "scrmlmc/estimator.hpp"

namespace scrmlmc {

// Closed-form test problem: butterfly payoff under Black-Scholes (zero rate)
// with instantaneous multiplicative spot shocks at the risk horizon.
struct ButterflyParams {
    double s0 = 100.0;
    double sigma = 0.3;
    double strike_low = 50.0;    // K1
    double strike_high = 150.0;  // K2
    double maturity = 2.0;       // T (years)
    double horizon = 1.0;        // shock date t < T
    double shock_up = 0.2;
    double shock_down = -0.2;

    void validate() const;
};

// Zero-rate Black-Scholes call; tau = 0 returns the payoff.
double call_bs(double tau, double spot, double strike, double sigma);

double butterfly_payoff(double spot, const ButterflyParams& params);

// Call(K1) + Call(K2) - 2 Call((K1+K2)/2).
double butterfly_price(double tau, double spot, const ButterflyParams& params);

// Conditional means (E[Y^1|X=x], E[Y^2|X=x], 0) at horizon spot x.
std::array<double, 3> butterfly_conditional_means(double x, const ButterflyParams& params);

// max of the conditional means and zero (the quantity inside the outer mean).
double butterfly_conditional_max(double x, const ButterflyParams& params);

// Wires the problem as a NestedProblem with P=3, unit weight, exact sampling.
NestedProblem toy_problem(const ButterflyParams& params);

// I by adaptive quadrature over the lognormal horizon distribution.
double reference_value(const ButterflyParams& params, double abs_tol);

}  // namespace scrmlmc
