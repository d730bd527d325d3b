#pragma once

#include <functional>
#include <span>
#include <stdexcept>

namespace scrmlmc {

// Deterministic summation with a fixed pairwise reduction tree, so the result
// does not depend on how the inputs were produced (thread count, chunking).
double pairwise_sum(std::span<const double> values);

struct MeanVariance {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance (0 when n < 2)
};

MeanVariance mean_and_variance(std::span<const double> values);

// Ordinary least-squares slope of y against x.
double ols_slope(std::span<const double> x, std::span<const double> y);

double norm_cdf(double x);
double norm_pdf(double x);

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Legendre quadrature on [a,b]: panels are bisected until the
// 7- and 15-point estimates agree within the panel's share of the tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth = 48);

}  // namespace scrmlmc
