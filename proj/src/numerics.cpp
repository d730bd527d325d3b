#include "scrmlmc/numerics.hpp"

#include <cmath>
#include <cstddef>
#include <vector>

namespace scrmlmc {

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

// 7-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGl7X[7] = {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972,
                             0.0,                 0.4058451513773972,  0.7415311855993945,
                             0.9491079123427585};
constexpr double kGl7W[7] = {0.1294849661688697, 0.2797053914892766, 0.3818300505051189,
                             0.4179591836734694, 0.3818300505051189, 0.2797053914892766,
                             0.1294849661688697};

// 15-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGl15X[15] = {-0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
                               -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
                               -0.2011940939974345, 0.0,                 0.2011940939974345,
                               0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
                               0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGl15W[15] = {0.03075324199611727, 0.07036604748810812, 0.1071592204671719,
                               0.1395706779261543,  0.1662692058169939,  0.1861610000155622,
                               0.1984314853271116,  0.2025782419255613,  0.1984314853271116,
                               0.1861610000155622,  0.1662692058169939,  0.1395706779261543,
                               0.1071592204671719,  0.07036604748810812, 0.03075324199611727};

double gl_panel(const std::function<double(double)>& f, double a, double b, const double* x,
                const double* w, int n) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * f(mid + half * x[i]);
    return s * half;
}

double integrate_panel(const std::function<double(double)>& f, double a, double b,
                       double abs_tol, int depth) {
    const double coarse = gl_panel(f, a, b, kGl7X, kGl7W, 7);
    const double fine = gl_panel(f, a, b, kGl15X, kGl15W, 15);
    if (std::fabs(fine - coarse) <= abs_tol) return fine;
    if (depth <= 0) throw QuadratureError("adaptive quadrature did not converge");
    const double mid = 0.5 * (a + b);
    return integrate_panel(f, a, mid, 0.5 * abs_tol, depth - 1) +
           integrate_panel(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
    return pairwise_sum_impl(values.data(), values.size());
}

MeanVariance mean_and_variance(std::span<const double> values) {
    MeanVariance out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    out.mean = pairwise_sum(values) / static_cast<double>(n);
    if (n < 2) return out;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = values[i] - out.mean;
        sq[i] = d * d;
    }
    out.variance = pairwise_sum(sq) / static_cast<double>(n - 1);
    return out;
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope: need two equally sized samples");
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double norm_pdf(double x) {
    static const double kInvSqrt2Pi = 0.3989422804014326779399461;
    return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, int max_depth) {
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate_adaptive: tolerance must be > 0");
    return integrate_panel(f, a, b, abs_tol, max_depth);
}

}  // namespace scrmlmc
