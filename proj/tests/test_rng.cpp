#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "scrmlmc/numerics.hpp"
#include "scrmlmc/rng.hpp"

using namespace scrmlmc;

TEST_CASE("streams are reproducible and distinct") {
    RngStream a(42, 1, 7, 3);
    RngStream b(42, 1, 7, 3);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    std::set<std::uint64_t> first_words;
    for (std::uint32_t draw = 0; draw < 50; ++draw) {
        RngStream s(42, 1, 7, draw);
        first_words.insert(s.next_u64());
    }
    CHECK(first_words.size() == 50);

    RngStream other_seed(43, 1, 7, 3);
    RngStream same_seed(42, 1, 7, 3);
    CHECK(other_seed.next_u64() != same_seed.next_u64());
}

TEST_CASE("uniforms live strictly inside (0,1)") {
    RngStream s(7, 0, 0, 0);
    double min_v = 1.0, max_v = 0.0, sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        min_v = std::min(min_v, u);
        max_v = std::max(max_v, u);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(min_v < 0.01);
    CHECK(max_v > 0.99);
}

TEST_CASE("inverse normal CDF matches the forward CDF") {
    for (double p : {1e-12, 1e-6, 0.01, 0.2, 0.5, 0.7, 0.975, 1.0 - 1e-6}) {
        const double x = inverse_normal_cdf(p);
        CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-9));
    }
    CHECK(inverse_normal_cdf(0.5) == 0.0);
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.0013498980316300945) ==
          doctest::Approx(-3.0).epsilon(1e-10));
}

TEST_CASE("normal draws have the right first two moments") {
    RngStream s(2024, 0, 0, 0);
    const int n = 200000;
    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = s.normal();
    const auto mv = mean_and_variance(values);
    CHECK(std::fabs(mv.mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(mv.variance == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("pairwise sum is order-stable and exact on integers") {
    std::vector<double> v(1000);
    for (int i = 0; i < 1000; ++i) v[i] = i + 1;
    CHECK(pairwise_sum(v) == 500500.0);
}
