#include <doctest.h>

#include <cmath>
#include <vector>

#include "lobsim/rng.hpp"

using lobsim::Rng;

TEST_SUITE_BEGIN("rng");

TEST_CASE("streams are deterministic and seed-sensitive") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next_u64();
        all_equal = all_equal && x == b.next_u64();
        any_diff = any_diff || x != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
    CHECK(Rng::derive_seed(1, 1) != Rng::derive_seed(1, 2));
    CHECK(Rng::derive_seed(1, 1) == Rng::derive_seed(1, 1));
}

TEST_CASE("uniform stays in range with the right mean") {
    Rng rng(7);
    double acc = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        acc += u;
    }
    CHECK(acc / 200000.0 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("normal moments") {
    Rng rng(11);
    const int n = 1000000;
    double s1 = 0.0, s2 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        s1 += z;
        s2 += z * z;
        s4 += z * z * z * z;
    }
    CHECK(s1 / n == doctest::Approx(0.0).epsilon(1.0).scale(0.005));
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.03));
}

TEST_CASE("gamma mean and variance track the shape") {
    Rng rng(13);
    for (double shape : {0.35, 0.655, 1.0, 2.7}) {
        const int n = 400000;
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = rng.gamma(shape);
            s1 += g;
            s2 += g * g;
        }
        const double mean = s1 / n;
        const double var = s2 / n - mean * mean;
        CHECK(mean == doctest::Approx(shape).epsilon(0.02));
        CHECK(var == doctest::Approx(shape).epsilon(0.05));
    }
}

TEST_CASE("student_t is symmetric and median-centered") {
    Rng rng(17);
    const int n = 1000000;
    int pos = 0;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rng.student_t(1.31);
        if (xs[i] > 0.0) ++pos;
    }
    // P(x > 0) -> 0.5 +- 0.002 (3 binomial sigma at 1e6 is ~0.0015)
    CHECK(std::fabs(static_cast<double>(pos) / n - 0.5) < 0.002);
}

TEST_SUITE_END();
