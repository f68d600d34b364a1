#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "reorg/stats.hpp"

using namespace reorg;

TEST_CASE("regularized incomplete beta against reference values") {
    // references computed with an independent implementation
    CHECK(reg_inc_beta(0.5, 5.0, 0.2) == doctest::Approx(0.855072394596).epsilon(1e-9));
    CHECK(reg_inc_beta(2.0, 3.0, 0.5) == doctest::Approx(0.6875).epsilon(1e-10));
    CHECK(reg_inc_beta(18.0, 5.0, 0.75) == doctest::Approx(0.323485640076).epsilon(1e-9));
    CHECK(reg_inc_beta(1000.5, 13.5, 0.99) == doctest::Approx(0.820703559393).epsilon(1e-8));
    CHECK(reg_inc_beta(7.0, 994.0, 0.0081) == doctest::Approx(0.699703340631).epsilon(1e-9));
    CHECK(reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
}

TEST_CASE("beta quantile inverts the cdf") {
    for (double p : {1e-6, 0.005, 0.3, 0.5, 0.9, 0.995}) {
        const double x = beta_quantile(p, 813.0, 9188.0);
        CHECK(reg_inc_beta(813.0, 9188.0, x) == doctest::Approx(p).epsilon(1e-7));
    }
}

TEST_CASE("clopper-pearson 99% interval") {
    // zero successes: upper bound has the closed form 1 - (delta/2)^(1/N)
    const Interval z = clopper_pearson(0, 10);
    CHECK(z.low == 0.0);
    CHECK(z.high == doctest::Approx(1.0 - std::pow(0.005, 0.1)).epsilon(1e-8));

    const Interval full = clopper_pearson(10, 10);
    CHECK(full.high == 1.0);
    CHECK(full.low == doctest::Approx(std::pow(0.005, 0.1)).epsilon(1e-8));

    const Interval iv = clopper_pearson(812, 10000);
    CHECK(iv.low == doctest::Approx(0.07431522248).epsilon(1e-7));
    CHECK(iv.high == doctest::Approx(0.08848700648).epsilon(1e-7));

    const Interval one = clopper_pearson(1, 1000);
    CHECK(one.low == doctest::Approx(5.012529261e-06).epsilon(1e-6));
    CHECK(one.high == doctest::Approx(0.007406286938).epsilon(1e-6));

    CHECK_THROWS_AS(clopper_pearson(2, 1), std::invalid_argument);
    CHECK_THROWS_AS(clopper_pearson(0, 0), std::invalid_argument);
}

TEST_CASE("clopper-pearson brackets the point estimate") {
    for (std::uint64_t n : {10ULL, 100ULL, 100000ULL})
        for (std::uint64_t k : {std::uint64_t{0}, std::uint64_t{1}, n / 2, n}) {
            const Interval iv = clopper_pearson(k, n);
            const double phat = static_cast<double>(k) / static_cast<double>(n);
            CHECK(iv.low <= phat);
            CHECK(iv.high >= phat);
            CHECK(iv.low >= 0.0);
            CHECK(iv.high <= 1.0);
        }
}
