#include <doctest.h>

#include <stdexcept>

#include "truncext/stats.hpp"

using namespace truncext;

TEST_CASE("standard normal quantiles match reference values") {
    CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(normal_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-9));
    CHECK(normal_quantile(0.95) == doctest::Approx(1.644853626951473).epsilon(1e-9));
    CHECK(normal_quantile(0.99) == doctest::Approx(2.326347874040841).epsilon(1e-9));
    CHECK(normal_quantile(0.999) == doctest::Approx(3.090232306167814).epsilon(1e-9));
}

TEST_CASE("quantile function is antisymmetric about one half") {
    for (double p : {0.01, 0.2, 0.35, 0.49}) {
        CHECK(normal_quantile(p) ==
              doctest::Approx(-normal_quantile(1.0 - p)).epsilon(1e-10));
    }
}

TEST_CASE("out-of-domain probabilities are rejected") {
    CHECK_THROWS_AS(normal_quantile(0.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.0), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(-0.1), std::domain_error);
    CHECK_THROWS_AS(normal_quantile(1.5), std::domain_error);
}
