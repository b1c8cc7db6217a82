#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "truncext/quadrature.hpp"

using namespace truncext;

TEST_CASE("polynomials are integrated to high accuracy") {
    const double cube = adaptive_simpson([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(cube == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const double quartic =
        adaptive_simpson([](double x) { return x * x * x * x; }, -1.0, 2.0);
    CHECK(quartic == doctest::Approx(33.0 / 5.0).epsilon(1e-10));
}

TEST_CASE("sine over a half period") {
    const double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                      std::acos(-1.0));
    CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("integrable endpoint behavior after substitution") {
    // int_0^1 2v * (1/v) dv = 2, a disguised 1/sqrt singularity.
    const double v = adaptive_simpson([](double x) { return 2.0; }, 0.0, 1.0);
    CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("non-integrable singularity exhausts the refinement depth") {
    CHECK_THROWS_AS(adaptive_simpson([](double x) { return 1.0 / x; }, 0.0, 1.0,
                                     1e-10, 30),
                    std::runtime_error);
}

TEST_CASE("orientation and degenerate interval") {
    CHECK(adaptive_simpson([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
    const double fwd = adaptive_simpson([](double x) { return x; }, 0.0, 3.0);
    CHECK(fwd == doctest::Approx(4.5).epsilon(1e-12));
}
