#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "smean/phantom.hpp"
#include "smean/rng.hpp"

using namespace smean;

namespace {

/// Brute-force oracle for the n=2 mean of a radial bump: composite Simpson
/// with ~1e6 points of (1/pi) int_0^pi profile(sqrt(rho^2 + r^2 - 2 rho r cos t)) dt.
/// Independent of the Gauss-Gegenbauer path under test.
double mean_2d_oracle(double rho, double r, double radius, int panels = 500000) {
    const double h = std::numbers::pi / (2.0 * panels);
    const auto f = [&](double t) {
        const double d2 = rho * rho + r * r - 2.0 * rho * r * std::cos(t);
        return bump_profile(std::sqrt(std::max(0.0, d2)), radius);
    };
    double acc = f(0.0) + f(std::numbers::pi);
    for (int i = 1; i < 2 * panels; ++i) acc += (i % 2 == 1 ? 4.0 : 2.0) * f(i * h);
    return acc * h / 3.0 / std::numbers::pi;
}

}  // namespace

TEST_SUITE("phantom") {

TEST_CASE("profile values") {
    CHECK(bump_profile(0.0, 0.25) == doctest::Approx(0.36787944117144233).epsilon(1e-14));
    CHECK(bump_profile(0.125, 0.25) == doctest::Approx(0.26359713811572677).epsilon(1e-14));
    CHECK(bump_profile(0.25, 0.25) == 0.0);
    CHECK(bump_profile(0.4, 0.25) == 0.0);
}

TEST_CASE("evaluation sums bumps") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.2, -0.1}, 0.25, 1.0},
                              RadialBump{{-0.3, 0.1}, 0.2, -0.5}});
    const std::vector<double> at_first{0.2, -0.1};
    CHECK(phantom.eval(at_first) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    const std::vector<double> far{0.7, 0.0};
    CHECK(phantom.eval(far) == 0.0);
}

TEST_CASE("support margin is enforced") {
    const Ellipsoid e(2, {1.0, 0.7});
    CHECK_THROWS_WITH_AS(Phantom(e, {RadialBump{{0.9, 0.0}, 0.2, 1.0}}),
                         doctest::Contains("support-margin"), std::invalid_argument);
    CHECK_THROWS_AS(Phantom(e, {}), std::invalid_argument);
    CHECK_THROWS_AS(Phantom(e, {RadialBump{{0.0, 0.0}, -0.1, 1.0}}), std::invalid_argument);
}

TEST_CASE("mean at the bump center is the profile") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.2, -0.1}, 0.25, 2.0}});
    const std::vector<double> center{0.2, -0.1};
    for (double r : {0.05, 0.1, 0.2})
        CHECK(phantom.analytic_mean(center, r) ==
              doctest::Approx(2.0 * bump_profile(r, 0.25)).epsilon(1e-14));
}

TEST_CASE("mean vanishes when the sphere misses the support") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.2, -0.1}, 0.25, 1.0}});
    const std::vector<double> z{-0.4, 0.2};
    const double rho = std::hypot(z[0] - 0.2, z[1] + 0.1);
    CHECK(phantom.analytic_mean(z, rho + 0.26) == 0.0);
    CHECK(phantom.analytic_mean(z, rho - 0.26) == 0.0);
}

TEST_CASE("mean against the brute-force oracle") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.0, 0.0}, 0.25, 1.0}});
    const std::vector<double> z{0.3, 0.0};  // rho = 0.3
    const double got = phantom.analytic_mean(z, 0.4);
    // frozen from the oracle (also reproduced below at runtime)
    CHECK(got == doctest::Approx(0.037154297082558702).epsilon(1e-10));
    CHECK(got == doctest::Approx(mean_2d_oracle(0.3, 0.4, 0.25)).epsilon(1e-10));
}

TEST_CASE("means are bounded by the maximum of f") {
    const Ellipsoid e(3, {1.0, 0.8, 0.6});
    const Phantom phantom(e, {RadialBump{{0.1, 0.0, -0.1}, 0.3, 1.5}});
    Rng rng(7);
    const double fmax = 1.5 * std::exp(-1.0);
    for (int t = 0; t < 200; ++t) {
        const std::vector<double> z{rng.uniform(-1.0, 1.0), rng.uniform(-0.8, 0.8),
                                    rng.uniform(-0.6, 0.6)};
        const double r = rng.uniform(0.01, 2.0);
        CHECK(std::abs(phantom.analytic_mean(z, r)) <= fmax * (1.0 + 1e-12));
    }
}

TEST_CASE("means converge to the point value as r -> 0") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.2, -0.1}, 0.25, 1.0}});
    const std::vector<double> inside{0.25, -0.05}, outside{-0.5, 0.2};
    CHECK(phantom.analytic_mean(inside, 1e-5) ==
          doctest::Approx(phantom.eval(inside)).epsilon(1e-8));
    CHECK(phantom.analytic_mean(outside, 1e-5) == 0.0);
}

}  // TEST_SUITE
