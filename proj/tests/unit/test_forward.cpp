#include <doctest.h>

#include <cmath>
#include <vector>

#include "smean/forward.hpp"
#include "smean/rng.hpp"

using namespace smean;

TEST_SUITE("forward") {

TEST_CASE("radial grid covers the diameter with a staggered margin") {
    const Ellipsoid e(2, {1.0, 0.7});
    const RadialGrid grid = RadialGrid::cover(e, 512);
    CHECK(grid.staggered);
    CHECK(grid.r(0) == doctest::Approx(0.5 * grid.dr));
    CHECK(grid.r_back() == doctest::Approx(2.0 + 2.0 * grid.dr));
    CHECK(grid.r_back() >= e.diameter());
    CHECK(grid.edge(0) == 0.0);
    CHECK(grid.edge(5) == doctest::Approx(5.0 * grid.dr));
    CHECK_THROWS_AS(RadialGrid::cover(e, 4), std::invalid_argument);
}

TEST_CASE("zero amplitude gives all-zero data") {
    const Ellipsoid e(2, {1.0, 0.7});
    const Phantom phantom(e, {RadialBump{{0.2, -0.1}, 0.25, 0.0}});
    const SphereQuadrature dirs = build_sphere_quadrature(2, 16);
    const RadialGrid radii = RadialGrid::cover(e, 64);
    const MeanData data = forward_transform(phantom, e, dirs, radii);
    for (double v : data.values) CHECK(v == 0.0);
}

TEST_CASE("linearity in the phantom") {
    const Ellipsoid e(2, {1.0, 0.7});
    const RadialBump b1{{0.2, -0.1}, 0.25, 1.0};
    const RadialBump b2{{-0.25, 0.15}, 0.2, -0.7};
    const SphereQuadrature dirs = build_sphere_quadrature(2, 12);
    const RadialGrid radii = RadialGrid::cover(e, 64);
    const MeanData sum = forward_transform(Phantom(e, {b1, b2}), e, dirs, radii);
    const MeanData first = forward_transform(Phantom(e, {b1}), e, dirs, radii);
    const MeanData second = forward_transform(Phantom(e, {b2}), e, dirs, radii);
    for (std::size_t i = 0; i < sum.values.size(); ++i)
        CHECK(sum.values[i] ==
              doctest::Approx(first.values[i] + second.values[i]).epsilon(1e-12));
}

TEST_CASE("support bounds produce exact zeros") {
    const Ellipsoid e(2, {1.0, 0.7});
    const RadialBump bump{{0.2, -0.1}, 0.25, 1.0};
    const Phantom phantom(e, {bump});
    const SphereQuadrature dirs = build_sphere_quadrature(2, 16);
    const RadialGrid radii = RadialGrid::cover(e, 128);
    const MeanData data = forward_transform(phantom, e, dirs, radii);
    std::vector<double> center(2);
    for (std::size_t j = 0; j < dirs.size(); ++j) {
        e.boundary_point(dirs.node(j), center);
        const double dist = std::hypot(center[0] - 0.2, center[1] + 0.1);
        for (int k = 0; k < radii.count; ++k) {
            const double r = radii.r(k);
            if (r > dist + bump.radius || r < dist - bump.radius)
                CHECK(data.at(j, k) == 0.0);
            if (r > e.diameter()) CHECK(data.at(j, k) == 0.0);
        }
    }
}

TEST_CASE("generic sphere-quadrature path agrees with the analytic means") {
    for (int n : {2, 3}) {
        const Ellipsoid e(n, n == 2 ? std::vector<double>{1.0, 0.7}
                                    : std::vector<double>{1.0, 0.8, 0.6});
        std::vector<double> c(n, 0.1);
        c[0] = 0.2;
        const Phantom phantom(e, {RadialBump{c, 0.3, 1.0}});
        const SphereQuadrature dirs = build_sphere_quadrature(n, n == 2 ? 16 : 8);
        const RadialGrid radii = RadialGrid::cover(e, 48);
        const MeanData oracle = forward_transform(phantom, e, dirs, radii,
                                                  ForwardPath::Analytic);
        const MeanData generic = forward_transform(phantom, e, dirs, radii,
                                                   ForwardPath::Generic);
        double gmax = 0.0;
        for (double v : oracle.values) gmax = std::max(gmax, std::abs(v));
        int audited = 0;
        for (std::size_t i = 0; i < oracle.values.size(); ++i) {
            if (std::abs(oracle.values[i]) < 1e-3 * gmax) continue;
            CHECK(generic.values[i] ==
                  doctest::Approx(oracle.values[i]).epsilon(1e-6));
            ++audited;
        }
        CHECK(audited > 50);
    }
}

TEST_CASE("darboux residual is second order and small") {
    const Ellipsoid e(3, {1.0, 0.8, 0.6});
    const Phantom phantom(e, {RadialBump{{0.0, 0.0, 0.0}, 0.5, 1.0}});
    const std::vector<double> center{0.0, 0.0, 0.0};
    const double res_h = darboux_residual(phantom, center, 0.3, 1e-2);
    const double res_half = darboux_residual(phantom, center, 0.3, 5e-3);
    const double ratio = res_h / res_half;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
    CHECK(darboux_residual(phantom, center, 0.3, 1e-3) < 1e-4);
    CHECK_THROWS_AS(darboux_residual(phantom, center, 0.01, 1e-2), std::invalid_argument);
}

TEST_CASE("darboux residual vanishes without a phantom") {
    const Ellipsoid e(3, {1.0, 0.8, 0.6});
    const Phantom phantom(e, {RadialBump{{0.0, 0.0, 0.0}, 0.5, 0.0}});
    const std::vector<double> z{0.2, 0.1, 0.0};
    CHECK(darboux_residual(phantom, z, 0.4, 1e-2) == 0.0);
}

}  // TEST_SUITE
