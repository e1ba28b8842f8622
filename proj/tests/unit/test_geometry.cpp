#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "smean/geometry.hpp"

using namespace smean;

namespace {

constexpr double kPi = std::numbers::pi;

/// Analytic moment of the monomial sigma^alpha over S^{n-1}: zero when any
/// exponent is odd, otherwise 2 prod Gamma(b_i) / Gamma(sum b_i) with
/// b_i = (alpha_i + 1)/2.
double monomial_moment(const std::vector<int>& alpha) {
    double betas_sum = 0.0;
    double num = 2.0;
    for (int a : alpha) {
        if (a % 2 != 0) return 0.0;
        const double b = 0.5 * (a + 1);
        num *= std::tgamma(b);
        betas_sum += b;
    }
    return num / std::tgamma(betas_sum);
}

double quad_monomial(const SphereQuadrature& quad, const std::vector<int>& alpha) {
    double acc = 0.0;
    for (std::size_t j = 0; j < quad.size(); ++j) {
        double term = quad.weights[j];
        const auto node = quad.node(j);
        for (int i = 0; i < quad.n; ++i)
            for (int p = 0; p < alpha[i]; ++p) term *= node[i];
        acc += term;
    }
    return acc;
}

void sweep_monomials(const SphereQuadrature& quad, int degree, std::vector<int>& alpha,
                     int axis, int left) {
    if (axis == quad.n - 1) {
        alpha[axis] = left;
        const double exact = monomial_moment(alpha);
        const double approx = quad_monomial(quad, alpha);
        if (exact == 0.0) {
            CHECK(std::abs(approx) < 1e-10);
        } else {
            CHECK(approx == doctest::Approx(exact).epsilon(1e-10));
        }
        return;
    }
    for (int a = 0; a <= left; ++a) {
        alpha[axis] = a;
        sweep_monomials(quad, degree, alpha, axis + 1, left - a);
    }
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("surface area of the unit sphere") {
    CHECK(sphere_surface_area(1) == doctest::Approx(2.0));
    CHECK(sphere_surface_area(2) == doctest::Approx(2.0 * kPi));
    CHECK(sphere_surface_area(3) == doctest::Approx(4.0 * kPi));
    CHECK(sphere_surface_area(4) == doctest::Approx(2.0 * kPi * kPi));
    CHECK(sphere_surface_area(5) == doctest::Approx(8.0 * kPi * kPi / 3.0));
    CHECK_THROWS_AS(sphere_surface_area(0), std::invalid_argument);
}

TEST_CASE("reconstruction constants of both parities") {
    CHECK(reconstruction_constant(2) == doctest::Approx(2.0 * kPi));
    CHECK(reconstruction_constant(3) == doctest::Approx(-2.0 * kPi));
    CHECK(reconstruction_constant(4) == doctest::Approx(-2.0 * kPi * kPi));
    CHECK(reconstruction_constant(5) == doctest::Approx(3.0 * kPi * kPi));
    CHECK_THROWS_AS(reconstruction_constant(1), std::invalid_argument);
}

TEST_CASE("fundamental solution values and symmetry") {
    const std::vector<double> x2{0.3, 0.4}, y2{0.3 + 0.6, 0.4 + 0.8};  // |x-y| = 1
    CHECK(fundamental_solution(2, x2, y2) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(fundamental_solution_dist(3, 1.0) == doctest::Approx(-1.0 / (4.0 * kPi)));
    CHECK(fundamental_solution_dist(5, 2.0) == doctest::Approx(-1.0 / (64.0 * kPi * kPi)));
    CHECK(fundamental_solution(2, x2, y2) == fundamental_solution(2, y2, x2));
    CHECK_THROWS_AS(fundamental_solution(2, x2, x2), std::domain_error);
}

TEST_CASE("fundamental solution is discretely harmonic away from the pole") {
    // 5/7-point Laplacian residual is O(h^2); the Richardson ratio between
    // h = 1e-2 and 5e-3 sits near 4
    for (int n : {2, 3}) {
        std::vector<double> y(n, 0.0);
        std::vector<double> x(n, 0.0);
        x[0] = 0.6;
        if (n == 3) x[1] = 0.45;  // |x - y| = 0.75
        std::vector<double> p(n);
        const auto lap = [&](double h) {
            double acc = 0.0;
            const double center = fundamental_solution(n, x, y);
            for (int i = 0; i < n; ++i) {
                p = x;
                p[i] = x[i] + h;
                const double up = fundamental_solution(n, p, y);
                p[i] = x[i] - h;
                const double dn = fundamental_solution(n, p, y);
                acc += (up - 2.0 * center + dn) / (h * h);
            }
            return std::abs(acc);
        };
        const double res_h = lap(1e-2);
        const double res_half = lap(5e-3);
        CHECK(res_h / res_half > 3.5);
        CHECK(res_h / res_half < 4.5);
    }
}

TEST_CASE("circle rule is the equal-weight trapezoid rule") {
    const SphereQuadrature quad = build_sphere_quadrature(2, 8);
    REQUIRE(quad.size() == 8);
    for (double w : quad.weights) CHECK(w == doctest::Approx(kPi / 4.0));
    double sum = 0.0;
    for (double w : quad.weights) sum += w;
    CHECK(sum == doctest::Approx(2.0 * kPi).epsilon(1e-13));
}

TEST_CASE("weight sum equals the sphere measure in every dimension") {
    for (int n = 2; n <= 6; ++n) {
        const SphereQuadrature quad = build_sphere_quadrature(n, 12);
        double sum = 0.0;
        for (double w : quad.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(sphere_surface_area(n)).epsilon(1e-12));
    }
}

TEST_CASE("nodes are unit vectors") {
    for (int n : {2, 3, 5}) {
        const SphereQuadrature quad = build_sphere_quadrature(n, 10);
        for (std::size_t j = 0; j < quad.size(); ++j) {
            double norm2 = 0.0;
            for (double c : quad.node(j)) norm2 += c * c;
            CHECK(std::abs(std::sqrt(norm2) - 1.0) < 1e-14);
        }
    }
}

TEST_CASE("monomials integrate exactly up to the declared degree") {
    for (int n = 2; n <= 5; ++n) {
        const SphereQuadrature quad = build_sphere_quadrature(n, 8);
        REQUIRE(quad.exactness_degree == 7);
        std::vector<int> alpha(n, 0);
        for (int degree = 0; degree <= quad.exactness_degree; ++degree)
            sweep_monomials(quad, degree, alpha, 0, degree);
    }
}

TEST_CASE("coordinate second moment on S^2") {
    const SphereQuadrature quad = build_sphere_quadrature(3, 8);
    double acc = 0.0;
    for (std::size_t j = 0; j < quad.size(); ++j)
        acc += quad.weights[j] * quad.node(j)[0] * quad.node(j)[0];
    CHECK(acc == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-10));
}

TEST_CASE("quadrature rejects bad arguments") {
    CHECK_THROWS_AS(build_sphere_quadrature(1, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_sphere_quadrature(3, 1), std::invalid_argument);
}

TEST_CASE("gauss rules integrate their weights") {
    const QuadratureRule1D leg = gauss_legendre(6);
    double acc = 0.0;
    for (std::size_t i = 0; i < leg.size(); ++i)
        acc += leg.weights[i] * std::pow(leg.nodes[i], 4);
    CHECK(acc == doctest::Approx(2.0 / 5.0).epsilon(1e-14));

    // Chebyshev weight: moments pi and pi/2
    const QuadratureRule1D cheb = gauss_gegenbauer(8, -0.5);
    double m0 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < cheb.size(); ++i) {
        m0 += cheb.weights[i];
        m2 += cheb.weights[i] * cheb.nodes[i] * cheb.nodes[i];
    }
    CHECK(m0 == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(m2 == doctest::Approx(kPi / 2.0).epsilon(1e-13));
}

TEST_CASE("ellipsoid membership and boundary map") {
    const Ellipsoid e(2, {1.0, 0.7});
    CHECK(e.det() == doctest::Approx(0.7));
    CHECK(e.min_axis() == doctest::Approx(0.7));
    CHECK(e.diameter() == doctest::Approx(2.0));
    const std::vector<double> inside{0.5, 0.1}, outside{0.9, 0.5};
    CHECK(e.contains(inside));
    CHECK(!e.contains(outside));
    const std::vector<double> sigma{0.6, 0.8};
    std::vector<double> boundary(2);
    e.boundary_point(sigma, boundary);
    CHECK(boundary[0] == doctest::Approx(0.6));
    CHECK(boundary[1] == doctest::Approx(0.56));
    CHECK(e.scaled_norm(boundary) == doctest::Approx(1.0));
    CHECK_THROWS_AS(Ellipsoid(2, {1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid(1, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(Ellipsoid(3, {1.0, 0.5}), std::invalid_argument);
}

}  // TEST_SUITE
