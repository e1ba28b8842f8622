#include "smean/geometry.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

namespace smean {

namespace {
constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}
}  // namespace

Ellipsoid::Ellipsoid(int dimension, std::vector<double> axes)
    : n(dimension), semi_axes(std::move(axes)) {
    require(n >= 2, "ellipsoid dimension must be >= 2");
    require(static_cast<int>(semi_axes.size()) == n,
            "ellipsoid needs exactly n semi-axes");
    for (double a : semi_axes) require(a > 0.0, "semi-axes must be positive");
}

double Ellipsoid::det() const {
    double d = 1.0;
    for (double a : semi_axes) d *= a;
    return d;
}

double Ellipsoid::min_axis() const {
    double m = semi_axes[0];
    for (double a : semi_axes) m = std::min(m, a);
    return m;
}

double Ellipsoid::max_axis() const {
    double m = semi_axes[0];
    for (double a : semi_axes) m = std::max(m, a);
    return m;
}

double Ellipsoid::scaled_norm(std::span<const double> x) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = x[i] / semi_axes[i];
        s += u * u;
    }
    return std::sqrt(s);
}

void Ellipsoid::boundary_point(std::span<const double> sigma, std::span<double> out) const {
    for (int i = 0; i < n; ++i) out[i] = semi_axes[i] * sigma[i];
}

QuadratureRule1D gauss_legendre(int m) {
    require(m >= 1, "gauss_legendre: order must be >= 1");
    gsl_integration_glfixed_table* tab = gsl_integration_glfixed_table_alloc(m);
    QuadratureRule1D rule;
    rule.nodes.resize(m);
    rule.weights.resize(m);
    for (int i = 0; i < m; ++i) {
        double x, w;
        gsl_integration_glfixed_point(-1.0, 1.0, i, &x, &w, tab);
        rule.nodes[i] = x;
        rule.weights[i] = w;
    }
    gsl_integration_glfixed_table_free(tab);
    return rule;
}

QuadratureRule1D gauss_gegenbauer(int m, double alpha) {
    require(m >= 1, "gauss_gegenbauer: order must be >= 1");
    require(alpha > -1.0, "gauss_gegenbauer: alpha must be > -1");
    if (alpha == 0.0) return gauss_legendre(m);
    gsl_integration_fixed_workspace* ws = gsl_integration_fixed_alloc(
        gsl_integration_fixed_gegenbauer, m, -1.0, 1.0, alpha, 0.0);
    require(ws != nullptr, "gauss_gegenbauer: rule construction failed");
    QuadratureRule1D rule;
    rule.nodes.assign(gsl_integration_fixed_nodes(ws), gsl_integration_fixed_nodes(ws) + m);
    rule.weights.assign(gsl_integration_fixed_weights(ws),
                        gsl_integration_fixed_weights(ws) + m);
    gsl_integration_fixed_free(ws);
    return rule;
}

SphereQuadrature build_sphere_quadrature(int n, int order) {
    require(n >= 2, "sphere quadrature: dimension must be >= 2");
    require(order >= 2, "sphere quadrature: order must be >= 2");
    SphereQuadrature quad;
    quad.n = n;
    quad.exactness_degree = order - 1;
    if (n == 2) {
        quad.nodes.resize(2 * static_cast<std::size_t>(order));
        quad.weights.assign(order, 2.0 * kPi / order);
        for (int j = 0; j < order; ++j) {
            const double phi = 2.0 * kPi * j / order;
            quad.nodes[2 * j] = std::cos(phi);
            quad.nodes[2 * j + 1] = std::sin(phi);
        }
        return quad;
    }
    // sigma = (t, sqrt(1-t^2) * omega), omega on S^{n-2};
    // integral splits as (1-t^2)^{(n-3)/2} dt x d(omega).
    const SphereQuadrature inner = build_sphere_quadrature(n - 1, order);
    const int mt = (order + 1) / 2;
    const QuadratureRule1D polar = gauss_gegenbauer(mt, 0.5 * (n - 3));
    const std::size_t count = polar.size() * inner.size();
    quad.nodes.resize(count * static_cast<std::size_t>(n));
    quad.weights.resize(count);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < polar.size(); ++i) {
        const double t = polar.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
        for (std::size_t j = 0; j < inner.size(); ++j) {
            double* node = quad.nodes.data() + idx * n;
            node[0] = t;
            const std::span<const double> om = inner.node(j);
            for (int d = 0; d < n - 1; ++d) node[1 + d] = s * om[d];
            quad.weights[idx] = polar.weights[i] * inner.weights[j];
            ++idx;
        }
    }
    return quad;
}

double sphere_surface_area(int n) {
    require(n >= 1, "sphere_surface_area: dimension must be >= 1");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double factorial(int k) {
    double v = 1.0;
    for (int i = 2; i <= k; ++i) v *= i;
    return v;
}

double reconstruction_constant(int n) {
    require(n >= 2, "reconstruction_constant: dimension must be >= 2");
    const double omega = sphere_surface_area(n - 1);  // |S^{n-2}|
    if (n % 2 == 0) {
        const double sign = ((n - 2) / 2) % 2 == 0 ? 1.0 : -1.0;
        return sign * omega * kPi * factorial(n - 2) * std::pow(2.0, 2 - n);
    }
    const double sign = ((n - 1) / 2) % 2 == 0 ? 1.0 : -1.0;
    return sign * omega * factorial(n - 2) * std::pow(2.0, 3 - n);
}

double fundamental_solution_dist(int n, double dist) {
    require(n >= 2, "fundamental solution: dimension must be >= 2");
    if (dist <= 0.0) throw std::domain_error("fundamental solution: x == y singularity");
    if (n == 2) return std::log(dist) / (2.0 * kPi);
    return std::pow(dist, 2.0 - n) / (sphere_surface_area(n) * (2.0 - n));
}

double fundamental_solution(int n, std::span<const double> x, std::span<const double> y) {
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = x[i] - y[i];
        d2 += u * u;
    }
    return fundamental_solution_dist(n, std::sqrt(d2));
}

}  // namespace smean
