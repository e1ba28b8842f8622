#include "smean/forward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "smean/parallel.hpp"

namespace smean {

RadialGrid RadialGrid::cover(const Ellipsoid& e, int count) {
    if (count < 8) throw std::invalid_argument("radial grid: need at least 8 samples");
    RadialGrid grid;
    grid.count = count;
    grid.staggered = true;
    // r_back = (count - 1/2) dr = 2 max(a) + 2 dr
    grid.dr = e.diameter() / (count - 2.5);
    return grid;
}

namespace {

/// Sphere-quadrature order for the generic path: resolves the phantom's length
/// scale on a sphere of radius r (larger spheres subtend the support under a
/// smaller angle and need more nodes).
int generic_order(double r, double min_bump_radius) {
    const int order = static_cast<int>(std::ceil(24.0 * r / min_bump_radius));
    return std::clamp(order, 16, 512);
}

}  // namespace

MeanData forward_transform(const Phantom& phantom, const Ellipsoid& geometry,
                           const SphereQuadrature& directions, const RadialGrid& radii,
                           ForwardPath path, int threads) {
    if (phantom.dimension() != geometry.n || directions.n != geometry.n)
        throw std::invalid_argument("forward: dimension mismatch");
    const int n = geometry.n;
    const std::size_t j_count = directions.size();
    const std::size_t k_count = static_cast<std::size_t>(radii.count);

    MeanData data{geometry, directions, radii, {}};
    data.values.assign(j_count * k_count, 0.0);

    // Generic path precomputes one sphere rule per distinct order; the map is
    // read-only during the parallel fill.
    std::map<int, SphereQuadrature> rules;
    std::vector<int> order_of_k(k_count, 0);
    if (path == ForwardPath::Generic) {
        const double rho_min = phantom.min_bump_radius();
        for (std::size_t k = 0; k < k_count; ++k) {
            order_of_k[k] = generic_order(radii.r(static_cast<int>(k)), rho_min);
            rules.try_emplace(order_of_k[k]);
        }
        for (auto& [order, rule] : rules) rule = build_sphere_quadrature(n, order);
    }
    const double omega = sphere_surface_area(n);

    parallel_for(j_count, threads, [&](std::size_t j) {
        std::vector<double> center(n), point(n);
        geometry.boundary_point(directions.node(j), center);
        for (std::size_t k = 0; k < k_count; ++k) {
            const double r = radii.r(static_cast<int>(k));
            if (path == ForwardPath::Analytic) {
                data.at(j, k) = phantom.analytic_mean(center, r);
            } else {
                const SphereQuadrature& rule = rules.at(order_of_k[k]);
                double sum = 0.0;
                for (std::size_t i = 0; i < rule.size(); ++i) {
                    const std::span<const double> w = rule.node(i);
                    for (int d = 0; d < n; ++d) point[d] = center[d] + r * w[d];
                    sum += rule.weights[i] * phantom.eval(point);
                }
                data.at(j, k) = sum / omega;
            }
        }
    });
    return data;
}

double darboux_residual(const Phantom& phantom, std::span<const double> z, double r,
                        double h) {
    if (r <= 2.0 * h) throw std::invalid_argument("darboux_residual: needs r > 2h");
    const int n = phantom.dimension();
    std::vector<double> p(z.begin(), z.end());
    const double center = phantom.analytic_mean(z, r);

    double lap = 0.0;
    for (int i = 0; i < n; ++i) {
        p[i] = z[i] + h;
        const double up = phantom.analytic_mean(p, r);
        p[i] = z[i] - h;
        const double dn = phantom.analytic_mean(p, r);
        p[i] = z[i];
        lap += (up - 2.0 * center + dn) / (h * h);
    }
    const double rp = phantom.analytic_mean(z, r + h);
    const double rm = phantom.analytic_mean(z, r - h);
    const double d2r = (rp - 2.0 * center + rm) / (h * h);
    const double d1r = (rp - rm) / (2.0 * h);
    return std::abs(lap - (d2r + (n - 1) / r * d1r));
}

}  // namespace smean
