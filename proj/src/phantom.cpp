#include "smean/phantom.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace smean {

double bump_profile(double t, double radius) {
    const double u = std::abs(t) / radius;
    if (u >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
}

Phantom::Phantom(const Ellipsoid& domain, std::vector<RadialBump> bumps)
    : n_(domain.n), bumps_(std::move(bumps)) {
    if (bumps_.empty()) throw std::invalid_argument("phantom: needs at least one bump");
    for (std::size_t b = 0; b < bumps_.size(); ++b) {
        const RadialBump& bump = bumps_[b];
        if (static_cast<int>(bump.center.size()) != n_)
            throw std::invalid_argument("phantom: bump center has wrong dimension");
        if (bump.radius <= 0.0)
            throw std::invalid_argument("phantom: bump radius must be positive");
        const double margin = domain.scaled_norm(bump.center) + bump.radius / domain.min_axis();
        if (margin >= 1.0)
            throw std::invalid_argument(
                "phantom: bump " + std::to_string(b) +
                " violates the support-margin rule |A^-1 c| + radius/min(a) < 1 (got " +
                std::to_string(margin) + ")");
    }
    mean_rule_ = gauss_gegenbauer(64, 0.5 * (n_ - 3));
    mean_rule_normalizer_ = sphere_surface_area(n_ - 1) / sphere_surface_area(n_);
}

double Phantom::eval(std::span<const double> x) const {
    double acc = 0.0;
    for (const RadialBump& bump : bumps_) {
        double d2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double u = x[i] - bump.center[i];
            d2 += u * u;
        }
        acc += bump.amplitude * bump_profile(std::sqrt(d2), bump.radius);
    }
    return acc;
}

double Phantom::analytic_mean(std::span<const double> z, double r, int quad_order) const {
    const QuadratureRule1D local =
        quad_order == 64 ? QuadratureRule1D{} : gauss_gegenbauer(quad_order, 0.5 * (n_ - 3));
    const QuadratureRule1D& rule = quad_order == 64 ? mean_rule_ : local;
    double acc = 0.0;
    for (const RadialBump& bump : bumps_) {
        double rho2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            const double u = z[i] - bump.center[i];
            rho2 += u * u;
        }
        const double rho = std::sqrt(rho2);
        if (rho == 0.0) {
            acc += bump.amplitude * bump_profile(r, bump.radius);
            continue;
        }
        if (r > rho + bump.radius || r < rho - bump.radius) continue;  // sphere misses support
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.size(); ++i) {
            const double s = rule.nodes[i];
            const double d2 = std::max(0.0, rho2 + r * r - 2.0 * rho * r * s);
            sum += rule.weights[i] * bump_profile(std::sqrt(d2), bump.radius);
        }
        acc += bump.amplitude * mean_rule_normalizer_ * sum;
    }
    return acc;
}

double Phantom::min_bump_radius() const {
    double m = bumps_[0].radius;
    for (const RadialBump& b : bumps_) m = std::min(m, b.radius);
    return m;
}

double Phantom::max_abs_amplitude() const {
    double m = 0.0;
    for (const RadialBump& b : bumps_) m = std::max(m, std::abs(b.amplitude));
    return m;
}

}  // namespace smean
