#pragma once

#include <span>
#include <vector>

#include "smean/geometry.hpp"

namespace smean {

/// Radially symmetric smooth bump: amplitude * profile(|x - center|) with the
/// standard mollifier profile t -> exp(-1 / (1 - (t/radius)^2)) for t < radius.
struct RadialBump {
    std::vector<double> center;
    double radius = 0.0;
    double amplitude = 0.0;
};

/// Mollifier profile value at distance t for support radius `radius`.
double bump_profile(double t, double radius);

/// Finite sum of radial bumps supported strictly inside an ellipsoid. The
/// support-margin condition |A^{-1} c| + radius / min(a_i) < 1 is enforced per
/// bump at construction. Immutable afterwards; evaluation is thread-safe.
class Phantom {
public:
    Phantom(const Ellipsoid& domain, std::vector<RadialBump> bumps);

    int dimension() const { return n_; }
    const std::vector<RadialBump>& bumps() const { return bumps_; }

    double eval(std::span<const double> x) const;

    /// Spherical mean over the sphere of center z and radius r via the 1D
    /// Funk-Hecke reduction per bump:
    ///   (omega_{n-2}/omega_{n-1}) * int_{-1}^{1} (1-s^2)^{(n-3)/2}
    ///         profile(sqrt(rho^2 + r^2 - 2 rho r s)) ds,   rho = |z - center|.
    /// Gauss nodes in the (1-s^2)^{(n-3)/2} weight; exact (profile(r)) for rho = 0.
    double analytic_mean(std::span<const double> z, double r, int quad_order = 64) const;

    double min_bump_radius() const;
    double max_abs_amplitude() const;

private:
    int n_;
    std::vector<RadialBump> bumps_;
    QuadratureRule1D mean_rule_;      ///< default-order rule, weight (1-s^2)^{(n-3)/2}
    double mean_rule_normalizer_;     ///< omega_{n-2}/omega_{n-1}
};

}  // namespace smean
