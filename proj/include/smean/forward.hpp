#pragma once

#include <span>
#include <vector>

#include "smean/geometry.hpp"
#include "smean/phantom.hpp"

namespace smean {

/// Uniform radial sample grid. Staggered grids place r_k = (k + 1/2) dr so that
/// kernel singularities at r = |x - A sigma| never coincide with samples.
struct RadialGrid {
    double dr = 0.0;
    int count = 0;
    bool staggered = true;

    double r(int k) const { return (k + (staggered ? 0.5 : 0.0)) * dr; }
    double r_front() const { return r(0); }
    double r_back() const { return r(count - 1); }
    /// Lower edge of sample cell k (edge k+1 is the upper one).
    double edge(int k) const {
        const double e = (k - (staggered ? 0.0 : 0.5)) * dr;
        return e < 0.0 ? 0.0 : e;
    }

    /// Staggered grid with r_max = 2 max(a_i) + 2 dr, so spheres beyond the
    /// last sample cannot meet the closed ellipsoid.
    static RadialGrid cover(const Ellipsoid& e, int count);
};

/// Samples of the spherical mean transform g[j][k] = (Mf)(A sigma_j, r_k).
struct MeanData {
    Ellipsoid geometry;
    SphereQuadrature directions;
    RadialGrid radii;
    std::vector<double> values;  ///< row-major, directions x radii

    double& at(std::size_t j, std::size_t k) { return values[j * radii.count + k]; }
    double at(std::size_t j, std::size_t k) const { return values[j * radii.count + k]; }
    std::span<const double> row(std::size_t j) const {
        return {values.data() + j * radii.count, static_cast<std::size_t>(radii.count)};
    }
};

enum class ForwardPath {
    Analytic,  ///< per-bump 1D Funk-Hecke reduction (oracle grade)
    Generic,   ///< n-dimensional sphere quadrature of f(z + r w) / omega_{n-1}
};

/// Discretized spherical mean transform of Eq-style (1/omega) int f(z + r w) dw
/// sampled at centers A sigma_j and radii r_k. Parallel over directions with
/// deterministic output.
MeanData forward_transform(const Phantom& phantom, const Ellipsoid& geometry,
                           const SphereQuadrature& directions, const RadialGrid& radii,
                           ForwardPath path = ForwardPath::Analytic, int threads = 0);

/// | Delta_x Mf - (d^2/dr^2 + (n-1)/r d/dr) Mf | at (z, r), both sides by
/// second-order central differences with step h on analytic means.
double darboux_residual(const Phantom& phantom, std::span<const double> z, double r,
                        double h);

}  // namespace smean
