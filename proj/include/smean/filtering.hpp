#pragma once

#include <vector>

#include "smean/forward.hpp"

namespace smean {

/// Radially filtered data q[j][k] = (D_r^m r^{n-2} Mf)(A sigma_j, r_k), where
/// D_r = (1/2r) d/dr is differentiation with respect to r^2. The filter order
/// is m = n-2 in the even-dimension pipeline and m = n-3 in the odd one.
struct FilteredData {
    Ellipsoid geometry;
    SphereQuadrature directions;
    RadialGrid radii;
    int derivative_order = 0;
    /// Samples at each end of the radial axis whose values may be touched by
    /// the one-sided boundary stencils of the rho-grid differencing
    /// (conservative count; 0 when derivative_order == 0).
    int edge_margin = 0;
    std::vector<double> values;  ///< row-major, directions x radii

    double at(std::size_t j, std::size_t k) const { return values[j * radii.count + k]; }
    std::span<const double> row(std::size_t j) const {
        return {values.data() + j * radii.count, static_cast<std::size_t>(radii.count)};
    }
};

/// Applies D_r^m to r^{n-2} g by exact differentiation in rho = r^2: the data
/// is resampled onto a uniform rho grid (cubic Lagrange), differenced m times
/// with second-order stencils (one-sided at the ends), and resampled back.
/// m = 0 returns r^{n-2} g without any resampling.
FilteredData radial_filter(const MeanData& data, int derivative_order, int threads = 0);

}  // namespace smean
