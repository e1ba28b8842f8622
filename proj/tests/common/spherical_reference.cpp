#include "spherical_reference.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace smean_tests {

namespace {

/// Neville's algorithm on the four nearest samples of a uniform grid.
double neville4(const double* y, double t) {
    // nodes at 0,1,2,3 in index units
    double p01 = y[0] + (y[1] - y[0]) * t;
    double p12 = y[1] + (y[2] - y[1]) * (t - 1.0);
    double p23 = y[2] + (y[3] - y[2]) * (t - 2.0);
    double p012 = (p12 * t - p01 * (t - 2.0)) / 2.0;
    double p123 = (p23 * (t - 1.0) - p12 * (t - 3.0)) / 2.0;
    return (p123 * t - p012 * (t - 3.0)) / 3.0;
}

}  // namespace

std::vector<double> spherical_reference_reconstruct(const smean::MeanData& data,
                                                    const smean::VolumeGrid& grid) {
    if (data.geometry.n != 3 || grid.n != 3)
        throw std::invalid_argument("spherical reference: n = 3 only");
    const double rho = data.geometry.semi_axes[0];
    for (double a : data.geometry.semi_axes)
        if (a != rho)
            throw std::invalid_argument("spherical reference: needs equal semi-axes");

    const std::size_t j_count = data.directions.size();
    const int k_count = data.radii.count;
    const double dr = data.radii.dr;
    const double r0 = data.radii.r(0);

    // r * Mf tables per detector point p_j = rho sigma_j
    std::vector<double> table(j_count * static_cast<std::size_t>(k_count));
    for (std::size_t j = 0; j < j_count; ++j)
        for (int k = 0; k < k_count; ++k)
            table[j * k_count + k] = data.radii.r(k) * data.at(j, k);
    std::vector<double> detectors(j_count * 3);
    for (std::size_t j = 0; j < j_count; ++j)
        for (int i = 0; i < 3; ++i)
            detectors[j * 3 + i] = rho * data.directions.node(j)[i];

    const int nx = grid.counts[0], ny = grid.counts[1], nz = grid.counts[2];
    const auto flat = [&](int ix, int iy, int iz) {
        return (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
    };

    // smeared surface integral S(x) = rho^2 sum_j w_j (r Mf)(p_j, |x - p_j|)
    std::vector<double> smear(grid.size(), 0.0);
    for (int ix = 0; ix < nx; ++ix) {
        const double x0 = grid.origin[0] + ix * grid.spacing[0];
        for (int iy = 0; iy < ny; ++iy) {
            const double x1 = grid.origin[1] + iy * grid.spacing[1];
            for (int iz = 0; iz < nz; ++iz) {
                const std::size_t idx = flat(ix, iy, iz);
                if (!grid.halo_mask[idx]) continue;
                const double x2 = grid.origin[2] + iz * grid.spacing[2];
                double acc = 0.0;
                for (std::size_t j = 0; j < j_count; ++j) {
                    const double dx = x0 - detectors[j * 3];
                    const double dy = x1 - detectors[j * 3 + 1];
                    const double dz = x2 - detectors[j * 3 + 2];
                    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
                    const double t = (dist - r0) / dr;
                    if (t < 0.0 || t > k_count - 1) continue;
                    int base = static_cast<int>(std::floor(t)) - 1;
                    if (base < 0) base = 0;
                    if (base > k_count - 4) base = k_count - 4;
                    acc += data.directions.weights[j] *
                           neville4(&table[j * k_count + base], t - base);
                }
                smear[idx] = rho * rho * acc;
            }
        }
    }

    // f = -1/(2 pi rho) * 7-point Laplacian of the smeared field
    const double scale = -1.0 / (2.0 * std::numbers::pi * rho);
    std::vector<double> image(grid.size(), 0.0);
    const double hx2 = grid.spacing[0] * grid.spacing[0];
    const double hy2 = grid.spacing[1] * grid.spacing[1];
    const double hz2 = grid.spacing[2] * grid.spacing[2];
    for (int ix = 1; ix + 1 < nx; ++ix)
        for (int iy = 1; iy + 1 < ny; ++iy)
            for (int iz = 1; iz + 1 < nz; ++iz) {
                const std::size_t idx = flat(ix, iy, iz);
                if (!grid.inside_mask[idx]) continue;
                const double lap =
                    (smear[flat(ix + 1, iy, iz)] - 2.0 * smear[idx] +
                     smear[flat(ix - 1, iy, iz)]) / hx2 +
                    (smear[flat(ix, iy + 1, iz)] - 2.0 * smear[idx] +
                     smear[flat(ix, iy - 1, iz)]) / hy2 +
                    (smear[flat(ix, iy, iz + 1)] - 2.0 * smear[idx] +
                     smear[flat(ix, iy, iz - 1)]) / hz2;
                image[idx] = scale * lap;
            }
    return image;
}

}  // namespace smean_tests
