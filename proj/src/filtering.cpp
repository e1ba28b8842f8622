#include "smean/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "smean/interpolation.hpp"
#include "smean/parallel.hpp"

namespace smean {

namespace {

/// d^2/drho^2 on a uniform grid, second-order one-sided at the ends.
void second_difference(const std::vector<double>& in, std::vector<double>& out,
                       double drho) {
    const std::size_t m = in.size();
    const double inv = 1.0 / (drho * drho);
    out[0] = (2.0 * in[0] - 5.0 * in[1] + 4.0 * in[2] - in[3]) * inv;
    for (std::size_t i = 1; i + 1 < m; ++i)
        out[i] = (in[i + 1] - 2.0 * in[i] + in[i - 1]) * inv;
    out[m - 1] = (2.0 * in[m - 1] - 5.0 * in[m - 2] + 4.0 * in[m - 3] - in[m - 4]) * inv;
}

/// d/drho on a uniform grid, second-order one-sided at the ends.
void first_difference(const std::vector<double>& in, std::vector<double>& out,
                      double drho) {
    const std::size_t m = in.size();
    const double inv = 1.0 / drho;
    out[0] = (-1.5 * in[0] + 2.0 * in[1] - 0.5 * in[2]) * inv;
    for (std::size_t i = 1; i + 1 < m; ++i) out[i] = 0.5 * (in[i + 1] - in[i - 1]) * inv;
    out[m - 1] = (1.5 * in[m - 1] - 2.0 * in[m - 2] + 0.5 * in[m - 3]) * inv;
}

}  // namespace

FilteredData radial_filter(const MeanData& data, int derivative_order, int threads) {
    if (derivative_order < 0)
        throw std::invalid_argument("radial_filter: derivative order must be >= 0");
    const int n = data.geometry.n;
    const int k_count = data.radii.count;
    const std::size_t j_count = data.directions.size();
    const int m = derivative_order;

    FilteredData out{data.geometry, data.directions, data.radii, m, 0, {}};
    out.values.assign(data.values.size(), 0.0);

    if (m == 0) {
        parallel_for(j_count, threads, [&](std::size_t j) {
            for (int k = 0; k < k_count; ++k) {
                const double r = data.radii.r(k);
                out.values[j * k_count + k] = std::pow(r, n - 2) * data.at(j, k);
            }
        });
        return out;
    }

    // Uniform grid in rho = r^2, twice the sample count of the r grid.
    const int rho_count = 2 * k_count;
    if (rho_count < m + 4)
        throw std::invalid_argument("radial_filter: grid too coarse for requested order");
    std::vector<double> rho_src(k_count);
    for (int k = 0; k < k_count; ++k) {
        const double r = data.radii.r(k);
        rho_src[k] = r * r;
    }
    const double rho_lo = rho_src.front();
    const double rho_hi = rho_src.back();
    const double drho = (rho_hi - rho_lo) / (rho_count - 1);
    // conservative count of end samples touched by the one-sided stencils
    out.edge_margin = m + 3;

    parallel_for(j_count, threads, [&](std::size_t j) {
        std::vector<double> v(k_count), u(rho_count), w(rho_count);
        for (int k = 0; k < k_count; ++k)
            v[k] = std::pow(data.radii.r(k), n - 2) * data.at(j, k);

        // Resample v(rho_src) onto the uniform rho grid. Source nodes are
        // non-uniform in rho, so use a sliding 4-point Lagrange window.
        int lo = 0;
        for (int i = 0; i < rho_count; ++i) {
            const double rho = rho_lo + i * drho;
            while (lo + 1 < k_count && rho_src[lo + 1] <= rho) ++lo;
            const int i0 = std::clamp(lo - 1, 0, k_count - 4);
            u[i] = cubic_interp_points(&rho_src[i0], &v[i0], rho);
        }
        for (int pass = 0; pass < m / 2; ++pass) {
            second_difference(u, w, drho);
            u.swap(w);
        }
        if (m % 2 == 1) {
            first_difference(u, w, drho);
            u.swap(w);
        }
        for (int k = 0; k < k_count; ++k)
            out.values[j * k_count + k] = cubic_interp_uniform(u, rho_lo, drho, rho_src[k]);
    });
    return out;
}

}  // namespace smean
