#include "smean/reconstruction.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "smean/interpolation.hpp"
#include "smean/parallel.hpp"

namespace smean {

VolumeGrid VolumeGrid::cover(const Ellipsoid& e, const std::vector<int>& node_counts,
                             double margin) {
    if (static_cast<int>(node_counts.size()) != e.n)
        throw std::invalid_argument("volume grid: need one node count per axis");
    if (margin < 0.0) throw std::invalid_argument("volume grid: margin must be >= 0");
    VolumeGrid grid;
    grid.n = e.n;
    grid.counts = node_counts;
    grid.semi_axes = e.semi_axes;
    grid.origin.resize(e.n);
    grid.spacing.resize(e.n);
    for (int i = 0; i < e.n; ++i) {
        if (node_counts[i] < 2)
            throw std::invalid_argument("volume grid: need at least 2 nodes per axis");
        const double ext = e.semi_axes[i] + margin;
        grid.origin[i] = -ext;
        grid.spacing[i] = 2.0 * ext / (node_counts[i] - 1);
    }
    grid.mask_epsilon = 2.0 * grid.max_spacing() / e.min_axis();

    const std::size_t total = grid.size();
    grid.inside_mask.assign(total, 0);
    grid.halo_mask.assign(total, 0);
    std::vector<double> x(e.n);
    for (std::size_t idx = 0; idx < total; ++idx) {
        grid.node(idx, x);
        const double s = e.scaled_norm(x);
        if (s < 1.0 - grid.mask_epsilon) grid.inside_mask[idx] = 1;
        if (s < 1.0 - 0.5 * grid.mask_epsilon) grid.halo_mask[idx] = 1;
    }
    return grid;
}

std::size_t VolumeGrid::size() const {
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(c);
    return total;
}

void VolumeGrid::node(std::size_t idx, std::span<double> out) const {
    for (int i = n - 1; i >= 0; --i) {
        const std::size_t c = static_cast<std::size_t>(counts[i]);
        out[i] = origin[i] + spacing[i] * static_cast<double>(idx % c);
        idx /= c;
    }
}

double VolumeGrid::max_spacing() const {
    double h = 0.0;
    for (double s : spacing) h = std::max(h, s);
    return h;
}

std::size_t VolumeGrid::masked_count() const {
    std::size_t c = 0;
    for (std::uint8_t m : inside_mask) c += m;
    return c;
}

namespace {

std::vector<std::size_t> flagged_indices(const std::vector<std::uint8_t>& flags) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i]) idx.push_back(i);
    return idx;
}

std::vector<double> boundary_centers(const FilteredData& filtered) {
    const int n = filtered.geometry.n;
    const std::size_t j_count = filtered.directions.size();
    std::vector<double> centers(j_count * n);
    for (std::size_t j = 0; j < j_count; ++j)
        filtered.geometry.boundary_point(filtered.directions.node(j),
                                         {centers.data() + j * n, static_cast<std::size_t>(n)});
    return centers;
}

/// Nonzero radial band [k0, k1) per direction; zero cells cannot contribute.
void nonzero_bands(const FilteredData& filtered, std::vector<int>& k0, std::vector<int>& k1) {
    const int k_count = filtered.radii.count;
    const std::size_t j_count = filtered.directions.size();
    k0.assign(j_count, 0);
    k1.assign(j_count, 0);
    for (std::size_t j = 0; j < j_count; ++j) {
        const std::span<const double> q = filtered.row(j);
        int lo = 0;
        while (lo < k_count && q[lo] == 0.0) ++lo;
        int hi = k_count;
        while (hi > lo && q[hi - 1] == 0.0) --hi;
        k0[j] = lo;
        k1[j] = hi;
    }
}

/// Antiderivative of log|c - rho| in rho (up to a constant).
inline double log_moment(double rho, double c) {
    const double u = c - rho;
    if (u == 0.0) return -rho;  // (rho - c) log|c - rho| -> 0
    return -u * std::log(std::abs(u)) - rho;
}

void check_parity(const FilteredData& filtered, bool even) {
    const int n = filtered.geometry.n;
    if (even) {
        if (n % 2 != 0) throw std::invalid_argument("backproject_even: dimension must be even");
        if (filtered.derivative_order != n - 2)
            throw std::invalid_argument("backproject_even: filter order must be n-2");
    } else {
        if (n % 2 == 0) throw std::invalid_argument("backproject_odd: dimension must be odd");
        if (filtered.derivative_order != n - 3)
            throw std::invalid_argument("backproject_odd: filter order must be n-3");
    }
}

}  // namespace

ReconImage backproject_even(const FilteredData& filtered, const VolumeGrid& grid,
                            EvenRadialRule rule, int threads) {
    check_parity(filtered, /*even=*/true);
    if (grid.n != filtered.geometry.n)
        throw std::invalid_argument("backproject_even: grid dimension mismatch");
    const int n = grid.n;
    const int k_count = filtered.radii.count;
    const double dr = filtered.radii.dr;
    const std::size_t j_count = filtered.directions.size();
    const std::vector<double> centers = boundary_centers(filtered);
    std::vector<int> band_lo, band_hi;
    nonzero_bands(filtered, band_lo, band_hi);

    ReconImage image{grid, std::vector<double>(grid.size(), 0.0), Stage::Backprojected, 0, 0};
    const std::vector<std::size_t> nodes = flagged_indices(grid.halo_mask);
    std::atomic<long> skipped{0};

    parallel_for(nodes.size(), threads, [&](std::size_t t) {
        const std::size_t idx = nodes[t];
        std::vector<double> x(n);
        grid.node(idx, x);
        double acc = 0.0;
        long local_skipped = 0;
        for (std::size_t j = 0; j < j_count; ++j) {
            const double* c = centers.data() + j * n;
            double d2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double u = x[i] - c[i];
                d2 += u * u;
            }
            const std::span<const double> q = filtered.row(j);
            double radial = 0.0;
            if (rule == EvenRadialRule::Midpoint) {
                for (int k = band_lo[j]; k < band_hi[j]; ++k) {
                    const double r = filtered.radii.r(k);
                    const double arg = d2 - r * r;
                    if (arg == 0.0) {
                        ++local_skipped;  // integrable singularity, measure-zero hit
                        continue;
                    }
                    radial += dr * r * q[k] * std::log(std::abs(arg));
                }
            } else {
                // exact cell moments: int_cell r log|d^2 - r^2| dr
                //   = (1/2) [ M(rho_hi) - M(rho_lo) ],  rho = r^2
                const double e0 = filtered.radii.edge(band_lo[j]);
                double prev = log_moment(e0 * e0, d2);
                for (int k = band_lo[j]; k < band_hi[j]; ++k) {
                    const double e1 = filtered.radii.edge(k + 1);
                    const double next = log_moment(e1 * e1, d2);
                    radial += 0.5 * q[k] * (next - prev);
                    prev = next;
                }
            }
            acc += filtered.directions.weights[j] * radial;
        }
        image.values[idx] = acc;
        if (local_skipped != 0) skipped += local_skipped;
    });
    image.skipped_singular_terms = skipped.load();
    return image;
}

ReconImage backproject_odd(const FilteredData& filtered, const VolumeGrid& grid,
                           OddIntegrand integrand, int threads) {
    check_parity(filtered, /*even=*/false);
    if (grid.n != filtered.geometry.n)
        throw std::invalid_argument("backproject_odd: grid dimension mismatch");
    const int n = grid.n;
    const double r0 = filtered.radii.r_front();
    const double dr = filtered.radii.dr;
    const std::size_t j_count = filtered.directions.size();
    const std::vector<double> centers = boundary_centers(filtered);

    ReconImage image{grid, std::vector<double>(grid.size(), 0.0), Stage::Backprojected, 0, 0};
    const std::vector<std::size_t> nodes = flagged_indices(grid.halo_mask);

    parallel_for(nodes.size(), threads, [&](std::size_t t) {
        const std::size_t idx = nodes[t];
        std::vector<double> x(n);
        grid.node(idx, x);
        double acc = 0.0;
        for (std::size_t j = 0; j < j_count; ++j) {
            const double* c = centers.data() + j * n;
            double d2 = 0.0;
            for (int i = 0; i < n; ++i) {
                const double u = x[i] - c[i];
                d2 += u * u;
            }
            const double d = std::sqrt(d2);
            double value = cubic_interp_uniform(filtered.row(j), r0, dr, d, 0.0);
            if (integrand == OddIntegrand::TheoremLiteral) value *= d;
            acc += filtered.directions.weights[j] * value;
        }
        image.values[idx] = acc;
    });
    return image;
}

ReconImage apply_anisotropic_laplacian(const ReconImage& image, const Ellipsoid& geometry,
                                       int threads) {
    if (image.stage != Stage::Backprojected)
        throw std::invalid_argument("laplacian: image already filtered");
    const VolumeGrid& grid = image.grid;
    if (grid.n != geometry.n)
        throw std::invalid_argument("laplacian: dimension mismatch");
    const int n = grid.n;

    // per-axis strides, last axis fastest
    std::vector<std::size_t> stride(n, 1);
    for (int i = n - 2; i >= 0; --i)
        stride[i] = stride[i + 1] * static_cast<std::size_t>(grid.counts[i + 1]);

    ReconImage out{grid, std::vector<double>(grid.size(), 0.0), Stage::LaplacianApplied,
                   image.skipped_singular_terms, 0};
    const std::vector<std::size_t> nodes = flagged_indices(grid.inside_mask);
    std::atomic<long> dropped{0};

    parallel_for(nodes.size(), threads, [&](std::size_t t) {
        const std::size_t idx = nodes[t];
        // multi-index to bounds-check the stencil
        std::size_t rem = idx;
        bool full = true;
        std::vector<int> mi(n);
        for (int i = n - 1; i >= 0; --i) {
            mi[i] = static_cast<int>(rem % grid.counts[i]);
            rem /= grid.counts[i];
            if (mi[i] == 0 || mi[i] == grid.counts[i] - 1) full = false;
        }
        if (full) {
            for (int i = 0; i < n; ++i) {
                if (!grid.halo_mask[idx - stride[i]] || !grid.halo_mask[idx + stride[i]]) {
                    full = false;
                    break;
                }
            }
        }
        if (!full) {
            ++dropped;
            return;
        }
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            const double h = grid.spacing[i];
            const double second = (image.values[idx + stride[i]] - 2.0 * image.values[idx] +
                                   image.values[idx - stride[i]]) /
                                  (h * h);
            acc += second / (geometry.semi_axes[i] * geometry.semi_axes[i]);
        }
        out.values[idx] = acc;
    });
    out.dropped_nodes = dropped.load();
    return out;
}

ReconImage reconstruct(const MeanData& data, const VolumeGrid& grid,
                       const ReconstructOptions& options) {
    const int n = data.geometry.n;
    const bool even = (n % 2 == 0);
    const FilteredData filtered =
        radial_filter(data, even ? n - 2 : n - 3, options.threads);
    ReconImage back =
        even ? backproject_even(filtered, grid, options.even_rule, options.threads)
             : backproject_odd(filtered, grid, options.odd_integrand, options.threads);
    ReconImage result = apply_anisotropic_laplacian(back, data.geometry, options.threads);
    const double scale = data.geometry.det() / reconstruction_constant(n);
    for (double& v : result.values) v *= scale;
    return result;
}

}  // namespace smean
