#pragma once

#include <cstdint>
#include <vector>

#include "smean/filtering.hpp"

namespace smean {

/// Cartesian reconstruction grid over the bounding box of the ellipsoid.
/// Nodes with |A^{-1} x| < 1 - mask_epsilon form the inside mask on which the
/// reconstruction identity is evaluated; the back-projection additionally
/// fills a one-stencil halo (|A^{-1} x| < 1 - mask_epsilon/2) so that the
/// Laplacian has complete neighbourhoods on every masked node.
struct VolumeGrid {
    int n = 0;
    std::vector<double> origin;     ///< per-axis first node coordinate
    std::vector<double> spacing;    ///< per-axis node spacing
    std::vector<int> counts;        ///< per-axis node counts
    std::vector<double> semi_axes;  ///< mask geometry
    double mask_epsilon = 0.0;
    std::vector<std::uint8_t> inside_mask;  ///< 1 on masked nodes
    std::vector<std::uint8_t> halo_mask;    ///< 1 on mask + stencil halo

    /// Grid with per-axis extents [-(a_i + margin), a_i + margin] and
    /// mask_epsilon = 2 max(h_i) / min(a_i).
    static VolumeGrid cover(const Ellipsoid& e, const std::vector<int>& node_counts,
                            double margin);

    std::size_t size() const;
    /// Row-major (last axis fastest) index -> node coordinates.
    void node(std::size_t idx, std::span<double> out) const;
    double max_spacing() const;
    std::size_t masked_count() const;
};

enum class Stage { Backprojected, LaplacianApplied };

/// Scalar field on a VolumeGrid plus pipeline diagnostics.
struct ReconImage {
    VolumeGrid grid;
    std::vector<double> values;
    Stage stage = Stage::Backprojected;
    long skipped_singular_terms = 0;  ///< exact kernel hits skipped (midpoint rule)
    long dropped_nodes = 0;           ///< masked nodes without a full stencil
};

/// Radial quadrature for the singular log kernel of the even-dimension
/// back-projection.
enum class EvenRadialRule {
    /// q piecewise-constant per staggered cell against the exact cell moments
    /// of r log| |x-As|^2 - r^2 | (closed form in rho = r^2). Default: the
    /// kernel singularity is integrated instead of sampled.
    ProductIntegration,
    /// Plain midpoint sum dr * r_k * q_k * log| |x-As|^2 - r_k^2 |; a node
    /// where the argument vanishes exactly has that term skipped and tallied.
    Midpoint,
};

/// Integrand of the odd-dimension back-projection.
enum class OddIntegrand {
    ProofForm,       ///< (D_r^{n-3} r^{n-2} Mf)(As, |x-As|)
    TheoremLiteral,  ///< extra factor r = |x-As| (for the discrepancy experiment)
};

/// B(x) = sum_j w_j sum-over-r of r q[j](r) log| |x-As_j|^2 - r^2 |, n even.
ReconImage backproject_even(const FilteredData& filtered, const VolumeGrid& grid,
                            EvenRadialRule rule = EvenRadialRule::ProductIntegration,
                            int threads = 0);

/// B(x) = sum_j w_j q[j](|x - As_j|) with cubic radial interpolation, n odd.
/// Radii outside the data grid contribute zero.
ReconImage backproject_odd(const FilteredData& filtered, const VolumeGrid& grid,
                           OddIntegrand integrand = OddIntegrand::ProofForm,
                           int threads = 0);

/// Second-order central differences of sum_i a_i^{-2} d^2/dx_i^2 on masked
/// nodes. Masked nodes whose stencil leaves the computed halo are dropped
/// (zeroed and counted).
ReconImage apply_anisotropic_laplacian(const ReconImage& image, const Ellipsoid& geometry,
                                       int threads = 0);

struct ReconstructOptions {
    EvenRadialRule even_rule = EvenRadialRule::ProductIntegration;
    OddIntegrand odd_integrand = OddIntegrand::ProofForm;
    int threads = 0;
};

/// Full parity-dispatched pipeline:
/// radial_filter (m = n-2 even / n-3 odd) -> backproject -> anisotropic
/// Laplacian -> det(A)/c_n.
ReconImage reconstruct(const MeanData& data, const VolumeGrid& grid,
                       const ReconstructOptions& options = {});

}  // namespace smean
