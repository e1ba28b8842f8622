#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smean/forward.hpp"
#include "smean/phantom.hpp"
#include "smean/reconstruction.hpp"
#include "smean/verification.hpp"

namespace smean {

/// Validated run configuration from the key-value config format (see README).
struct RunConfig {
    int n = 0;
    std::vector<double> semi_axes;
    std::vector<RadialBump> bumps;
    int directions_order = 0;
    int radial_samples = 0;
    double r_max = 0.0;  ///< 0 = auto: 2 max(a_i) + 2 dr
    std::vector<int> grid_nodes;
    double grid_margin = -1.0;  ///< < 0 = auto: 0.05 max(a_i)
    ForwardPath forward_path = ForwardPath::Analytic;
    EvenRadialRule even_rule = EvenRadialRule::ProductIntegration;
    OddIntegrand odd_integrand = OddIntegrand::ProofForm;
    std::uint64_t seed = 12345;
    int threads = 0;
    double tolerance_scale = 1.0;
    std::string out_dir = "out";

    Ellipsoid ellipsoid() const;
    Phantom phantom() const;  ///< throws if the config declares no bumps
    SphereQuadrature directions() const;
    RadialGrid radial_grid() const;
    VolumeGrid volume_grid() const;
    double margin() const;
};

/// Parses the documented key-value text; unknown keys and invariant violations
/// throw with the offending key/constraint named.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Flat binary array container: text header (magic SMEAN1, kind, dimension,
/// axis counts, spacings, origin, payload tag) followed by raw little-endian
/// float64 in row-major order.
struct VolumeData {
    std::string kind = "volume";  ///< "volume" or "means"
    int dim = 0;
    std::vector<int> counts;
    std::vector<double> spacing;
    std::vector<double> origin;
    std::vector<double> values;
};

void write_volume(const std::string& path, const VolumeData& volume);
VolumeData read_volume(const std::string& path);

VolumeData to_volume(const ReconImage& image);
VolumeData to_volume(const MeanData& data);
/// Reattaches geometry/direction/radial metadata from the config; validates shape.
MeanData means_from_volume(const VolumeData& volume, const RunConfig& config);

/// Ground truth phantom sampled on the config's volume grid.
VolumeData render_phantom(const RunConfig& config);

/// 8-bit binary PGM of a 2D slice with linear windowing from [wmin, wmax] to
/// 0..255. For dim > 2 the slice fixes `axis` at `index`. A degenerate window
/// (wmin == wmax) produces an all-zero image with a warning on stderr.
void export_slice_pgm(const VolumeData& volume, int axis, int index, double wmin,
                      double wmax, const std::string& path);

/// Relative L2 / Linf differences between two volumes on the same grid:
/// full grid, ellipsoid inside mask, and the interior |A^{-1}x| < 0.8 region.
struct VolumeMetrics {
    double rel_l2_masked = 0.0;
    double rel_linf_masked = 0.0;
    double rel_l2_interior = 0.0;
    double rel_linf_interior = 0.0;
    double rel_l2_full = 0.0;
    double rel_linf_full = 0.0;
};

VolumeMetrics compare_volumes(const VolumeData& test, const VolumeData& reference,
                              const std::vector<double>& semi_axes);

void write_metrics_csv(const std::string& path, const VolumeMetrics& metrics);
void write_reports_csv(const std::string& path, const std::vector<CheckReport>& reports);

std::string format_double(double v);  ///< shortest round-trip-safe decimal

}  // namespace smean
