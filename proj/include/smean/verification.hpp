#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smean/geometry.hpp"
#include "smean/phantom.hpp"

namespace smean {

/// Outcome of one numerical lemma check.
struct CheckReport {
    std::string name;
    int n = 0;
    std::string params;
    double error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// PV int_{-1}^{1} g(s) / (s_star - s) ds for |s_star| < 1, by symmetric
/// singularity subtraction: the smooth remainder (g(s) - g(s_star))/(s_star - s)
/// is integrated with composite Gauss-Legendre panels geometrically graded
/// toward the endpoints, and the subtracted pole contributes the exact term
/// g(s_star) log((1 + s_star)/(1 - s_star)).
double pv_unit_interval(const std::function<double(double)>& g, double s_star);

/// Hilbert transform H[(1-s^2)^{(n-3)/2}_+](s_star) = PV integral / pi.
double hilbert_gegenbauer(int n, double s_star);

/// (1/pi) int_0^pi log(c |s_star - cos t|) dt for c > 0, |s_star| < 1:
/// the Chebyshev-weighted log integral in the cos t variable, with panels
/// graded toward the interior log singularity. Equals log(c) - log(2).
double chebyshev_log_integral(double c, double s_star);

/// k-th derivative of f at `at`, from a least-squares polynomial fit of the
/// given degree through num_samples Chebyshev-spaced samples on [lo, hi].
double polyfit_derivative(const std::function<double(double)>& f, double lo, double hi,
                          int degree, int num_samples, double at, int order);

// --- lemma checks -----------------------------------------------------------

/// Sphere quadrature of h(<sigma, v>) against the 1D Gauss-Gegenbauer form
/// omega_{n-2} int (1-s^2)^{(n-3)/2} h(|v| s) ds. Error is relative to
/// max(|reference|, 1).
CheckReport check_funk_hecke(int n, const std::function<double(double)>& h,
                             std::span<const double> v, const SphereQuadrature& quad,
                             double tolerance, const std::string& label = "");

/// d^{n-3}/ds*^{n-3} H[(1-s^2)^{(n-3)/2}_+] == (-1)^{n/2} (n-3)! for even n >= 4,
/// checked at the given s_star samples (max absolute error).
CheckReport check_hilbert_identity(int n, std::span<const double> s_star_samples,
                                   double tolerance);

/// Even-dimension kernel identity at one pair x != y in E: the weighted kernel
/// integral equals (-1)^{(n-2)/2} pi omega_{n-2} (n-2)! 2^{2-n} G_n(Ax, Ay).
CheckReport check_kernel_even(int n, std::span<const double> x, std::span<const double> y,
                              const Ellipsoid& e, double tolerance);

/// Odd-dimension kernel identity (delta sifting + polynomial differentiation).
CheckReport check_kernel_odd(int n, std::span<const double> x, std::span<const double> y,
                             const Ellipsoid& e, double tolerance);

/// | |x|^2 - |y|^2 | / (2 |A(x-y)|) < 1 over random pairs in E; reports the
/// maximum observed ratio.
CheckReport check_norm_estimate(const Ellipsoid& e, int trials, std::uint64_t seed);

/// f(x) = det(A) Delta_{Ax} int f(y) G_n(Ax, Ay) dy at the given samples, with
/// the volume potential on a fine per-bump grid and a discrete Laplacian of
/// step h. Error is relative to max |f|. Restricted to n <= 3 (volume
/// quadrature cost); higher n is covered by the end-to-end reconstructions.
CheckReport check_fundamental_identity(const Ellipsoid& e, const Phantom& phantom,
                                       std::span<const double> samples_flat,
                                       int grid_per_axis, double h, double tolerance);

/// Richardson ratio residual(h) / residual(h/2) of the Darboux residual
/// (expected ~4 for a second-order scheme); error is |ratio - 4|.
CheckReport check_darboux_ratio(const Phantom& phantom, std::span<const double> z,
                                double r, double h, double window);

/// Absolute Darboux residual at step h.
CheckReport check_darboux_residual(const Phantom& phantom, std::span<const double> z,
                                   double r, double h, double tolerance);

// --- suite ------------------------------------------------------------------

struct VerifyConfig {
    std::uint64_t seed = 20240901;
    double tolerance_scale = 1.0;
    int norm_trials = 100000;
    int kernel_pairs = 20;
    /// restrict to checks whose name contains any of these substrings (empty = all)
    std::vector<std::string> only;
    /// restrict to checks for these dimensions (empty = all)
    std::vector<int> dims;
    int threads = 0;
};

/// Runs the whole lemma suite; reports are merged deterministically by name.
std::vector<CheckReport> run_all(const VerifyConfig& config);

}  // namespace smean
