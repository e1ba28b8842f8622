#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smean {

/// Solid ellipsoid E = { x : sum x_i^2 / a_i^2 < 1 } with A = diag(a_1..a_n).
/// Boundary points are A*sigma for unit vectors sigma.
struct Ellipsoid {
    int n = 0;
    std::vector<double> semi_axes;

    Ellipsoid() = default;
    Ellipsoid(int dimension, std::vector<double> axes);

    double det() const;       ///< det(A) = prod a_i
    double min_axis() const;
    double max_axis() const;
    double diameter() const { return 2.0 * max_axis(); }

    /// |A^{-1} x|
    double scaled_norm(std::span<const double> x) const;
    bool contains(std::span<const double> x) const { return scaled_norm(x) < 1.0; }

    /// out = A * sigma (a boundary point when |sigma| = 1)
    void boundary_point(std::span<const double> sigma, std::span<double> out) const;
};

/// 1D quadrature rule on [-1, 1]: sum w_i f(x_i).
struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre rule (weight 1 on [-1,1]), exact for polynomials of degree <= 2m-1.
QuadratureRule1D gauss_legendre(int m);

/// Gauss rule for the weight (1-x^2)^alpha on [-1,1], alpha > -1; the weights
/// absorb the weight function. Exact for p(x)*(1-x^2)^alpha with deg p <= 2m-1.
QuadratureRule1D gauss_gegenbauer(int m, double alpha);

/// Quadrature on the unit sphere S^{n-1}: sum_j w_j F(sigma_j) ~ integral of F.
struct SphereQuadrature {
    int n = 0;
    int exactness_degree = 0;        ///< all monomials of total degree <= this integrate exactly
    std::vector<double> nodes;       ///< row-major, size() x n
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    std::span<const double> node(std::size_t j) const {
        return {nodes.data() + j * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
    }
};

/// Product rule on S^{n-1}: equispaced base rule on S^1 (order points, exact for
/// trigonometric degree < order), recursive polar reduction with Gauss nodes in
/// the weight (1-t^2)^{(n-3)/2}. Declared exactness degree is order-1.
SphereQuadrature build_sphere_quadrature(int n, int order);

/// Total surface measure of S^{n-1}: omega_{n-1} = 2 pi^{n/2} / Gamma(n/2).
double sphere_surface_area(int n);

/// The reconstruction constant c_n of the matching-parity inversion formula:
/// even n: (-1)^{(n-2)/2} omega_{n-2} pi (n-2)! 2^{2-n},
/// odd  n: (-1)^{(n-1)/2} omega_{n-2} (n-2)! 2^{3-n}.
double reconstruction_constant(int n);

/// Fundamental solution of the n-dimensional Laplacian as a function of |x-y|:
/// (1/2pi) log d for n=2, d^{2-n} / (omega_{n-1} (2-n)) for n > 2.
double fundamental_solution_dist(int n, double dist);

/// G_n(x, y); throws on x == y.
double fundamental_solution(int n, std::span<const double> x, std::span<const double> y);

double factorial(int k);

}  // namespace smean
