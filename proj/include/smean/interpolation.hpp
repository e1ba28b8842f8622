#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace smean {

/// Cubic Lagrange interpolation on a uniform grid x_i = x0 + i*dx with the
/// 4-point window nearest to x (shifted at the ends). Values outside
/// [x0, x0 + (K-1) dx] map to `outside`.
inline double cubic_interp_uniform(std::span<const double> values, double x0, double dx,
                                   double x, double outside = 0.0) {
    const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(values.size());
    const double t = (x - x0) / dx;
    if (t < 0.0 || t > static_cast<double>(count - 1)) return outside;
    if (count < 4) {
        // degenerate grids: fall back to linear/nearest
        if (count == 1) return values[0];
        std::ptrdiff_t i = static_cast<std::ptrdiff_t>(t);
        if (i >= count - 1) i = count - 2;
        const double u = t - static_cast<double>(i);
        return (1.0 - u) * values[i] + u * values[i + 1];
    }
    std::ptrdiff_t i0 = static_cast<std::ptrdiff_t>(std::floor(t)) - 1;
    if (i0 < 0) i0 = 0;
    if (i0 > count - 4) i0 = count - 4;
    const double u = t - static_cast<double>(i0);
    const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
    const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
    const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
    const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
    return l0 * values[i0] + l1 * values[i0 + 1] + l2 * values[i0 + 2] + l3 * values[i0 + 3];
}

/// Cubic Lagrange interpolation through four arbitrary distinct nodes.
inline double cubic_interp_points(const double xs[4], const double ys[4], double x) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        double li = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            li *= (x - xs[j]) / (xs[i] - xs[j]);
        }
        acc += li * ys[i];
    }
    return acc;
}

}  // namespace smean
