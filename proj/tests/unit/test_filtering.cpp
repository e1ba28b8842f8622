#include <doctest.h>

#include <cmath>
#include <vector>

#include "smean/filtering.hpp"

using namespace smean;

namespace {

/// MeanData carrier for synthetic radial profiles g(r).
MeanData synthetic(int n, int samples, double (*g)(double)) {
    std::vector<double> axes(n, 1.0);
    const Ellipsoid e(n, axes);
    SphereQuadrature dirs;
    dirs.n = n;
    dirs.exactness_degree = 0;
    dirs.nodes.assign(n, 0.0);
    dirs.nodes[0] = 1.0;
    dirs.weights = {1.0};
    const RadialGrid radii = RadialGrid::cover(e, samples);
    MeanData data{e, dirs, radii, {}};
    data.values.resize(samples);
    for (int k = 0; k < samples; ++k) data.values[k] = g(radii.r(k));
    return data;
}

}  // namespace

TEST_SUITE("filtering") {

TEST_CASE("order zero multiplies by r^{n-2} exactly") {
    const MeanData d2 = synthetic(2, 32, [](double r) { return std::sin(r); });
    const FilteredData q2 = radial_filter(d2, 0);
    CHECK(q2.edge_margin == 0);
    for (int k = 0; k < 32; ++k) CHECK(q2.at(0, k) == d2.at(0, k));

    const MeanData d3 = synthetic(3, 32, [](double r) { return std::sin(r); });
    const FilteredData q3 = radial_filter(d3, 0);
    for (int k = 0; k < 32; ++k)
        CHECK(q3.at(0, k) == d3.radii.r(k) * d3.at(0, k));
}

TEST_CASE("monomial in the squared radius differentiates exactly") {
    // n=4, m=2: r^{n-2} g = r^4 = rho^2 and d^2/drho^2 rho^2 = 2
    const MeanData data = synthetic(4, 128, [](double r) { return r * r; });
    const FilteredData q = radial_filter(data, 2);
    for (int k = q.edge_margin; k < data.radii.count - q.edge_margin; ++k)
        CHECK(q.at(0, k) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("cubic in the squared radius differentiates exactly") {
    // r^2 g = rho^3: second derivative 6 rho, exact for the cubic resampling
    const MeanData data = synthetic(4, 128, [](double r) { return std::pow(r, 4); });
    const FilteredData q = radial_filter(data, 2);
    for (int k = q.edge_margin; k < data.radii.count - q.edge_margin; ++k) {
        const double rho = data.radii.r(k) * data.radii.r(k);
        CHECK(q.at(0, k) == doctest::Approx(6.0 * rho).epsilon(1e-8));
    }
}

TEST_CASE("linearity in the data") {
    const MeanData a = synthetic(4, 96, [](double r) { return std::exp(-r * r); });
    const MeanData b = synthetic(4, 96, [](double r) { return r * std::sin(r); });
    MeanData combo = a;
    for (std::size_t i = 0; i < combo.values.size(); ++i)
        combo.values[i] = 2.0 * a.values[i] - 3.0 * b.values[i];
    const FilteredData fa = radial_filter(a, 2);
    const FilteredData fb = radial_filter(b, 2);
    const FilteredData fc = radial_filter(combo, 2);
    double scale = 0.0;
    for (std::size_t i = 0; i < fc.values.size(); ++i)
        scale = std::max(scale, std::abs(fc.values[i]));
    for (std::size_t i = 0; i < fc.values.size(); ++i)
        CHECK(fc.values[i] ==
              doctest::Approx(2.0 * fa.values[i] - 3.0 * fb.values[i]).epsilon(1e-12).scale(scale));
}

TEST_CASE("second-order convergence on a smooth profile") {
    // r^2 g = rho^2 e^{-rho}, so D^2 gives (rho^2 - 4 rho + 2) e^{-rho}
    const auto exact = [](double rho) { return (rho * rho - 4.0 * rho + 2.0) * std::exp(-rho); };
    const auto profile = [](double r) { return r * r * std::exp(-r * r); };
    double errors[2];
    int idx = 0;
    for (int samples : {128, 256}) {
        const MeanData data = synthetic(4, samples, profile);
        const FilteredData q = radial_filter(data, 2);
        double worst = 0.0;
        for (int k = q.edge_margin; k < samples - q.edge_margin; ++k) {
            const double rho = data.radii.r(k) * data.radii.r(k);
            worst = std::max(worst, std::abs(q.at(0, k) - exact(rho)));
        }
        errors[idx++] = worst;
    }
    CHECK(errors[0] / errors[1] > 3.0);  // order >= 2
}

TEST_CASE("rejects grids too coarse for the stencil") {
    const MeanData data = synthetic(4, 8, [](double r) { return r; });
    CHECK_THROWS_AS(radial_filter(data, 20), std::invalid_argument);
    CHECK_THROWS_AS(radial_filter(data, -1), std::invalid_argument);
}

}  // TEST_SUITE
