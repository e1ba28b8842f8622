#pragma once

#include <vector>

#include "smean/forward.hpp"
#include "smean/reconstruction.hpp"

namespace smean_tests {

/// Reference reconstruction for spherical acquisition (n = 3, all semi-axes
/// equal to rho), written directly from the classical spherical-centers
/// back-projection formula
///     f(x) = -1/(2 pi rho) Delta_x  int_{|p|=rho} (r Mf)(p, |x-p|) dS(p)
/// with its own interpolation and Laplacian code. Shares only the input data
/// and the grid definition with the production pipeline, so node-wise
/// agreement validates constants, indexing and operator order independently.
std::vector<double> spherical_reference_reconstruct(const smean::MeanData& data,
                                                    const smean::VolumeGrid& grid);

}  // namespace smean_tests
