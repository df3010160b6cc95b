#pragma once

#include "ddk/grid.hpp"

namespace ddk {

/// Orthonormal 2-D DCT-II coefficients of a MelGrid; entry (i, j) belongs to
/// the frequency pair (i, j), i along the width axis and j along the height axis.
struct FrequencySpectrum {
    MelGrid coefficients;

    Shape shape() const noexcept { return coefficients.shape(); }
    double operator()(std::size_t i, std::size_t j) const { return coefficients(i, j); }
    double& operator()(std::size_t i, std::size_t j) { return coefficients(i, j); }
};

/// Eigenvalues of the discrete heat operator on a W x H grid:
/// lambda(i, j) = -pi^2 (i^2 / W^2 + j^2 / H^2). Nonpositive, zero only at (0, 0).
struct HeatEigenvalues {
    MelGrid lambda;

    double operator()(std::size_t i, std::size_t j) const { return lambda(i, j); }
};

/// n x n orthonormal DCT-II matrix C with C[k][m] = a_k cos(pi (2m + 1) k / 2n),
/// a_0 = sqrt(1/n), a_k = sqrt(2/n). Row-major, n * n entries.
std::vector<double> dct_basis(std::size_t n);

FrequencySpectrum dct2_forward(const MelGrid& x);
MelGrid dct2_inverse(const FrequencySpectrum& s);

HeatEigenvalues heat_eigenvalues(std::size_t width, std::size_t height);

/// Heat-equation blur: inverse(exp(lambda * time) * forward(x)). Linear in x and
/// preserves the spatial mean. For large times the non-DC factors underflow to 0.
MelGrid blur(const MelGrid& x, double time);

}  // namespace ddk
