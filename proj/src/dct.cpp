#include "ddk/dct.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace ddk {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstGridMap = Eigen::Map<const RowMatrix>;
using GridMap = Eigen::Map<RowMatrix>;

RowMatrix basis_matrix(std::size_t n) {
    const auto flat = dct_basis(n);
    return Eigen::Map<const RowMatrix>(flat.data(), static_cast<Eigen::Index>(n),
                                       static_cast<Eigen::Index>(n));
}

}  // namespace

std::vector<double> dct_basis(std::size_t n) {
    if (n == 0) throw ValueError("dct_basis: size must be >= 1");
    std::vector<double> c(n * n);
    const double nn = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double a = k == 0 ? std::sqrt(1.0 / nn) : std::sqrt(2.0 / nn);
        for (std::size_t m = 0; m < n; ++m) {
            c[k * n + m] = a * std::cos(std::numbers::pi * (2.0 * m + 1.0) * k / (2.0 * nn));
        }
    }
    return c;
}

FrequencySpectrum dct2_forward(const MelGrid& x) {
    const auto w = static_cast<Eigen::Index>(x.width());
    const auto h = static_cast<Eigen::Index>(x.height());
    const RowMatrix cw = basis_matrix(x.width());
    const RowMatrix ch = basis_matrix(x.height());
    FrequencySpectrum s{MelGrid::zeros(x.shape())};
    GridMap(s.coefficients.data(), w, h).noalias() = cw * ConstGridMap(x.data(), w, h) * ch.transpose();
    return s;
}

MelGrid dct2_inverse(const FrequencySpectrum& s) {
    const auto& c = s.coefficients;
    const auto w = static_cast<Eigen::Index>(c.width());
    const auto h = static_cast<Eigen::Index>(c.height());
    const RowMatrix cw = basis_matrix(c.width());
    const RowMatrix ch = basis_matrix(c.height());
    MelGrid x = MelGrid::zeros(c.shape());
    GridMap(x.data(), w, h).noalias() = cw.transpose() * ConstGridMap(c.data(), w, h) * ch;
    return x;
}

HeatEigenvalues heat_eigenvalues(std::size_t width, std::size_t height) {
    HeatEigenvalues ev{MelGrid(width, height, 0.0)};
    const double pi2 = std::numbers::pi * std::numbers::pi;
    const double w2 = static_cast<double>(width) * static_cast<double>(width);
    const double h2 = static_cast<double>(height) * static_cast<double>(height);
    for (std::size_t i = 0; i < width; ++i) {
        for (std::size_t j = 0; j < height; ++j) {
            const double fi = static_cast<double>(i);
            const double fj = static_cast<double>(j);
            ev.lambda(i, j) = -pi2 * (fi * fi / w2 + fj * fj / h2);
        }
    }
    return ev;
}

MelGrid blur(const MelGrid& x, double time) {
    if (!(time >= 0.0) || !std::isfinite(time)) {
        throw ValueError("blur: time must be finite and >= 0");
    }
    FrequencySpectrum s = dct2_forward(x);
    const HeatEigenvalues ev = heat_eigenvalues(x.width(), x.height());
    auto coef = s.coefficients.values();
    auto lam = ev.lambda.values();
    for (std::size_t k = 0; k < coef.size(); ++k) coef[k] *= std::exp(lam[k] * time);
    return dct2_inverse(s);
}

}  // namespace ddk
