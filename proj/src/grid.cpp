#include "ddk/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddk {

std::string to_string(const Shape& s) {
    return std::to_string(s.width) + "x" + std::to_string(s.height);
}

MelGrid::MelGrid(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
    if (width == 0 || height == 0) {
        throw ValueError("MelGrid dimensions must be >= 1, got " + to_string({width, height}));
    }
    if (!std::isfinite(fill)) {
        throw ValueError("MelGrid fill value must be finite");
    }
}

MelGrid::MelGrid(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    if (width == 0 || height == 0) {
        throw ValueError("MelGrid dimensions must be >= 1, got " + to_string({width, height}));
    }
    if (values_.size() != width * height) {
        throw ShapeError("MelGrid " + to_string({width, height}) + " needs " +
                         std::to_string(width * height) + " values, got " +
                         std::to_string(values_.size()));
    }
    if (!all_finite()) {
        throw ValueError("MelGrid values must be finite");
    }
}

bool MelGrid::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double MelGrid::mean() const noexcept {
    if (values_.empty()) return 0.0;
    return std::accumulate(values_.begin(), values_.end(), 0.0) /
           static_cast<double>(values_.size());
}

double MelGrid::max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

MelGrid& MelGrid::operator+=(const MelGrid& other) {
    require_same_shape(*this, other, "operator+=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

MelGrid& MelGrid::operator-=(const MelGrid& other) {
    require_same_shape(*this, other, "operator-=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

MelGrid& MelGrid::operator*=(double k) noexcept {
    for (double& v : values_) v *= k;
    return *this;
}

MelGrid operator+(MelGrid a, const MelGrid& b) { return a += b; }
MelGrid operator-(MelGrid a, const MelGrid& b) { return a -= b; }
MelGrid operator*(double k, MelGrid a) { return a *= k; }

MelGrid hadamard(const MelGrid& a, const MelGrid& b) {
    require_same_shape(a, b, "hadamard");
    MelGrid out = a;
    auto o = out.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < o.size(); ++k) o[k] *= bv[k];
    return out;
}

double max_abs_diff(const MelGrid& a, const MelGrid& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    auto av = a.values();
    auto bv = b.values();
    for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
    return m;
}

void require_same_shape(const MelGrid& a, const MelGrid& b, const char* what) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(what) + ": shape mismatch " + to_string(a.shape()) +
                         " vs " + to_string(b.shape()));
    }
}

}  // namespace ddk
