#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ddk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when operands disagree in shape.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Raised for out-of-range or otherwise invalid arguments.
class ValueError : public Error {
public:
    using Error::Error;
};

struct Shape {
    std::size_t width = 0;   // time frames (W)
    std::size_t height = 0;  // frequency bins (H)

    std::size_t size() const noexcept { return width * height; }
    friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

/// Dense W x H real matrix, row-major: entry (i, j) lives at i * H + j.
///
/// Houses clean data, noised states, the prior and restorer outputs. Every
/// public constructor checks W, H >= 1 and finiteness of supplied values.
class MelGrid {
public:
    MelGrid() = default;
    MelGrid(std::size_t width, std::size_t height, double fill = 0.0);
    MelGrid(std::size_t width, std::size_t height, std::vector<double> values);

    static MelGrid zeros(Shape s) { return MelGrid(s.width, s.height, 0.0); }
    static MelGrid constant(Shape s, double c) { return MelGrid(s.width, s.height, c); }

    std::size_t width() const noexcept { return width_; }
    std::size_t height() const noexcept { return height_; }
    Shape shape() const noexcept { return {width_, height_}; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return values_[i * height_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * height_ + j]; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }

    bool all_finite() const noexcept;
    double mean() const noexcept;
    double max_abs() const noexcept;

    MelGrid& operator+=(const MelGrid& other);
    MelGrid& operator-=(const MelGrid& other);
    MelGrid& operator*=(double k) noexcept;

    friend bool operator==(const MelGrid&, const MelGrid&) = default;

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    std::vector<double> values_;
};

MelGrid operator+(MelGrid a, const MelGrid& b);
MelGrid operator-(MelGrid a, const MelGrid& b);
MelGrid operator*(double k, MelGrid a);

/// Elementwise product.
MelGrid hadamard(const MelGrid& a, const MelGrid& b);

/// Largest absolute entrywise difference.
double max_abs_diff(const MelGrid& a, const MelGrid& b);

void require_same_shape(const MelGrid& a, const MelGrid& b, const char* what);

}  // namespace ddk
