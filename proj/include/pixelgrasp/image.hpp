#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace pixelgrasp {

/// Continuous image coordinates. Pixel (col,row) covers [col,col+1)x[row,row+1),
/// so its center sits at (col+0.5, row+0.5).
struct Point2 {
  double u = 0.0;
  double v = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 pixel_center(std::size_t row, std::size_t col) {
  return {static_cast<double>(col) + 0.5, static_cast<double>(row) + 0.5};
}

/// Single-channel row-major float image.
struct Plane {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<float> data;

  Plane() = default;
  Plane(std::size_t r, std::size_t c, float fill = 0.0f) : rows(r), cols(c), data(r * c, fill) {}

  std::size_t size() const { return data.size(); }
  bool empty() const { return data.empty(); }
  float& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  float at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Plane&, const Plane&) = default;
};

/// Row-major byte mask; nonzero = set.
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> data;

  Mask() = default;
  Mask(std::size_t r, std::size_t c, std::uint8_t fill = 0) : rows(r), cols(c), data(r * c, fill) {}

  std::size_t size() const { return data.size(); }
  std::uint8_t& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  std::uint8_t at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : data) n += b != 0;
    return n;
  }

  friend bool operator==(const Mask&, const Mask&) = default;
};

}  // namespace pixelgrasp
