#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pixelgrasp/error.hpp"

namespace pixelgrasp::nn {

/// NCHW extents. Lower-rank data uses leading 1s.
struct Shape {
  std::size_t n = 1;
  std::size_t c = 1;
  std::size_t h = 1;
  std::size_t w = 1;

  std::size_t numel() const { return n * c * h * w; }
  std::size_t spatial() const { return h * w; }
  std::size_t image_size() const { return c * h * w; }
  std::string to_string() const {
    return "[" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
           std::to_string(w) + "]";
  }

  friend bool operator==(const Shape&, const Shape&) = default;
};

template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() : shape_{0, 0, 0, 0} {}
  explicit Tensor(Shape shape, T fill = T{0}) : shape_(shape), values_(shape.numel(), fill) {}
  Tensor(Shape shape, std::vector<T> values) : shape_(shape), values_(std::move(values)) {
    if (values_.size() != shape_.numel())
      throw Error(ErrorCode::ShapeMismatch,
                  "value count " + std::to_string(values_.size()) + " != " + shape_.to_string());
  }

  static Tensor scalar(T v) { return Tensor(Shape{1, 1, 1, 1}, std::vector<T>{v}); }

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }
  std::vector<T>& storage() { return values_; }
  const std::vector<T>& storage() const { return values_; }

  T& operator[](std::size_t i) { return values_[i]; }
  T operator[](std::size_t i) const { return values_[i]; }

  T& at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return values_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
  }
  T at(std::size_t n, std::size_t c, std::size_t h, std::size_t w) const {
    return values_[((n * shape_.c + c) * shape_.h + h) * shape_.w + w];
  }

  /// Single element of a 1x1x1x1 tensor.
  T item() const {
    if (values_.size() != 1) throw Error(ErrorCode::NonScalarOutput, "tensor is not a scalar");
    return values_[0];
  }

  void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

  template <typename U>
  Tensor<U> cast() const {
    std::vector<U> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(),
                   [](T v) { return static_cast<U>(v); });
    return Tensor<U>(shape_, std::move(out));
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<T> values_;
};

}  // namespace pixelgrasp::nn
