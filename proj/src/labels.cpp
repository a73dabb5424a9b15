#include "pixelgrasp/labels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pixelgrasp/error.hpp"

namespace pixelgrasp::labels {
namespace {

Point2 lerp(Point2 a, Point2 b, double t) { return {a.u + (b.u - a.u) * t, a.v + (b.v - a.v) * t}; }

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u);
}

void require_nondegenerate(const io::GraspRectangle& rect) {
  const auto& c = rect.corners;
  for (const auto& p : c)
    if (!std::isfinite(p.u) || !std::isfinite(p.v))
      throw Error(ErrorCode::DegenerateRect, "non-finite corner");
  if (c[0] == c[1] || c[1] == c[2])
    throw Error(ErrorCode::DegenerateRect, "zero-length rectangle edge");
}

}  // namespace

double wrap_half_pi(double angle) {
  constexpr double pi = std::numbers::pi;
  double w = angle - pi * std::floor((angle + pi / 2.0) / pi);
  // floor() rounding can land exactly on +pi/2
  if (w >= pi / 2.0) w -= pi;
  if (w < -pi / 2.0) w += pi;
  return w;
}

double rect_angle(const io::GraspRectangle& rect) {
  require_nondegenerate(rect);
  const auto& c = rect.corners;
  const double jaw = std::atan2(c[1].v - c[0].v, c[1].u - c[0].u);
  return wrap_half_pi(jaw + std::numbers::pi / 2.0);
}

double rect_width(const io::GraspRectangle& rect) {
  require_nondegenerate(rect);
  const auto& c = rect.corners;
  const double phi = rect_angle(rect);
  const Point2 m1 = lerp(c[0], c[1], 0.5);
  const Point2 m2 = lerp(c[2], c[3], 0.5);
  return std::abs((m2.u - m1.u) * std::cos(phi) + (m2.v - m1.v) * std::sin(phi));
}

std::pair<double, double> encode_angle(double phi) {
  return {std::cos(2.0 * phi), std::sin(2.0 * phi)};
}

double decode_angle(double cos2phi, double sin2phi) {
  return wrap_half_pi(0.5 * std::atan2(sin2phi, cos2phi));
}

std::array<Point2, 4> middle_third(const io::GraspRectangle& rect) {
  const auto& c = rect.corners;
  return {lerp(c[0], c[3], 1.0 / 3.0), lerp(c[1], c[2], 1.0 / 3.0), lerp(c[1], c[2], 2.0 / 3.0),
          lerp(c[0], c[3], 2.0 / 3.0)};
}

Mask rect_to_mask(const io::GraspRectangle& rect, std::size_t rows, std::size_t cols) {
  require_nondegenerate(rect);
  const auto poly = middle_third(rect);
  double umin = poly[0].u, umax = poly[0].u, vmin = poly[0].v, vmax = poly[0].v;
  for (const auto& p : poly) {
    umin = std::min(umin, p.u);
    umax = std::max(umax, p.u);
    vmin = std::min(vmin, p.v);
    vmax = std::max(vmax, p.v);
  }
  // Orientation of the polygon decides which side of each edge is "inside".
  const double orient = cross(poly[0], poly[1], poly[2]) >= 0.0 ? 1.0 : -1.0;

  Mask mask(rows, cols);
  const auto clamp_index = [](double x, std::size_t n) -> std::size_t {
    if (x < 0.0) return 0;
    return std::min(static_cast<std::size_t>(x), n);
  };
  const std::size_t r0 = clamp_index(std::floor(vmin - 0.5), rows);
  const std::size_t r1 = clamp_index(std::ceil(vmax + 0.5), rows);
  const std::size_t c0 = clamp_index(std::floor(umin - 0.5), cols);
  const std::size_t c1 = clamp_index(std::ceil(umax + 0.5), cols);
  for (std::size_t r = r0; r < r1; ++r) {
    for (std::size_t c = c0; c < c1; ++c) {
      const Point2 p = pixel_center(r, c);
      bool inside = true;
      for (std::size_t k = 0; k < 4 && inside; ++k)
        inside = orient * cross(poly[k], poly[(k + 1) % 4], p) >= 0.0;
      if (inside) mask.at(r, c) = 1;
    }
  }
  return mask;
}

GraspMaps rasterize(std::span<const io::GraspRectangle> pos_rects, std::size_t rows,
                    std::size_t cols) {
  GraspMaps maps(rows, cols);
  for (const auto& rect : pos_rects) {
    const Mask mask = rect_to_mask(rect, rows, cols);
    const auto [c2, s2] = encode_angle(rect_angle(rect));
    const auto w = static_cast<float>(std::clamp(rect_width(rect) / kMaxWidthPx, 0.0, 1.0));
    for (std::size_t i = 0; i < mask.size(); ++i) {
      if (!mask.data[i]) continue;
      maps.q.data[i] = 1.0f;
      maps.cos2phi.data[i] = static_cast<float>(c2);
      maps.sin2phi.data[i] = static_cast<float>(s2);
      maps.w.data[i] = w;
    }
  }
  return maps;
}

io::FloatArray maps_to_array(const GraspMaps& maps) {
  io::FloatArray out;
  out.dims = {4, static_cast<std::uint32_t>(maps.rows()), static_cast<std::uint32_t>(maps.cols())};
  out.values.reserve(4 * maps.q.size());
  for (const Plane* p : maps.planes()) out.values.insert(out.values.end(), p->data.begin(), p->data.end());
  return out;
}

GraspMaps array_to_maps(const io::FloatArray& array) {
  if (array.dims.size() != 3 || array.dims[0] != 4)
    throw Error(ErrorCode::InvalidShape, "label tensor must be [4, H, W]");
  GraspMaps maps(array.dims[1], array.dims[2]);
  const std::size_t n = maps.q.size();
  auto planes = maps.planes();
  for (std::size_t k = 0; k < 4; ++k)
    std::copy_n(array.values.begin() + static_cast<std::ptrdiff_t>(k * n), n, planes[k]->data.begin());
  return maps;
}

}  // namespace pixelgrasp::labels
