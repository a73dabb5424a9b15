#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/image.hpp"

namespace pixelgrasp::labels {

/// Widths are stored divided by this many pixels.
inline constexpr double kMaxWidthPx = 150.0;

/// Per-pixel grasp planes: quality, angle encoding (cos 2phi, sin 2phi), width / 150.
struct GraspMaps {
  Plane q;
  Plane cos2phi;
  Plane sin2phi;
  Plane w;

  GraspMaps() = default;
  GraspMaps(std::size_t rows, std::size_t cols)
      : q(rows, cols), cos2phi(rows, cols), sin2phi(rows, cols), w(rows, cols) {}

  std::size_t rows() const { return q.rows; }
  std::size_t cols() const { return q.cols; }
  bool empty() const { return q.empty(); }

  std::array<const Plane*, 4> planes() const { return {&q, &cos2phi, &sin2phi, &w}; }
  std::array<Plane*, 4> planes() { return {&q, &cos2phi, &sin2phi, &w}; }

  friend bool operator==(const GraspMaps&, const GraspMaps&) = default;
};

/// Wraps an angle into [-pi/2, pi/2).
double wrap_half_pi(double angle);

/// Angle of the closing axis (perpendicular to jaw edge c0->c1), in [-pi/2, pi/2).
double rect_angle(const io::GraspRectangle& rect);

/// Jaw separation: extent of the rectangle along its closing axis, in pixels.
double rect_width(const io::GraspRectangle& rect);

std::pair<double, double> encode_angle(double phi);
/// Inverse of encode_angle: half the atan2 of the doubled-angle pair, wrapped.
double decode_angle(double cos2phi, double sin2phi);

/// Middle third of the rectangle along the closing axis, full jaw-plate extent.
std::array<Point2, 4> middle_third(const io::GraspRectangle& rect);

/// Pixels whose centre lies inside middle_third(rect).
Mask rect_to_mask(const io::GraspRectangle& rect, std::size_t rows, std::size_t cols);

/// Positive rectangles to label maps; later rectangles overwrite earlier ones.
GraspMaps rasterize(std::span<const io::GraspRectangle> pos_rects, std::size_t rows,
                    std::size_t cols);

/// [4, H, W] in plane order (q, cos2phi, sin2phi, w).
io::FloatArray maps_to_array(const GraspMaps& maps);
GraspMaps array_to_maps(const io::FloatArray& array);

}  // namespace pixelgrasp::labels
