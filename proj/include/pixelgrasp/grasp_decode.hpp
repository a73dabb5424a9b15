#pragma once

// From predicted grasp maps to a single grasp in the robot base frame.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "json.hpp"
#include "pixelgrasp/image.hpp"
#include "pixelgrasp/labels.hpp"

namespace pixelgrasp::decode {

/// Grasp in image space. u is the column index, v the row index.
struct ImageGrasp {
  std::size_t u = 0;
  std::size_t v = 0;
  double angle = 0.0;     // radians in [-pi/2, pi/2)
  double width_px = 0.0;  // >= 0
  double quality = 0.0;   // predicted Q clamped to [0, 1]
};

/// Grasp in the robot base frame.
struct GraspPose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double angle = 0.0;  // radians in [-pi/2, pi/2)
  double width = 0.0;  // meters
  double quality = 0.0;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Row-major homogeneous 4x4 transform.
using Mat4 = std::array<double, 16>;

inline constexpr Mat4 kIdentity4{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};

Vec3 transform_point(const Mat4& t, Vec3 p);
Vec3 rotate(const Mat4& t, Vec3 p);
/// Inverse of a rigid transform (transposed rotation, back-rotated translation).
Mat4 invert_rigid(const Mat4& t);

struct CameraModel {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Mat4 cam_to_robot = kIdentity4;

  /// InvalidConfig unless fx, fy > 0 and the rotation block is orthonormal
  /// with determinant +1 (tolerance 1e-9) and the bottom row is (0, 0, 0, 1).
  void validate() const;
  /// True when the optical axis is parallel to the robot z axis.
  bool is_top_down(double tolerance = 1e-6) const;
};

/// Schema {fx, fy, cx, cy, extrinsic: 16 row-major numbers}; validated.
CameraModel camera_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CameraModel& camera);

enum class QSmoothing { None, Mean3x3, Gaussian };

/// Filter applied to Q before peak search. Off by default.
struct DecodeOptions {
  QSmoothing smoothing = QSmoothing::None;
  double sigma = 2.0;  // pixels, Gaussian only
};

/// 3x3 box mean; border pixels average only the neighbours inside the frame.
Plane mean3x3(const Plane& plane);

/// Separable Gaussian with radius ceil(3 sigma); weights are renormalized at
/// the border so a constant plane stays constant.
Plane gaussian_blur(const Plane& plane, double sigma);

/// Q after the filter selected by `options`.
Plane smoothed_quality(const Plane& q, const DecodeOptions& options);

/// Reads the grasp parameters at one pixel of the maps.
ImageGrasp decode_at(const labels::GraspMaps& maps, std::size_t row, std::size_t col);

/// Argmax of Q, ties broken by smallest row-major index. Throws EmptyMaps.
ImageGrasp decode_best(const labels::GraspMaps& maps, const DecodeOptions& options = {});

struct Peak {
  std::size_t row = 0;
  std::size_t col = 0;
  float value = 0.0f;
};

/// 8-neighbourhood local maxima of `q`, highest first; ties by row-major index.
/// On a plateau only the first pixel in row-major order is reported, so the
/// first peak is always the global argmax.
std::vector<Peak> local_maxima(const Plane& q);

/// Candidate grasps in decreasing Q order, at most `limit` of them.
std::vector<ImageGrasp> decode_ranked(const labels::GraspMaps& maps, std::size_t limit,
                                      const DecodeOptions& options = {});

/// Pinhole back-projection. Throws NonPositiveDepth.
Vec3 image_to_camera(double u, double v, double depth, const CameraModel& camera);

/// Moves a camera-frame grasp into the robot frame. The metric width uses
/// similar triangles at `depth`; the angle follows the extrinsic yaw.
GraspPose camera_to_robot(Vec3 point, double angle, double width_px, double depth,
                          double quality, const CameraModel& camera);

/// Full chain for one image grasp using the depth plane at (v, u).
GraspPose image_to_robot(const ImageGrasp& grasp, const Plane& depth, const CameraModel& camera);

/// Image-plane angle of a robot-frame yaw; inverse of the yaw mapping above.
double robot_angle_to_image(double angle, const CameraModel& camera);

/// Binary PPM (P6, maxval 255) through a blue-green-red ramp. Values are
/// clamped to [lo, hi]. Throws DegenerateRange when hi <= lo.
std::vector<std::uint8_t> heatmap_ppm(const Plane& plane, double lo, double hi);

/// Colour of a normalized value t in [0, 1].
std::array<std::uint8_t, 3> heat_color(double t);

nlohmann::json to_json(const GraspPose& pose);
nlohmann::json to_json(const ImageGrasp& grasp);

}  // namespace pixelgrasp::decode
