#include "pixelgrasp/grasp_decode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/error.hpp"

namespace pixelgrasp::decode {

Vec3 transform_point(const Mat4& t, Vec3 p) {
  return {t[0] * p.x + t[1] * p.y + t[2] * p.z + t[3],
          t[4] * p.x + t[5] * p.y + t[6] * p.z + t[7],
          t[8] * p.x + t[9] * p.y + t[10] * p.z + t[11]};
}

Vec3 rotate(const Mat4& t, Vec3 p) {
  return {t[0] * p.x + t[1] * p.y + t[2] * p.z, t[4] * p.x + t[5] * p.y + t[6] * p.z,
          t[8] * p.x + t[9] * p.y + t[10] * p.z};
}

Mat4 invert_rigid(const Mat4& t) {
  Mat4 inv{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) inv[r * 4 + c] = t[c * 4 + r];
  for (int r = 0; r < 3; ++r)
    inv[r * 4 + 3] = -(inv[r * 4] * t[3] + inv[r * 4 + 1] * t[7] + inv[r * 4 + 2] * t[11]);
  inv[15] = 1.0;
  return inv;
}

void CameraModel::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0))
    throw Error(ErrorCode::InvalidConfig, "camera focal lengths must be positive");
  for (double v : cam_to_robot)
    if (!std::isfinite(v)) throw Error(ErrorCode::InvalidConfig, "camera extrinsic is not finite");
  if (!std::isfinite(cx) || !std::isfinite(cy))
    throw Error(ErrorCode::InvalidConfig, "camera principal point is not finite");
  const auto& m = cam_to_robot;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += m[k * 4 + i] * m[k * 4 + j];
      if (std::abs(dot - (i == j ? 1.0 : 0.0)) > 1e-9)
        throw Error(ErrorCode::InvalidConfig, "camera extrinsic rotation is not orthonormal");
    }
  const double det = m[0] * (m[5] * m[10] - m[6] * m[9]) - m[1] * (m[4] * m[10] - m[6] * m[8]) +
                     m[2] * (m[4] * m[9] - m[5] * m[8]);
  if (std::abs(det - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidConfig, "camera extrinsic rotation must have determinant +1");
  if (m[12] != 0.0 || m[13] != 0.0 || m[14] != 0.0 || m[15] != 1.0)
    throw Error(ErrorCode::InvalidConfig, "camera extrinsic bottom row must be 0 0 0 1");
}

bool CameraModel::is_top_down(double tolerance) const {
  // Third column of the rotation is the optical axis in robot coordinates.
  return std::abs(cam_to_robot[2]) <= tolerance && std::abs(cam_to_robot[6]) <= tolerance;
}

CameraModel camera_from_json(const nlohmann::json& j) {
  CameraModel c;
  std::vector<double> extrinsic;
  cfg::read_object(j, "camera",
                   {{"fx", cfg::into(c.fx)},
                    {"fy", cfg::into(c.fy)},
                    {"cx", cfg::into(c.cx)},
                    {"cy", cfg::into(c.cy)},
                    {"extrinsic", cfg::into(extrinsic)}});
  if (j.contains("extrinsic")) {
    if (extrinsic.size() != 16)
      throw Error(ErrorCode::InvalidConfig, "camera.extrinsic must hold 16 numbers, got " +
                                                std::to_string(extrinsic.size()));
    std::copy(extrinsic.begin(), extrinsic.end(), c.cam_to_robot.begin());
  }
  c.validate();
  return c;
}

nlohmann::json to_json(const CameraModel& c) {
  return {{"fx", c.fx},
          {"fy", c.fy},
          {"cx", c.cx},
          {"cy", c.cy},
          {"extrinsic", std::vector<double>(c.cam_to_robot.begin(), c.cam_to_robot.end())}};
}

Plane mean3x3(const Plane& plane) {
  Plane out(plane.rows, plane.cols);
  for (std::size_t r = 0; r < plane.rows; ++r)
    for (std::size_t c = 0; c < plane.cols; ++c) {
      double sum = 0.0;
      int n = 0;
      for (std::size_t rr = r > 0 ? r - 1 : 0; rr <= std::min(r + 1, plane.rows - 1); ++rr)
        for (std::size_t cc = c > 0 ? c - 1 : 0; cc <= std::min(c + 1, plane.cols - 1); ++cc) {
          sum += plane.at(rr, cc);
          ++n;
        }
      out.at(r, c) = static_cast<float>(sum / n);
    }
  return out;
}

Plane gaussian_blur(const Plane& plane, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorCode::InvalidConfig, "smoothing sigma must be positive");
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  for (std::ptrdiff_t i = -radius; i <= radius; ++i)
    kernel[static_cast<std::size_t>(i + radius)] =
        std::exp(-0.5 * static_cast<double>(i * i) / (sigma * sigma));

  const auto rows = static_cast<std::ptrdiff_t>(plane.rows);
  const auto cols = static_cast<std::ptrdiff_t>(plane.cols);
  auto pass = [&](const std::vector<double>& src, bool along_rows) {
    std::vector<double> dst(src.size());
    for (std::ptrdiff_t r = 0; r < rows; ++r)
      for (std::ptrdiff_t c = 0; c < cols; ++c) {
        double sum = 0.0, weight = 0.0;
        for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
          const std::ptrdiff_t rr = along_rows ? r : r + k, cc = along_rows ? c + k : c;
          if (rr < 0 || cc < 0 || rr >= rows || cc >= cols) continue;
          const double w = kernel[static_cast<std::size_t>(k + radius)];
          sum += w * src[static_cast<std::size_t>(rr * cols + cc)];
          weight += w;
        }
        dst[static_cast<std::size_t>(r * cols + c)] = sum / weight;
      }
    return dst;
  };
  const auto blurred = pass(pass(std::vector<double>(plane.data.begin(), plane.data.end()), true),
                            false);
  Plane out(plane.rows, plane.cols);
  std::transform(blurred.begin(), blurred.end(), out.data.begin(),
                 [](double v) { return static_cast<float>(v); });
  return out;
}

Plane smoothed_quality(const Plane& q, const DecodeOptions& options) {
  switch (options.smoothing) {
    case QSmoothing::Mean3x3: return mean3x3(q);
    case QSmoothing::Gaussian: return gaussian_blur(q, options.sigma);
    case QSmoothing::None: break;
  }
  return q;
}

ImageGrasp decode_at(const labels::GraspMaps& maps, std::size_t row, std::size_t col) {
  ImageGrasp g;
  g.u = col;
  g.v = row;
  g.angle = labels::decode_angle(maps.cos2phi.at(row, col), maps.sin2phi.at(row, col));
  g.width_px = std::max(0.0, labels::kMaxWidthPx * static_cast<double>(maps.w.at(row, col)));
  g.quality = std::clamp(static_cast<double>(maps.q.at(row, col)), 0.0, 1.0);
  return g;
}

namespace {

void require_nonempty(const labels::GraspMaps& maps) {
  if (maps.empty()) throw Error(ErrorCode::EmptyMaps, "grasp maps are empty");
}

}  // namespace

ImageGrasp decode_best(const labels::GraspMaps& maps, const DecodeOptions& options) {
  require_nonempty(maps);
  const Plane q = smoothed_quality(maps.q, options);
  // max_element returns the first maximum, i.e. the smallest row-major index.
  const auto best = std::max_element(q.data.begin(), q.data.end()) - q.data.begin();
  const auto idx = static_cast<std::size_t>(best);
  return decode_at(maps, idx / q.cols, idx % q.cols);
}

std::vector<Peak> local_maxima(const Plane& q) {
  std::vector<Peak> peaks;
  for (std::size_t r = 0; r < q.rows; ++r)
    for (std::size_t c = 0; c < q.cols; ++c) {
      const float v = q.at(r, c);
      bool peak = true;
      for (int dr = -1; dr <= 1 && peak; ++dr)
        for (int dc = -1; dc <= 1 && peak; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(q.rows) ||
              cc >= static_cast<std::ptrdiff_t>(q.cols))
            continue;
          const float n = q.at(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
          const bool earlier = dr < 0 || (dr == 0 && dc < 0);
          if (earlier ? n >= v : n > v) peak = false;
        }
      if (peak) peaks.push_back({r, c, v});
    }
  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const Peak& a, const Peak& b) { return a.value > b.value; });
  return peaks;
}

std::vector<ImageGrasp> decode_ranked(const labels::GraspMaps& maps, std::size_t limit,
                                      const DecodeOptions& options) {
  require_nonempty(maps);
  const auto peaks = local_maxima(smoothed_quality(maps.q, options));
  std::vector<ImageGrasp> out;
  for (std::size_t i = 0; i < std::min(limit, peaks.size()); ++i)
    out.push_back(decode_at(maps, peaks[i].row, peaks[i].col));
  return out;
}

Vec3 image_to_camera(double u, double v, double depth, const CameraModel& camera) {
  if (!(depth > 0.0))
    throw Error(ErrorCode::NonPositiveDepth, "depth " + std::to_string(depth) + " at (" +
                                                 std::to_string(u) + ", " + std::to_string(v) + ")");
  return {(u - camera.cx) * depth / camera.fx, (v - camera.cy) * depth / camera.fy, depth};
}

GraspPose camera_to_robot(Vec3 point, double angle, double width_px, double depth,
                          double quality, const CameraModel& camera) {
  const Vec3 p = transform_point(camera.cam_to_robot, point);
  // Image direction (cos, sin) per pixel, expressed as a camera-frame direction.
  const Vec3 axis = rotate(camera.cam_to_robot,
                           {std::cos(angle) / camera.fx, std::sin(angle) / camera.fy, 0.0});
  GraspPose g;
  g.x = p.x;
  g.y = p.y;
  g.z = p.z;
  g.angle = labels::wrap_half_pi(std::atan2(axis.y, axis.x));
  g.width = width_px * depth / camera.fx;
  g.quality = quality;
  return g;
}

double robot_angle_to_image(double angle, const CameraModel& camera) {
  const Vec3 d = rotate(invert_rigid(camera.cam_to_robot), {std::cos(angle), std::sin(angle), 0.0});
  return labels::wrap_half_pi(std::atan2(d.y * camera.fy, d.x * camera.fx));
}

GraspPose image_to_robot(const ImageGrasp& grasp, const Plane& depth, const CameraModel& camera) {
  if (grasp.v >= depth.rows || grasp.u >= depth.cols)
    throw Error(ErrorCode::ShapeMismatch, "grasp pixel lies outside the depth plane");
  const double d = depth.at(grasp.v, grasp.u);
  const Vec3 cam = image_to_camera(static_cast<double>(grasp.u), static_cast<double>(grasp.v), d,
                                   camera);
  return camera_to_robot(cam, grasp.angle, grasp.width_px, d, grasp.quality, camera);
}

std::array<std::uint8_t, 3> heat_color(double t) {
  t = std::isnan(t) ? 0.0 : std::clamp(t, 0.0, 1.0);
  auto lerp = [](double a, double b, double s) {
    return static_cast<std::uint8_t>(std::lround(a + (b - a) * s));
  };
  if (t <= 0.5) {
    const double s = t / 0.5;
    return {0, lerp(0, 255, s), lerp(128, 0, s)};
  }
  const double s = (t - 0.5) / 0.5;
  return {lerp(0, 255, s), lerp(255, 0, s), 0};
}

std::vector<std::uint8_t> heatmap_ppm(const Plane& plane, double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorCode::DegenerateRange, "heatmap range needs hi > lo");
  const std::string header =
      "P6\n" + std::to_string(plane.cols) + " " + std::to_string(plane.rows) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + plane.size() * 3);
  for (float v : plane.data) {
    const auto rgb = heat_color((static_cast<double>(v) - lo) / (hi - lo));
    out.insert(out.end(), rgb.begin(), rgb.end());
  }
  return out;
}

nlohmann::json to_json(const GraspPose& p) {
  return {{"x", p.x},         {"y", p.y},         {"z", p.z},
          {"angle", p.angle}, {"width", p.width}, {"quality", p.quality}};
}

nlohmann::json to_json(const ImageGrasp& g) {
  return {{"u", g.u},
          {"v", g.v},
          {"angle", g.angle},
          {"width_px", g.width_px},
          {"quality", g.quality}};
}

}  // namespace pixelgrasp::decode
