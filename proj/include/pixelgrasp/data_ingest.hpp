#pragma once

// Cornell-style dataset parsing and the UGT1 tensor file format.

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pixelgrasp/image.hpp"

namespace pixelgrasp::io {

struct IndexedPoint {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  std::size_t pixel_index = 0;  // row * width + col
};

struct PointCloud {
  std::vector<IndexedPoint> points;
  // WIDTH / HEIGHT exactly as declared by the header.
  std::size_t declared_width = 0;
  std::size_t declared_height = 0;
};

/// Parse an ASCII point cloud. FIELDS must include x, y, z and index; other
/// fields are skipped. Any data line that fails to parse rejects the file.
PointCloud parse_pcd(std::string_view text);

/// Oriented grasp rectangle. Edge c0->c1 is one jaw plate, c2->c3 the other.
struct GraspRectangle {
  std::array<Point2, 4> corners;

  Point2 center() const;
  /// False on NaN corners or when opposite edges differ by more than `tolerance_px`.
  bool well_formed(double tolerance_px = 5.0) const;
};

struct RectangleParseResult {
  std::vector<GraspRectangle> rects;
  std::size_t dropped_groups = 0;  // groups containing a NaN coordinate
};

/// Groups of four "u v" lines. Blank lines are ignored.
RectangleParseResult parse_rectangles(std::string_view text);

struct DepthImage {
  Plane depth;
  Mask invalid;  // 1 where no measurement
};

/// Nearest surface wins when two points share a pixel.
DepthImage project_to_depth(std::span<const IndexedPoint> points, std::size_t height,
                            std::size_t width);

/// H x W x 3 colour image, planes R, G, B with values in [0, 255].
struct RgbImage {
  std::array<Plane, 3> channels;

  std::size_t rows() const { return channels[0].rows; }
  std::size_t cols() const { return channels[0].cols; }
};

struct RgbdSample {
  std::string id;
  RgbImage rgb;
  Plane depth;
  Mask depth_invalid;
  std::vector<GraspRectangle> pos_rects;
  std::vector<GraspRectangle> neg_rects;

  std::size_t rows() const { return depth.rows; }
  std::size_t cols() const { return depth.cols; }
};

// ---------------------------------------------------------------------------
// TensorFile: "UGT1" | ndim u32 LE | dims u32 LE x ndim | f32 LE payload

inline constexpr std::array<char, 4> kTensorMagic = {'U', 'G', 'T', '1'};
inline constexpr std::size_t kMaxTensorRank = 4;

struct FloatArray {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;

  std::size_t element_count() const;
  friend bool operator==(const FloatArray&, const FloatArray&) = default;
};

std::vector<std::uint8_t> write_tensor(const FloatArray& tensor);
FloatArray read_tensor(std::span<const std::uint8_t> bytes);

/// Reads a tensor from the front of `bytes`, returning the number of bytes consumed.
std::size_t read_tensor_prefix(std::span<const std::uint8_t> bytes, FloatArray& out);

FloatArray plane_to_array(const Plane& plane);
Plane array_to_plane(const FloatArray& array);

// File helpers (IoError on failure).
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

// Little-endian helpers shared by the binary formats.
void append_u32(std::vector<std::uint8_t>& out, std::uint32_t value);
std::uint32_t load_u32(const std::uint8_t* p);

}  // namespace pixelgrasp::io
