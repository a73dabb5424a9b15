#include "pixelgrasp/data_ingest.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>

#include "pixelgrasp/error.hpp"

namespace pixelgrasp::io {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

// Calls fn(line, 1-based line number) for every line, '\r' kept for split_tokens to drop.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    if (!fn(text.substr(start, end - start), line_no)) return;
    start = end + 1;
  }
}

std::optional<double> parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

std::optional<std::size_t> parse_count(std::string_view token) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

double distance(Point2 a, Point2 b) { return std::hypot(a.u - b.u, a.v - b.v); }

}  // namespace

// ---------------------------------------------------------------------------

PointCloud parse_pcd(std::string_view text) {
  std::vector<std::string> fields;
  std::optional<std::size_t> declared_points;
  PointCloud cloud;
  bool in_data = false;
  int x_col = -1, y_col = -1, z_col = -1, index_col = -1;

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = split_tokens(line);
    if (tokens.empty()) return true;

    if (!in_data) {
      const std::string_view tag = tokens[0];
      if (tag.starts_with('#')) return true;
      if (tag == "FIELDS") {
        for (std::size_t i = 1; i < tokens.size(); ++i) fields.emplace_back(tokens[i]);
      } else if (tag == "WIDTH" && tokens.size() > 1) {
        cloud.declared_width = parse_count(tokens[1]).value_or(0);
      } else if (tag == "HEIGHT" && tokens.size() > 1) {
        cloud.declared_height = parse_count(tokens[1]).value_or(0);
      } else if (tag == "POINTS") {
        if (tokens.size() < 2 || !parse_count(tokens[1]))
          throw Error(ErrorCode::MalformedLine, "bad POINTS value", line_no);
        declared_points = parse_count(tokens[1]);
      } else if (tag == "DATA") {
        if (tokens.size() < 2 || tokens[1] != "ascii")
          throw Error(ErrorCode::MalformedLine, "only DATA ascii is supported", line_no);
        for (std::size_t i = 0; i < fields.size(); ++i) {
          if (fields[i] == "x") x_col = static_cast<int>(i);
          if (fields[i] == "y") y_col = static_cast<int>(i);
          if (fields[i] == "z") z_col = static_cast<int>(i);
          if (fields[i] == "index") index_col = static_cast<int>(i);
        }
        if (x_col < 0 || y_col < 0 || z_col < 0 || index_col < 0)
          throw Error(ErrorCode::MissingHeaderField, "FIELDS must declare x, y, z and index");
        if (!declared_points) throw Error(ErrorCode::MissingHeaderField, "POINTS not declared");
        cloud.points.reserve(std::min<std::size_t>(*declared_points, 1u << 22));
        in_data = true;
      }
      // VERSION, SIZE, TYPE, COUNT, VIEWPOINT carry nothing needed here.
      return true;
    }

    if (tokens.size() != fields.size())
      throw Error(ErrorCode::MalformedLine, "expected " + std::to_string(fields.size()) + " values",
                  line_no);
    auto x = parse_double(tokens[x_col]);
    auto y = parse_double(tokens[y_col]);
    auto z = parse_double(tokens[z_col]);
    auto idx = parse_double(tokens[index_col]);
    if (!x || !y || !z || !idx || !std::isfinite(*x) || !std::isfinite(*y) || !std::isfinite(*z))
      throw Error(ErrorCode::MalformedLine, "non-numeric or non-finite value", line_no);
    if (!(*idx >= 0.0) || *idx != std::floor(*idx) || *idx > 9.0e15)
      throw Error(ErrorCode::MalformedLine, "index must be a non-negative integer", line_no);
    cloud.points.push_back({*x, *y, *z, static_cast<std::size_t>(*idx)});
    return true;
  });

  if (!in_data) {
    if (fields.empty()) throw Error(ErrorCode::MissingHeaderField, "FIELDS not declared");
    if (!declared_points) throw Error(ErrorCode::MissingHeaderField, "POINTS not declared");
    throw Error(ErrorCode::MissingHeaderField, "DATA not declared");
  }
  if (cloud.points.size() != *declared_points)
    throw Error(ErrorCode::PointCountMismatch,
                "header declares " + std::to_string(*declared_points) + " points, found " +
                    std::to_string(cloud.points.size()));
  return cloud;
}

// ---------------------------------------------------------------------------

Point2 GraspRectangle::center() const {
  Point2 c;
  for (const auto& p : corners) {
    c.u += p.u / 4.0;
    c.v += p.v / 4.0;
  }
  return c;
}

bool GraspRectangle::well_formed(double tolerance_px) const {
  for (const auto& p : corners)
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
  const double e01 = distance(corners[0], corners[1]);
  const double e12 = distance(corners[1], corners[2]);
  const double e23 = distance(corners[2], corners[3]);
  const double e30 = distance(corners[3], corners[0]);
  return std::abs(e01 - e23) <= tolerance_px && std::abs(e12 - e30) <= tolerance_px;
}

RectangleParseResult parse_rectangles(std::string_view text) {
  RectangleParseResult result;
  std::array<Point2, 4> group{};
  std::size_t in_group = 0;
  bool group_has_nan = false;

  for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    auto tokens = split_tokens(line);
    if (tokens.empty()) return true;
    if (tokens.size() != 2) throw Error(ErrorCode::MalformedLine, "expected \"u v\"", line_no);
    auto u = parse_double(tokens[0]);
    auto v = parse_double(tokens[1]);
    if (!u || !v || std::isinf(*u) || std::isinf(*v))
      throw Error(ErrorCode::MalformedLine, "non-numeric coordinate", line_no);
    if (std::isnan(*u) || std::isnan(*v)) group_has_nan = true;
    group[in_group++] = {*u, *v};
    if (in_group == 4) {
      if (group_has_nan)
        ++result.dropped_groups;
      else
        result.rects.push_back(GraspRectangle{group});
      in_group = 0;
      group_has_nan = false;
    }
    return true;
  });

  if (in_group != 0)
    throw Error(ErrorCode::TruncatedGroup,
                "corner line count is not a multiple of 4 (" + std::to_string(in_group) +
                    " trailing lines)");
  return result;
}

// ---------------------------------------------------------------------------

DepthImage project_to_depth(std::span<const IndexedPoint> points, std::size_t height,
                            std::size_t width) {
  DepthImage out{Plane(height, width, 0.0f), Mask(height, width, 1)};
  const std::size_t n = height * width;
  for (const auto& p : points) {
    if (p.pixel_index >= n)
      throw Error(ErrorCode::IndexOutOfRange,
                  "pixel index " + std::to_string(p.pixel_index) + " >= " + std::to_string(n));
    const auto z = static_cast<float>(p.z);
    auto& invalid = out.invalid.data[p.pixel_index];
    auto& depth = out.depth.data[p.pixel_index];
    if (invalid || z < depth) {
      depth = z;
      invalid = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::size_t FloatArray::element_count() const {
  if (dims.empty()) return 0;
  std::size_t n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::vector<std::uint8_t> write_tensor(const FloatArray& tensor) {
  if (tensor.dims.empty() || tensor.dims.size() > kMaxTensorRank)
    throw Error(ErrorCode::InvalidShape, "tensor rank must be in [1,4]");
  for (auto d : tensor.dims)
    if (d == 0) throw Error(ErrorCode::InvalidShape, "tensor dims must be nonzero");
  if (tensor.values.size() != tensor.element_count())
    throw Error(ErrorCode::LengthMismatch, "value count does not match dims");

  std::vector<std::uint8_t> out;
  out.reserve(8 + 4 * tensor.dims.size() + 4 * tensor.values.size());
  out.insert(out.end(), kTensorMagic.begin(), kTensorMagic.end());
  append_u32(out, static_cast<std::uint32_t>(tensor.dims.size()));
  for (auto d : tensor.dims) append_u32(out, d);
  for (float v : tensor.values) append_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

std::size_t read_tensor_prefix(std::span<const std::uint8_t> bytes, FloatArray& out) {
  if (bytes.size() < 8) throw Error(ErrorCode::LengthMismatch, "truncated tensor header");
  if (!std::equal(kTensorMagic.begin(), kTensorMagic.end(), bytes.begin()))
    throw Error(ErrorCode::BadMagic, "expected UGT1");
  const std::uint32_t ndim = load_u32(bytes.data() + 4);
  if (ndim < 1 || ndim > kMaxTensorRank)
    throw Error(ErrorCode::InvalidShape, "tensor rank " + std::to_string(ndim));
  const std::size_t header = 8 + 4 * static_cast<std::size_t>(ndim);
  if (bytes.size() < header) throw Error(ErrorCode::LengthMismatch, "truncated dims");

  FloatArray t;
  std::size_t count = 1;
  for (std::uint32_t i = 0; i < ndim; ++i) {
    const std::uint32_t d = load_u32(bytes.data() + 8 + 4 * i);
    if (d == 0) throw Error(ErrorCode::InvalidShape, "zero dimension");
    t.dims.push_back(d);
    count *= d;
    if (count > (bytes.size() - header) / 4 + 1)
      throw Error(ErrorCode::LengthMismatch, "payload shorter than declared dims");
  }
  if (bytes.size() - header < 4 * count)
    throw Error(ErrorCode::LengthMismatch, "payload shorter than declared dims");
  t.values.resize(count);
  const std::uint8_t* p = bytes.data() + header;
  for (std::size_t i = 0; i < count; ++i) t.values[i] = std::bit_cast<float>(load_u32(p + 4 * i));
  out = std::move(t);
  return header + 4 * count;
}

FloatArray read_tensor(std::span<const std::uint8_t> bytes) {
  FloatArray t;
  const std::size_t used = read_tensor_prefix(bytes, t);
  if (used != bytes.size())
    throw Error(ErrorCode::LengthMismatch, "payload is " + std::to_string(bytes.size() - used) +
                                               " bytes longer than declared dims");
  return t;
}

FloatArray plane_to_array(const Plane& plane) {
  return {{static_cast<std::uint32_t>(plane.rows), static_cast<std::uint32_t>(plane.cols)},
          plane.data};
}

Plane array_to_plane(const FloatArray& array) {
  if (array.dims.size() != 2) throw Error(ErrorCode::InvalidShape, "expected a 2-D tensor");
  Plane p;
  p.rows = array.dims[0];
  p.cols = array.dims[1];
  p.data = array.values;
  return p;
}

// ---------------------------------------------------------------------------

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

}  // namespace pixelgrasp::io
