#include "pixelgrasp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/random.hpp"

namespace pixelgrasp::prep {
namespace {

constexpr double kWeightEps = 1e-12;

struct BilinearTap {
  long x0 = 0, y0 = 0;
  double fx = 0.0, fy = 0.0;
};

BilinearTap bilinear_tap(Point2 src) {
  const double x = src.u - 0.5;
  const double y = src.v - 0.5;
  BilinearTap t;
  t.x0 = static_cast<long>(std::floor(x));
  t.y0 = static_cast<long>(std::floor(y));
  t.fx = x - static_cast<double>(t.x0);
  t.fy = y - static_cast<double>(t.y0);
  return t;
}

// Visits the up-to-four source pixels with nonzero bilinear weight. Returns
// false (without finishing) if one lies outside the frame or `reject` says so.
template <typename Visit>
bool visit_taps(const BilinearTap& t, std::size_t rows, std::size_t cols, Visit&& visit) {
  const double wx[2] = {1.0 - t.fx, t.fx};
  const double wy[2] = {1.0 - t.fy, t.fy};
  for (int dy = 0; dy < 2; ++dy) {
    for (int dx = 0; dx < 2; ++dx) {
      const double w = wx[dx] * wy[dy];
      if (w <= kWeightEps) continue;
      const long x = t.x0 + dx;
      const long y = t.y0 + dy;
      if (x < 0 || y < 0 || x >= static_cast<long>(cols) || y >= static_cast<long>(rows))
        return false;
      if (!visit(static_cast<std::size_t>(y), static_cast<std::size_t>(x), w)) return false;
    }
  }
  return true;
}

std::vector<io::GraspRectangle> transform_rects(const std::vector<io::GraspRectangle>& rects,
                                   const Affine2& forward, std::size_t rows, std::size_t cols,
                                   bool drop_out_of_frame) {
  std::vector<io::GraspRectangle> out;
  for (const auto& rect : rects) {
    io::GraspRectangle mapped;
    bool inside = true;
    for (std::size_t i = 0; i < 4; ++i) {
      mapped.corners[i] = forward.apply(rect.corners[i]);
      const auto& p = mapped.corners[i];
      if (!(p.u >= 0.0 && p.v >= 0.0 && p.u < static_cast<double>(cols) &&
            p.v < static_cast<double>(rows)))
        inside = false;
    }
    if (inside || !drop_out_of_frame) out.push_back(mapped);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

Plane inpaint_depth(const Plane& depth, const Mask& invalid) {
  if (depth.rows != invalid.rows || depth.cols != invalid.cols)
    throw Error(ErrorCode::ShapeMismatch, "depth and mask dims differ");
  const std::size_t rows = depth.rows, cols = depth.cols;
  Plane out = depth;
  Mask valid(rows, cols);
  std::size_t remaining = 0;
  for (std::size_t i = 0; i < valid.size(); ++i) {
    valid.data[i] = invalid.data[i] == 0;
    remaining += invalid.data[i] != 0;
  }
  if (remaining == valid.size()) throw Error(ErrorCode::AllPixelsInvalid, "no valid depth pixel");

  std::vector<std::size_t> frontier;
  std::vector<float> fill;
  while (remaining > 0) {
    frontier.clear();
    fill.clear();
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        if (valid.at(r, c)) continue;
        double sum = 0.0;
        int n = 0;
        if (r > 0 && valid.at(r - 1, c)) sum += out.at(r - 1, c), ++n;
        if (r + 1 < rows && valid.at(r + 1, c)) sum += out.at(r + 1, c), ++n;
        if (c > 0 && valid.at(r, c - 1)) sum += out.at(r, c - 1), ++n;
        if (c + 1 < cols && valid.at(r, c + 1)) sum += out.at(r, c + 1), ++n;
        if (n == 0) continue;
        frontier.push_back(r * cols + c);
        fill.push_back(static_cast<float>(sum / n));
      }
    }
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      out.data[frontier[i]] = fill[i];
      valid.data[frontier[i]] = 1;
    }
    remaining -= frontier.size();
  }
  return out;
}

float minmax_normalize(float value, NormalizationRange range) {
  if (!(range.max > range.min))
    throw Error(ErrorCode::DegenerateRange, "normalization range requires max > min");
  const double x = (static_cast<double>(value) - range.min) / (range.max - range.min);
  return static_cast<float>(std::clamp(x, 0.0, 1.0));
}

Plane minmax_normalize(const Plane& plane, NormalizationRange range) {
  if (!(range.max > range.min))
    throw Error(ErrorCode::DegenerateRange, "normalization range requires max > min");
  Plane out(plane.rows, plane.cols);
  for (std::size_t i = 0; i < plane.size(); ++i) out.data[i] = minmax_normalize(plane.data[i], range);
  return out;
}

Plane rgb_to_grey(const io::RgbImage& rgb) {
  const auto& [r, g, b] = rgb.channels;
  Plane out(r.rows, r.cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data[i] = static_cast<float>(0.299 * r.data[i] + 0.587 * g.data[i] + 0.114 * b.data[i]);
  return out;
}

// ---------------------------------------------------------------------------

Affine2 Affine2::inverse() const {
  const double det = m[0] * m[4] - m[1] * m[3];
  Affine2 inv;
  inv.m[0] = m[4] / det;
  inv.m[1] = -m[1] / det;
  inv.m[3] = -m[3] / det;
  inv.m[4] = m[0] / det;
  inv.m[2] = -(inv.m[0] * m[2] + inv.m[1] * m[5]);
  inv.m[5] = -(inv.m[3] * m[2] + inv.m[4] * m[5]);
  return inv;
}

Affine2 Affine2::compose(const Affine2& o) const {
  Affine2 r;
  r.m[0] = m[0] * o.m[0] + m[1] * o.m[3];
  r.m[1] = m[0] * o.m[1] + m[1] * o.m[4];
  r.m[2] = m[0] * o.m[2] + m[1] * o.m[5] + m[2];
  r.m[3] = m[3] * o.m[0] + m[4] * o.m[3];
  r.m[4] = m[3] * o.m[1] + m[4] * o.m[4];
  r.m[5] = m[3] * o.m[2] + m[4] * o.m[5] + m[5];
  return r;
}

Plane warp_plane(const Plane& src, const Affine2& forward, std::size_t out_rows,
                 std::size_t out_cols, float fill) {
  const Affine2 inv = forward.inverse();
  Plane out(out_rows, out_cols, fill);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      const auto tap = bilinear_tap(inv.apply(pixel_center(r, c)));
      double acc = 0.0;
      const bool ok = visit_taps(tap, src.rows, src.cols, [&](std::size_t y, std::size_t x, double w) {
        acc += w * src.at(y, x);
        return true;
      });
      if (ok) out.at(r, c) = static_cast<float>(acc);
    }
  }
  return out;
}

void warp_depth(const Plane& depth, const Mask& invalid, const Affine2& forward,
                std::size_t out_rows, std::size_t out_cols, Plane& depth_out, Mask& invalid_out) {
  const Affine2 inv = forward.inverse();
  depth_out = Plane(out_rows, out_cols, 0.0f);
  invalid_out = Mask(out_rows, out_cols, 1);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      const auto tap = bilinear_tap(inv.apply(pixel_center(r, c)));
      double acc = 0.0;
      const bool ok =
          visit_taps(tap, depth.rows, depth.cols, [&](std::size_t y, std::size_t x, double w) {
            if (invalid.at(y, x)) return false;
            acc += w * depth.at(y, x);
            return true;
          });
      if (ok) {
        depth_out.at(r, c) = static_cast<float>(acc);
        invalid_out.at(r, c) = 0;
      }
    }
  }
}

namespace {

io::RgbdSample warp_sample(const io::RgbdSample& sample, const Affine2& forward,
                           std::size_t out_rows, std::size_t out_cols, bool drop_rects) {
  io::RgbdSample out;
  out.id = sample.id;
  for (std::size_t k = 0; k < 3; ++k)
    out.rgb.channels[k] = warp_plane(sample.rgb.channels[k], forward, out_rows, out_cols, 0.0f);
  warp_depth(sample.depth, sample.depth_invalid, forward, out_rows, out_cols, out.depth,
             out.depth_invalid);
  out.pos_rects = transform_rects(sample.pos_rects, forward, out_rows, out_cols, drop_rects);
  out.neg_rects = transform_rects(sample.neg_rects, forward, out_rows, out_cols, drop_rects);
  return out;
}

}  // namespace

Affine2 center_crop_resize_transform(std::size_t rows, std::size_t cols, std::size_t side) {
  const std::size_t crop = std::min(rows, cols);
  if (crop < side || side == 0)
    throw Error(ErrorCode::ImageTooSmall, std::to_string(rows) + "x" + std::to_string(cols) +
                                              " cannot yield " + std::to_string(side) + "x" +
                                              std::to_string(side));
  const double s = static_cast<double>(side) / static_cast<double>(crop);
  const double u0 = static_cast<double>(cols - crop) / 2.0;
  const double v0 = static_cast<double>(rows - crop) / 2.0;
  return Affine2{{s, 0.0, -u0 * s, 0.0, s, -v0 * s}};
}

io::RgbdSample center_crop_resize(const io::RgbdSample& sample, std::size_t side) {
  const Affine2 t = center_crop_resize_transform(sample.rows(), sample.cols(), side);
  if (sample.rows() == side && sample.cols() == side) return sample;
  return warp_sample(sample, t, side, side, /*drop_rects=*/false);
}

Affine2 augment_transform(const AugmentParams& params, std::size_t rows, std::size_t cols) {
  const double cu = static_cast<double>(cols) / 2.0;
  const double cv = static_cast<double>(rows) / 2.0;
  const double c = std::cos(params.rotation) * params.scale;
  const double s = std::sin(params.rotation) * params.scale;
  // p' = s R (p - centre) + centre + t
  Affine2 rigid{{c, -s, cu - c * cu + s * cv + params.translation[0],  //
                 s, c, cv - s * cu - c * cv + params.translation[1]}};
  if (params.crop_side <= 0.0) return rigid;
  const double ku = static_cast<double>(cols) / params.crop_side;
  const double kv = static_cast<double>(rows) / params.crop_side;
  Affine2 crop{{ku, 0.0, -params.crop_u0 * ku, 0.0, kv, -params.crop_v0 * kv}};
  return crop.compose(rigid);
}

io::RgbdSample augment(const io::RgbdSample& sample, const AugmentParams& params) {
  const Affine2 t = augment_transform(params, sample.rows(), sample.cols());
  return warp_sample(sample, t, sample.rows(), sample.cols(), /*drop_rects=*/true);
}

AugmentParams sample_augment(const AugmentConfig& config, std::uint64_t seed,
                             std::uint64_t key, std::uint64_t variant, std::size_t side) {
  AugmentParams p;
  p.seed = derive_seed(seed, key, variant);
  Rng rng(p.seed);
  if (config.rotation_steps > 0) {
    const auto k = uniform_index(rng, static_cast<std::uint64_t>(config.rotation_steps));
    p.rotation = 2.0 * std::numbers::pi * static_cast<double>(k) / config.rotation_steps;
  } else {
    p.rotation = uniform(rng, -config.max_rotation, config.max_rotation);
  }
  p.translation = {uniform(rng, -config.translation_jitter, config.translation_jitter),
                   uniform(rng, -config.translation_jitter, config.translation_jitter)};
  p.scale = uniform(rng, 1.0 - config.scale_jitter, 1.0 + config.scale_jitter);
  if (config.crop_fraction < 1.0) {
    p.crop_side = config.crop_fraction * static_cast<double>(side);
    const double slack = static_cast<double>(side) - p.crop_side;
    p.crop_u0 = uniform(rng, 0.0, slack);
    p.crop_v0 = uniform(rng, 0.0, slack);
  }
  return p;
}

std::uint64_t sample_key(std::string_view id) {
  // FNV-1a
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : id) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace pixelgrasp::prep
