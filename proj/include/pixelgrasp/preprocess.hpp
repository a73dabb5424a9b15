#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/image.hpp"

namespace pixelgrasp::prep {

struct NormalizationRange {
  double min = 0.0;
  double max = 1.0;
};

inline constexpr NormalizationRange kRgbRange{0.0, 255.0};
inline constexpr NormalizationRange kDefaultDepthRange{20.0, 120.0};

/// Fills invalid pixels by repeated 4-neighbour averaging of the previous frontier.
Plane inpaint_depth(const Plane& depth, const Mask& invalid);

/// (x - min) / (max - min), clamped to [0, 1]. Throws DegenerateRange when max <= min.
float minmax_normalize(float value, NormalizationRange range);
Plane minmax_normalize(const Plane& plane, NormalizationRange range);

/// BT.601 luma, no rounding.
Plane rgb_to_grey(const io::RgbImage& rgb);

/// Row-major 2x3 affine map in continuous pixel coordinates.
struct Affine2 {
  std::array<double, 6> m{1, 0, 0, 0, 1, 0};

  Point2 apply(Point2 p) const {
    return {m[0] * p.u + m[1] * p.v + m[2], m[3] * p.u + m[4] * p.v + m[5]};
  }
  Affine2 inverse() const;
  /// this ∘ other (other applied first).
  Affine2 compose(const Affine2& other) const;
};

/// Bilinear sampling of `src` through the inverse of `forward`.
/// Output pixels whose footprint leaves the source are `fill` (or flagged in `invalid_out`).
Plane warp_plane(const Plane& src, const Affine2& forward, std::size_t out_rows,
                 std::size_t out_cols, float fill);

/// Depth-aware variant: output is invalid when any contributing source pixel is
/// invalid or out of frame.
void warp_depth(const Plane& depth, const Mask& invalid, const Affine2& forward,
                std::size_t out_rows, std::size_t out_cols, Plane& depth_out, Mask& invalid_out);

/// Largest centred square crop, then bilinear resize to side x side.
Affine2 center_crop_resize_transform(std::size_t rows, std::size_t cols, std::size_t side);
io::RgbdSample center_crop_resize(const io::RgbdSample& sample, std::size_t side = 304);

struct AugmentParams {
  double rotation = 0.0;            // radians, about the image centre
  std::array<double, 2> translation{0.0, 0.0};  // (du, dv) pixels
  // Crop window applied after the rigid+scale transform, rescaled back to
  // the full frame. side == 0 means "no crop".
  double crop_u0 = 0.0;
  double crop_v0 = 0.0;
  double crop_side = 0.0;
  double scale = 1.0;
  std::uint64_t seed = 0;
};

Affine2 augment_transform(const AugmentParams& params, std::size_t rows, std::size_t cols);

/// Warps every plane and every rectangle by the same transform. Rectangles with
/// any corner leaving the frame are dropped.
io::RgbdSample augment(const io::RgbdSample& sample, const AugmentParams& params);

struct AugmentConfig {
  int copies = 0;                   // augmented variants per source sample
  int rotation_steps = 0;           // rotations drawn from k * 2pi / steps; 0 = continuous
  double max_rotation = 3.14159265358979323846;
  double translation_jitter = 0.0;  // pixels, uniform in [-j, j]
  double scale_jitter = 0.0;        // scale uniform in [1 - j, 1 + j]
  double crop_fraction = 1.0;       // crop side / image side; 1 = no crop
};

/// Deterministic per-sample parameters keyed by (seed, sample id, variant).
AugmentParams sample_augment(const AugmentConfig& config, std::uint64_t seed,
                             std::uint64_t sample_key, std::uint64_t variant, std::size_t side);

/// Stable 64-bit key for a sample id string.
std::uint64_t sample_key(std::string_view id);

}  // namespace pixelgrasp::prep
