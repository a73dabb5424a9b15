#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/preprocess.hpp"

using namespace pixelgrasp;
using namespace pixelgrasp::prep;

namespace {

io::RgbdSample blank_sample(std::size_t rows, std::size_t cols) {
  io::RgbdSample s;
  s.id = "blank";
  for (auto& c : s.rgb.channels) c = Plane(rows, cols, 0.0f);
  s.depth = Plane(rows, cols, 50.0f);
  s.depth_invalid = Mask(rows, cols);
  return s;
}

io::GraspRectangle axis_rect(double u0, double v0, double u1, double v1) {
  // Jaw plates vertical: c0->c1 runs along v.
  return {{Point2{u0, v0}, Point2{u0, v1}, Point2{u1, v1}, Point2{u1, v0}}};
}

}  // namespace

TEST(Inpaint, NoInvalidIsIdentity) {
  Plane d(4, 5);
  for (std::size_t i = 0; i < d.size(); ++i) d.data[i] = static_cast<float>(i);
  EXPECT_EQ(inpaint_depth(d, Mask(4, 5)), d);
}

TEST(Inpaint, ConstantNeighbourhood) {
  Plane d(3, 3, 5.0f);
  d.at(1, 1) = 0.0f;
  Mask m(3, 3);
  m.at(1, 1) = 1;
  EXPECT_FLOAT_EQ(inpaint_depth(d, m).at(1, 1), 5.0f);
}

TEST(Inpaint, AllInvalidThrows) {
  try {
    inpaint_depth(Plane(2, 2), Mask(2, 2, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AllPixelsInvalid);
  }
}

TEST(Inpaint, FillsEverythingAndIsIdempotent) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    Plane d(12, 9);
    Mask m(12, 9);
    for (std::size_t i = 0; i < d.size(); ++i) {
      d.data[i] = static_cast<float>(20 + rng() % 100);
      m.data[i] = rng() % 3 == 0;
    }
    m.data[rng() % d.size()] = 0;
    const Plane once = inpaint_depth(d, m);
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_TRUE(std::isfinite(once.data[i]));
      if (!m.data[i]) {
        EXPECT_EQ(once.data[i], d.data[i]);
      }
    }
    EXPECT_EQ(inpaint_depth(once, Mask(12, 9)), once);
  }
}

TEST(Normalize, DepthRangeEndpoints) {
  EXPECT_EQ(minmax_normalize(20.0f, kDefaultDepthRange), 0.0f);
  EXPECT_EQ(minmax_normalize(120.0f, kDefaultDepthRange), 1.0f);
  EXPECT_FLOAT_EQ(minmax_normalize(70.0f, kDefaultDepthRange), 0.5f);
}

TEST(Normalize, ClampsAndRejectsDegenerate) {
  EXPECT_EQ(minmax_normalize(-5.0f, kDefaultDepthRange), 0.0f);
  EXPECT_EQ(minmax_normalize(500.0f, kDefaultDepthRange), 1.0f);
  EXPECT_THROW(minmax_normalize(1.0f, NormalizationRange{3, 3}), Error);
  EXPECT_THROW(minmax_normalize(1.0f, NormalizationRange{4, 3}), Error);
}

TEST(Normalize, OutputAlwaysInUnitInterval) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> dist(-1e4f, 1e4f);
  Plane p(10, 10);
  for (auto& v : p.data) v = dist(rng);
  for (float v : minmax_normalize(p, kDefaultDepthRange).data) {
    EXPECT_GE(v, 0.0f);
    EXPECT_LE(v, 1.0f);
  }
}

TEST(Grey, Bt601Weights) {
  io::RgbImage rgb;
  for (auto& c : rgb.channels) c = Plane(1, 3);
  rgb.channels[0].data = {255, 0, 255};
  rgb.channels[1].data = {255, 0, 0};
  rgb.channels[2].data = {255, 0, 0};
  const Plane g = rgb_to_grey(rgb);
  EXPECT_NEAR(g.data[0], 255.0, 1e-4);
  EXPECT_EQ(g.data[1], 0.0f);
  EXPECT_NEAR(g.data[2], 0.299 * 255.0, 1e-4);
}

TEST(CropResize, AlreadyAtSideIsIdentity) {
  auto s = blank_sample(304, 304);
  s.pos_rects.push_back(axis_rect(100, 100, 130, 112));
  const auto out = center_crop_resize(s, 304);
  EXPECT_EQ(out.depth, s.depth);
  EXPECT_EQ(out.pos_rects[0].corners, s.pos_rects[0].corners);
}

TEST(CropResize, HalfScale) {
  const Affine2 t = center_crop_resize_transform(608, 608, 304);
  const Point2 p = t.apply({304, 304});
  EXPECT_NEAR(p.u, 152, 1e-12);
  EXPECT_NEAR(p.v, 152, 1e-12);
}

TEST(CropResize, LandscapeAgainstMatrixProduct) {
  // Independent composition: translate(-80, 0) then scale(304/480).
  const double k = 304.0 / 480.0;
  const double crop[3][3] = {{1, 0, -80}, {0, 1, 0}, {0, 0, 1}};
  const double scale[3][3] = {{k, 0, 0}, {0, k, 0}, {0, 0, 1}};
  double full[3][3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int l = 0; l < 3; ++l) full[i][j] += scale[i][l] * crop[l][j];
  const Affine2 t = center_crop_resize_transform(480, 640, 304);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(t.m[i * 3 + j], full[i][j], 1e-12);
  const Point2 p = t.apply({320, 240});
  EXPECT_NEAR(p.u, 152, 1e-9);
  EXPECT_NEAR(p.v, 152, 1e-9);
}

TEST(CropResize, TooSmall) {
  EXPECT_THROW(center_crop_resize(blank_sample(100, 200), 304), Error);
}

TEST(Augment, IdentityParams) {
  auto s = blank_sample(64, 64);
  for (std::size_t i = 0; i < s.depth.size(); ++i) s.depth.data[i] = static_cast<float>(i % 17);
  s.pos_rects.push_back(axis_rect(20, 20, 40, 30));
  const auto out = augment(s, AugmentParams{});
  EXPECT_EQ(out.depth, s.depth);
  EXPECT_EQ(out.pos_rects[0].corners, s.pos_rects[0].corners);
}

TEST(Augment, QuarterTurnAboutCentre) {
  AugmentParams p;
  p.rotation = std::numbers::pi / 2;
  const Point2 q = augment_transform(p, 304, 304).apply({252, 152});
  EXPECT_NEAR(q.u, 152, 1e-9);
  EXPECT_NEAR(q.v, 252, 1e-9);
}

TEST(Augment, TranslationShiftsCentre) {
  auto s = blank_sample(64, 64);
  s.pos_rects.push_back(axis_rect(20, 20, 40, 30));
  AugmentParams p;
  p.translation = {10, 0};
  const auto out = augment(s, p);
  ASSERT_EQ(out.pos_rects.size(), 1u);
  const Point2 c0 = s.pos_rects[0].center(), c1 = out.pos_rects[0].center();
  EXPECT_NEAR(c1.u - c0.u, 10, 1e-12);
  EXPECT_NEAR(c1.v - c0.v, 0, 1e-12);
}

TEST(Augment, OutOfFrameRectDroppedAndDepthInvalid) {
  auto s = blank_sample(64, 64);
  s.pos_rects.push_back(axis_rect(50, 20, 62, 30));
  AugmentParams p;
  p.translation = {10, 0};
  const auto out = augment(s, p);
  EXPECT_TRUE(out.pos_rects.empty());
  EXPECT_TRUE(out.depth_invalid.at(10, 2));
  EXPECT_FALSE(out.depth_invalid.at(10, 40));
}

TEST(Augment, RotationShiftsGraspAngle) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
  for (int trial = 0; trial < 100; ++trial) {
    auto s = blank_sample(96, 96);
    const auto rect = axis_rect(40, 42, 56, 54);
    s.pos_rects.push_back(rect);
    AugmentParams p;
    p.rotation = ang(rng);
    const auto out = augment(s, p);
    ASSERT_EQ(out.pos_rects.size(), 1u);
    const double expected = labels::wrap_half_pi(labels::rect_angle(rect) + p.rotation);
    double diff = labels::rect_angle(out.pos_rects[0]) - expected;
    diff = labels::wrap_half_pi(diff);
    EXPECT_NEAR(diff, 0.0, 1e-9);
  }
}

TEST(Augment, LabelsCommuteWithWarp) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0, 1);
  const std::size_t side = 96;
  for (int trial = 0; trial < 30; ++trial) {
    auto s = blank_sample(side, side);
    const double cu = 35 + 26 * unit(rng), cv = 35 + 26 * unit(rng);
    const double half_w = 6 + 8 * unit(rng), half_h = 4 + 4 * unit(rng);
    s.pos_rects.push_back(axis_rect(cu - half_w, cv - half_h, cu + half_w, cv + half_h));
    AugmentParams p;
    p.rotation = (unit(rng) - 0.5) * std::numbers::pi;
    p.translation = {(unit(rng) - 0.5) * 10, (unit(rng) - 0.5) * 10};
    p.scale = 0.9 + 0.2 * unit(rng);
    const auto out = augment(s, p);
    if (out.pos_rects.empty()) continue;

    const auto after = labels::rasterize(out.pos_rects, side, side);
    const auto before = labels::rasterize(s.pos_rects, side, side);
    const Plane warped =
        warp_plane(before.q, augment_transform(p, side, side), side, side, 0.0f);
    double total = 0;
    for (std::size_t i = 0; i < warped.size(); ++i)
      total += std::abs(warped.data[i] - after.q.data[i]);
    EXPECT_LT(total / static_cast<double>(warped.size()), 0.05);
  }
}

TEST(Augment, SampledParamsAreDeterministic) {
  AugmentConfig cfg;
  cfg.copies = 3;
  cfg.translation_jitter = 10;
  cfg.scale_jitter = 0.1;
  cfg.crop_fraction = 0.9;
  const auto a = sample_augment(cfg, 42, sample_key("pcd0100"), 1, 304);
  const auto b = sample_augment(cfg, 42, sample_key("pcd0100"), 1, 304);
  const auto c = sample_augment(cfg, 42, sample_key("pcd0100"), 2, 304);
  EXPECT_EQ(a.rotation, b.rotation);
  EXPECT_EQ(a.translation, b.translation);
  EXPECT_NE(a.rotation, c.rotation);
  EXPECT_GT(a.scale, 0.0);
}
