#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/labels.hpp"

using namespace pixelgrasp;
using namespace pixelgrasp::labels;

namespace {

constexpr double kPi = std::numbers::pi;

// Rectangle centred at (cu, cv) whose grasp axis points along `angle`.
io::GraspRectangle oriented_rect(double cu, double cv, double width, double jaw, double angle) {
  const double au = std::cos(angle), av = std::sin(angle);  // grasp axis
  const double ju = -av, jv = au;                           // jaw-plate direction
  const double hw = width / 2, hj = jaw / 2;
  auto at = [&](double a, double j) { return Point2{cu + a * au + j * ju, cv + a * av + j * jv}; };
  return {{at(-hw, -hj), at(-hw, hj), at(hw, hj), at(hw, -hj)}};
}

// Ray-casting point-in-polygon; boundary points count as inside.
bool inside_polygon(const std::array<Point2, 4>& poly, Point2 p) {
  for (std::size_t i = 0; i < 4; ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % 4];
    const double cr = (b.u - a.u) * (p.v - a.v) - (b.v - a.v) * (p.u - a.u);
    if (std::abs(cr) < 1e-12 && p.u >= std::min(a.u, b.u) - 1e-12 &&
        p.u <= std::max(a.u, b.u) + 1e-12 && p.v >= std::min(a.v, b.v) - 1e-12 &&
        p.v <= std::max(a.v, b.v) + 1e-12)
      return true;
  }
  bool in = false;
  for (std::size_t i = 0, j = 3; i < 4; j = i++) {
    const Point2 a = poly[i], b = poly[j];
    if ((a.v > p.v) != (b.v > p.v) && p.u < (b.u - a.u) * (p.v - a.v) / (b.v - a.v) + a.u)
      in = !in;
  }
  return in;
}

}  // namespace

TEST(RectAngle, AxisAlignedIsZero) {
  const io::GraspRectangle r{{Point2{0, 0}, Point2{0, 12}, Point2{30, 12}, Point2{30, 0}}};
  EXPECT_NEAR(rect_angle(r), 0.0, 1e-12);
}

TEST(RectAngle, FortyFiveAndWrap) {
  EXPECT_NEAR(rect_angle(oriented_rect(50, 50, 30, 10, kPi / 4)), kPi / 4, 1e-12);
  EXPECT_NEAR(rect_angle(oriented_rect(50, 50, 30, 10, 3 * kPi / 4)), -kPi / 4, 1e-12);
}

TEST(RectAngle, DegenerateEdge) {
  const io::GraspRectangle r{{Point2{0, 0}, Point2{0, 0}, Point2{30, 12}, Point2{30, 0}}};
  EXPECT_THROW(rect_angle(r), Error);
}

TEST(EncodeAngle, KnownValues) {
  auto [c0, s0] = encode_angle(0);
  EXPECT_DOUBLE_EQ(c0, 1);
  EXPECT_DOUBLE_EQ(s0, 0);
  auto [c1, s1] = encode_angle(kPi / 4);
  EXPECT_NEAR(c1, 0, 1e-15);
  EXPECT_NEAR(s1, 1, 1e-15);
  for (double phi : {kPi / 2, -kPi / 2}) {
    auto [c, s] = encode_angle(phi);
    EXPECT_NEAR(c, -1, 1e-15);
    EXPECT_NEAR(s, 0, 1e-15);
  }
}

TEST(EncodeAngle, UnitCircleAndRoundtrip) {
  for (int i = 0; i < 1000; ++i) {
    const double phi = -kPi / 2 + kPi * i / 1000.0;
    const auto [c, s] = encode_angle(phi);
    EXPECT_NEAR(c * c + s * s, 1.0, 1e-12);
    EXPECT_NEAR(decode_angle(c, s), phi, 1e-9);
  }
}

TEST(RectToMask, AxisAlignedThirds) {
  const io::GraspRectangle r{{Point2{0, 0}, Point2{0, 12}, Point2{30, 12}, Point2{30, 0}}};
  const Mask m = rect_to_mask(r, 20, 40);
  EXPECT_EQ(m.count(), 10u * 12u);
  for (std::size_t row = 0; row < 12; ++row)
    for (std::size_t col = 0; col < 40; ++col)
      EXPECT_EQ(m.at(row, col), col >= 10 && col < 20) << row << "," << col;
}

TEST(RectToMask, ThreePixelAxisGivesOnePixel) {
  const io::GraspRectangle r{{Point2{0, 0}, Point2{0, 5}, Point2{3, 5}, Point2{3, 0}}};
  const Mask m = rect_to_mask(r, 8, 8);
  EXPECT_EQ(m.count(), 5u);
  for (std::size_t row = 0; row < 5; ++row) EXPECT_EQ(m.at(row, 1), 1);
}

TEST(RectToMask, RotatedAreaNearThird) {
  const auto r = oriented_rect(50, 50, 36, 18, kPi / 4);
  const double area = 36.0 * 18.0;
  const double count = static_cast<double>(rect_to_mask(r, 100, 100).count());
  EXPECT_NEAR(count, area / 3.0, 0.1 * area / 3.0);
}

TEST(RectToMask, MatchesBruteForcePointInPolygon) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto r = oriented_rect(20 + 24 * unit(rng), 20 + 24 * unit(rng), 4 + 30 * unit(rng),
                                 3 + 15 * unit(rng), (unit(rng) - 0.5) * 2 * kPi);
    const auto poly = middle_third(r);
    const Mask m = rect_to_mask(r, 64, 64);
    std::size_t brute = 0;
    for (std::size_t row = 0; row < 64; ++row)
      for (std::size_t col = 0; col < 64; ++col) brute += inside_polygon(poly, pixel_center(row, col));
    EXPECT_EQ(m.count(), brute);
  }
}

TEST(Rasterize, EmptyListIsZero) {
  const auto maps = rasterize({}, 6, 7);
  for (const Plane* p : maps.planes())
    for (float v : p->data) EXPECT_EQ(v, 0.0f);
}

TEST(Rasterize, WidthNormalisedBy150) {
  const std::vector<io::GraspRectangle> rects{oriented_rect(100, 100, 75, 20, 0.3)};
  const auto maps = rasterize(rects, 200, 200);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < maps.q.size(); ++i)
    if (maps.q.data[i] == 1.0f) {
      ++hits;
      EXPECT_NEAR(maps.w.data[i], 0.5, 1e-6);
    }
  EXPECT_GT(hits, 0u);
}

TEST(Rasterize, LaterRectangleOverwrites) {
  const std::vector<io::GraspRectangle> rects{oriented_rect(30, 30, 30, 20, 0.0),
                                              oriented_rect(30, 30, 30, 20, kPi / 4)};
  const auto maps = rasterize(rects, 60, 60);
  EXPECT_EQ(maps.q.at(30, 30), 1.0f);
  EXPECT_NEAR(maps.cos2phi.at(30, 30), 0.0, 1e-6);
  EXPECT_NEAR(maps.sin2phi.at(30, 30), 1.0, 1e-6);
}

TEST(Rasterize, LabelInvariants) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<io::GraspRectangle> rects;
    for (int k = 0; k < 3; ++k)
      rects.push_back(oriented_rect(30 + 40 * unit(rng), 30 + 40 * unit(rng), 5 + 200 * unit(rng),
                                    5 + 20 * unit(rng), (unit(rng) - 0.5) * 2 * kPi));
    const auto maps = rasterize(rects, 100, 100);
    for (std::size_t i = 0; i < maps.q.size(); ++i) {
      const float q = maps.q.data[i];
      ASSERT_TRUE(q == 0.0f || q == 1.0f);
      ASSERT_GE(maps.w.data[i], 0.0f);
      ASSERT_LE(maps.w.data[i], 1.0f);
      if (q == 1.0f) {
        const double c = maps.cos2phi.data[i], s = maps.sin2phi.data[i];
        ASSERT_NEAR(c * c + s * s, 1.0, 1e-6);
      } else {
        ASSERT_EQ(maps.cos2phi.data[i], 0.0f);
        ASSERT_EQ(maps.sin2phi.data[i], 0.0f);
        ASSERT_EQ(maps.w.data[i], 0.0f);
      }
    }
  }
}

TEST(Rasterize, ArrayRoundtrip) {
  const std::vector<io::GraspRectangle> rects{oriented_rect(10, 10, 12, 6, 0.7)};
  const auto maps = rasterize(rects, 20, 24);
  const auto arr = maps_to_array(maps);
  EXPECT_EQ(arr.dims, (std::vector<std::uint32_t>{4, 20, 24}));
  EXPECT_EQ(array_to_maps(arr), maps);
}
