#include <gtest/gtest.h>
#include <zlib.h>

#include <random>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/model.hpp"
#include "pixelgrasp/nn/grad_check.hpp"
#include "pixelgrasp/nn/ops.hpp"
#include "support/fixtures.hpp"

using namespace pixelgrasp;
using namespace pixelgrasp::model;

namespace {

// Independent per-layer tally, written out level by level.
std::size_t tally_params(std::size_t in, std::size_t base, std::size_t levels) {
  auto conv = [](std::size_t ci, std::size_t co, std::size_t k) { return k * k * ci * co + co; };
  std::size_t total = 0;
  std::size_t prev = in;
  for (std::size_t l = 0; l < levels; ++l) {
    const std::size_t w = base * (std::size_t{1} << l);
    total += conv(prev, w, 3) + conv(w, w, 3);
    prev = w;
  }
  const std::size_t bottom = base * (std::size_t{1} << levels);
  total += conv(prev, bottom, 3) + conv(bottom, bottom, 3);
  prev = bottom;
  for (std::size_t l = levels; l-- > 0;) {
    const std::size_t w = base * (std::size_t{1} << l);
    total += conv(prev + w, w, 3) + conv(w, w, 3);
    prev = w;
  }
  return total + 4 * conv(prev, 1, 1);
}

ModelConfig small_config(std::size_t in, std::size_t side, std::size_t base, std::size_t levels,
                         std::uint64_t seed = 0) {
  ModelConfig c;
  c.in_channels = in;
  c.input_side = side;
  c.base_width = base;
  c.levels = levels;
  c.seed = seed;
  return c;
}

}  // namespace

TEST(ParamCount, SingleLayers) {
  EXPECT_EQ((ConvSpec{"a", 1, 1, 1}.weight_count() + 1), 2u);
  EXPECT_EQ((ConvSpec{"b", 2, 4, 3}.weight_count() + 4), 76u);
}

TEST(ParamCount, DefaultMatchesIndependentTally) {
  const ModelConfig c;
  EXPECT_EQ(param_count(c), tally_params(4, 16, 4));
  EXPECT_EQ(param_count(c), 1962820u);
}

TEST(ParamCount, MatchesBuiltNetworkOverRandomConfigs) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const std::size_t in = std::array<std::size_t, 3>{1, 2, 4}[rng() % 3];
    const std::size_t levels = 1 + rng() % 4;
    const std::size_t base = 1 + rng() % 12;
    const ModelConfig c = small_config(in, 16 << levels, base, levels, rng());
    const UGNet net(c);
    EXPECT_EQ(param_count(c), net.parameters().element_count());
    EXPECT_EQ(param_count(c), tally_params(in, base, levels));
  }
}

TEST(Config, Validation) {
  EXPECT_THROW(small_config(3, 32, 4, 2).validate(), Error);
  EXPECT_THROW(small_config(4, 30, 4, 2).validate(), Error);
  EXPECT_THROW(small_config(4, 32, 0, 2).validate(), Error);
  EXPECT_NO_THROW(small_config(2, 32, 4, 2).validate());
}

TEST(Config, JsonRoundtripAndUnknownKey) {
  const ModelConfig c = small_config(2, 64, 8, 3, 99);
  EXPECT_EQ(model_config_from_json(to_json(c)), c);
  auto j = to_json(c);
  j["dropout"] = 0.5;
  EXPECT_THROW(model_config_from_json(j), Error);
}

TEST(UGNet, SmallForwardShape) {
  const ModelConfig c = small_config(2, 32, 4, 2);
  const UGNet net(c);
  std::mt19937_64 rng(1);
  const auto maps = net.predict(fixtures::random_tensor<float>(nn::Shape{1, 2, 32, 32}, rng));
  for (const Plane* p : maps.planes()) {
    EXPECT_EQ(p->rows, 32u);
    EXPECT_EQ(p->cols, 32u);
  }
}

TEST(UGNet, DefaultForwardAtFullResolution) {
  const UGNet net{ModelConfig{}};
  const nn::Tensor<float> x(nn::Shape{1, 4, 304, 304}, 0.5f);
  nn::Graph<float> g;
  const auto heads = UGNet::forward(net.config(), g, net.parameters(), g.constant(x));
  for (auto id : heads.all()) EXPECT_EQ(g.value(id).shape(), (nn::Shape{1, 1, 304, 304}));
}

TEST(UGNet, OutputMatchesNonSquareInput) {
  const UGNet net(small_config(1, 32, 3, 2));
  const auto maps = net.predict(nn::Tensor<float>(nn::Shape{1, 1, 24, 40}, 0.3f));
  EXPECT_EQ(maps.rows(), 24u);
  EXPECT_EQ(maps.cols(), 40u);
}

TEST(UGNet, SameSeedSameParameters) {
  const UGNet a(small_config(4, 32, 4, 2, 5)), b(small_config(4, 32, 4, 2, 5)),
      c(small_config(4, 32, 4, 2, 6));
  EXPECT_EQ(a.checksum(), b.checksum());
  for (std::size_t i = 0; i < a.parameters().size(); ++i)
    EXPECT_EQ(a.parameters()[i].value, b.parameters()[i].value);
  EXPECT_NE(a.checksum(), c.checksum());
}

TEST(UGNet, BiasesStartAtZero) {
  const UGNet net(small_config(4, 32, 4, 2));
  for (std::size_t i = 1; i < net.parameters().size(); i += 2)
    for (float v : net.parameters()[i].value.values()) EXPECT_EQ(v, 0.0f);
}

TEST(UGNet, WrongChannelCount) {
  const UGNet net(small_config(2, 32, 4, 2));
  EXPECT_THROW(net.predict(nn::Tensor<float>(nn::Shape{1, 4, 32, 32})), Error);
}

TEST(UGNet, GradientThroughTinyNetwork) {
  const ModelConfig c = small_config(2, 8, 2, 1, 4);
  auto params = UGNet(c).parameters().cast<double>();
  std::mt19937_64 rng(2);
  const auto x = fixtures::random_tensor<double>(nn::Shape{1, 2, 8, 8}, rng, 0.0, 1.0);
  const auto t = fixtures::random_tensor<double>(nn::Shape{1, 1, 8, 8}, rng);
  const auto report = nn::grad_check(
      [&](nn::Graph<double>& g, nn::ParameterSet<double>& p) {
        const auto h = UGNet::forward(c, g, p, g.constant(x));
        const nn::NodeId target = g.constant(t);
        const std::array<nn::NodeId, 4> terms{nn::mse(g, h.q, target), nn::mse(g, h.cos2phi, target),
                                              nn::mse(g, h.sin2phi, target), nn::mse(g, h.w, target)};
        return nn::weighted_sum<double>(g, terms, std::array<double, 4>{1, 1, 1, 1});
      },
      params);
  EXPECT_LT(report.max_relative_error, 1e-3) << report.worst_parameter;
  EXPECT_GT(report.checked, 100u);
}

TEST(Checkpoint, RoundtripIsBitwise) {
  const UGNet net(small_config(4, 32, 3, 2, 77));
  const auto bytes = save_checkpoint(net);
  const UGNet back = load_checkpoint(bytes);
  EXPECT_EQ(back.config(), net.config());
  EXPECT_EQ(back.checksum(), net.checksum());
  EXPECT_EQ(save_checkpoint(back), bytes);
  std::mt19937_64 rng(1);
  const auto x = fixtures::random_tensor<float>(nn::Shape{1, 4, 32, 32}, rng);
  EXPECT_EQ(net.predict(x), back.predict(x));
}

TEST(Checkpoint, LayoutHeader) {
  const UGNet net(small_config(1, 16, 1, 1));
  const auto bytes = save_checkpoint(net);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "UGCK");
  EXPECT_EQ(io::load_u32(bytes.data() + 4), 1u);
  const std::uint32_t json_len = io::load_u32(bytes.data() + 8);
  const auto j = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + json_len);
  EXPECT_EQ(j.at("levels"), 1);
  EXPECT_EQ(std::string(bytes.begin() + 12 + json_len, bytes.begin() + 16 + json_len), "UGT1");
}

TEST(Checkpoint, PayloadFlipIsCrcMismatch) {
  auto bytes = save_checkpoint(UGNet(small_config(1, 16, 2, 1)));
  bytes[bytes.size() / 2] ^= 0x01;
  try {
    load_checkpoint(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CrcMismatch);
  }
}

TEST(Checkpoint, VersionAndMagic) {
  auto bytes = save_checkpoint(UGNet(small_config(1, 16, 2, 1)));
  auto versioned = bytes;
  versioned.resize(versioned.size() - 4);
  versioned[4] = 99;
  const uLong crc = crc32(0L, versioned.data(), static_cast<uInt>(versioned.size()));
  io::append_u32(versioned, static_cast<std::uint32_t>(crc));
  try {
    load_checkpoint(versioned);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::VersionUnsupported);
  }
  bytes[0] = 'X';
  try {
    load_checkpoint(bytes);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadMagic);
  }
}

TEST(Checkpoint, WrongParameterSet) {
  nn::ParameterSet<float> p;
  p.add("x", nn::Tensor<float>(nn::Shape{1, 1, 1, 1}));
  try {
    UGNet(small_config(1, 16, 2, 1), std::move(p));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CountMismatch);
  }
}
