#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/nn/grad_check.hpp"
#include "pixelgrasp/training.hpp"
#include "support/fixtures.hpp"

using namespace pixelgrasp;
using namespace pixelgrasp::training;

namespace {

labels::GraspMaps single_pixel(float q, float c, float s, float w) {
  labels::GraspMaps m(1, 1);
  m.q.data[0] = q;
  m.cos2phi.data[0] = c;
  m.sin2phi.data[0] = s;
  m.w.data[0] = w;
  return m;
}

model::ModelConfig tiny_config(std::size_t in = 2) {
  model::ModelConfig c;
  c.in_channels = in;
  c.input_side = 16;
  c.base_width = 4;
  c.levels = 2;
  c.seed = 3;
  return c;
}

std::vector<Example> toy_examples(std::size_t count, std::size_t in, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Example> out;
  for (std::size_t i = 0; i < count; ++i) {
    Example ex;
    ex.id = "toy" + std::to_string(i);
    ex.input = fixtures::random_tensor<float>(nn::Shape{1, in, 16, 16}, rng, 0.0, 1.0);
    ex.label = labels::GraspMaps(16, 16);
    const std::size_t r = 4 + rng() % 8, c = 4 + rng() % 8;
    for (std::size_t dr = 0; dr < 3; ++dr)
      for (std::size_t dc = 0; dc < 3; ++dc) {
        ex.label.q.at(r + dr, c + dc) = 1.0f;
        ex.label.cos2phi.at(r + dr, c + dc) = 1.0f;
        ex.label.w.at(r + dr, c + dc) = 0.2f;
      }
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace

TEST(Split, CornellSizedDataset) {
  std::vector<std::string> ids;
  for (int i = 0; i < 1035; ++i) ids.push_back("pcd" + std::to_string(i));
  const Split s = split_dataset(ids, 0.8, 1);
  EXPECT_EQ(s.train.size(), 828u);
  EXPECT_EQ(s.val.size(), 207u);
  std::set<std::string> all(s.train.begin(), s.train.end());
  all.insert(s.val.begin(), s.val.end());
  EXPECT_EQ(all.size(), 1035u);
}

TEST(Split, SingleSampleGoesToTraining) {
  const std::vector<std::string> ids{"only"};
  const Split s = split_dataset(ids, 0.8, 1);
  EXPECT_EQ(s.train.size(), 1u);
  EXPECT_TRUE(s.val.empty());
}

TEST(Split, SeedDeterminesOrder) {
  std::vector<std::string> ids;
  for (int i = 0; i < 50; ++i) ids.push_back(std::to_string(i));
  const Split a = split_dataset(ids, 0.8, 9), b = split_dataset(ids, 0.8, 9),
              c = split_dataset(ids, 0.8, 10);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.val, b.val);
  EXPECT_NE(a.train, c.train);
}

TEST(Split, EmptyDataset) {
  try {
    split_dataset({}, 0.8, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyDataset);
  }
}

TEST(CompositeLoss, EqualMapsAreZero) {
  const auto m = single_pixel(1, 0.5f, -0.5f, 0.3f);
  EXPECT_EQ(composite_loss(m, m, {}).total, 0.0);
}

TEST(CompositeLoss, SinglePixelHandValue) {
  const auto b = composite_loss(single_pixel(1, 1, 0, 1), single_pixel(0, 0, 0, 0), {});
  EXPECT_DOUBLE_EQ(b.total, 3.0);
  EXPECT_DOUBLE_EQ(b.q, 1.0);
  EXPECT_DOUBLE_EQ(b.sin2phi, 0.0);
}

TEST(CompositeLoss, WeightLinearity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> u(-1, 1);
  labels::GraspMaps a(5, 6), b(5, 6);
  for (auto* p : a.planes())
    for (auto& v : p->data) v = u(rng);
  for (auto* p : b.planes())
    for (auto& v : p->data) v = u(rng);
  LossWeights w;
  const auto base = composite_loss(a, b, w);
  w.q = 2.0;
  const auto doubled = composite_loss(a, b, w);
  EXPECT_NEAR(doubled.total - base.total, base.q, 1e-12);
  EXPECT_GE(base.total, 0.0);
}

TEST(CompositeLoss, ShapeMismatch) {
  EXPECT_THROW(composite_loss(labels::GraspMaps(2, 2), labels::GraspMaps(2, 3), {}), Error);
}

TEST(CompositeLoss, GraphFormMatchesPlainEvaluation) {
  const auto ex = toy_examples(1, 2, 5);
  const model::UGNet net(tiny_config());
  LossWeights w{0.5, 2.0, 1.0, 3.0};
  const double plain = composite_loss(net.predict(ex[0].input), ex[0].label, w).total;

  nn::Graph<float> g;
  const auto heads = model::UGNet::forward(net.config(), g, net.parameters(), g.constant(ex[0].input));
  nn::Tensor<float> lab(nn::Shape{1, 4, 16, 16});
  const auto arr = labels::maps_to_array(ex[0].label);
  std::copy(arr.values.begin(), arr.values.end(), lab.data());
  const double graph = g.value(composite_loss(g, heads, g.constant(lab), w)).item();
  EXPECT_NEAR(graph, plain, 1e-5 * std::max(1.0, plain));
}

TEST(CompositeLoss, GradientCheckThroughNetwork) {
  const auto ex = toy_examples(1, 2, 6);
  model::ModelConfig c = tiny_config();
  c.input_side = 8;
  c.base_width = 2;
  c.levels = 1;
  auto params = model::UGNet(c).parameters().cast<double>();
  std::mt19937_64 rng(1);
  const auto x = fixtures::random_tensor<double>(nn::Shape{1, 2, 8, 8}, rng, 0, 1);
  const auto lab = fixtures::random_tensor<double>(nn::Shape{1, 4, 8, 8}, rng);
  const auto report = nn::grad_check(
      [&](nn::Graph<double>& g, nn::ParameterSet<double>& p) {
        const auto heads = model::UGNet::forward(c, g, p, g.constant(x));
        return composite_loss(g, heads, g.constant(lab), LossWeights{1, 0.5, 2, 1});
      },
      params);
  EXPECT_LT(report.max_relative_error, 1e-3);
}

TEST(Train, ZeroEpochsLeavesModelUnchanged) {
  const auto data = toy_examples(4, 2, 7);
  model::UGNet net(tiny_config());
  const auto before = net.checksum();
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto log = train(net, data, {}, cfg);
  EXPECT_TRUE(log.empty());
  EXPECT_EQ(net.checksum(), before);
}

TEST(Train, EmptyTrainingSet) {
  model::UGNet net(tiny_config());
  EXPECT_THROW(train(net, {}, {}, TrainConfig{}), Error);
}

TEST(Train, DeterministicLogsAndWeights) {
  const auto data = toy_examples(6, 2, 8);
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 4;
  cfg.seed = 11;
  model::UGNet a(tiny_config()), b(tiny_config());
  const auto la = train(a, std::span(data).first(5), std::span(data).last(1), cfg);
  const auto lb = train(b, std::span(data).first(5), std::span(data).last(1), cfg);
  ASSERT_EQ(la.size(), 3u);
  for (std::size_t i = 0; i < la.size(); ++i) {
    EXPECT_EQ(la[i].train_loss, lb[i].train_loss);
    EXPECT_EQ(la[i].val_loss, lb[i].val_loss);
  }
  EXPECT_EQ(a.checksum(), b.checksum());
}

TEST(Train, LossDecreasesOnToyData) {
  const auto data = toy_examples(4, 2, 9);
  TrainConfig cfg;
  cfg.epochs = 40;
  cfg.batch_size = 4;
  cfg.adam.lr = 3e-3;
  model::UGNet net(tiny_config());
  std::size_t calls = 0;
  const auto log = train(net, data, {}, cfg, [&](const EpochLog&) { ++calls; });
  EXPECT_EQ(calls, 40u);
  EXPECT_LT(log.back().train_loss, 0.5 * log.front().train_loss);
}

TEST(Evaluate, ZeroWhenLabelsEqualOutputs) {
  const model::UGNet net(tiny_config());
  auto data = toy_examples(3, 2, 12);
  for (auto& ex : data) ex.label = net.predict(ex.input);
  EXPECT_EQ(evaluate(net, data, {}).mean.total, 0.0);
}

TEST(Evaluate, SingleSampleAndBreakdown) {
  const model::UGNet net(tiny_config());
  const auto data = toy_examples(1, 2, 13);
  const LossWeights w{1.5, 0.5, 2.0, 1.0};
  const auto ev = evaluate(net, data, w);
  const auto direct = composite_loss(net.predict(data[0].input), data[0].label, w);
  EXPECT_DOUBLE_EQ(ev.mean.total, direct.total);
  const double sum = w.q * ev.mean.q + w.cos2phi * ev.mean.cos2phi + w.sin2phi * ev.mean.sin2phi +
                     w.w * ev.mean.w;
  EXPECT_NEAR(sum, ev.mean.total, 1e-6);
}

TEST(Evaluate, LeavesParametersUntouched) {
  const model::UGNet net(tiny_config());
  const auto before = net.checksum();
  evaluate(net, toy_examples(3, 2, 14), {});
  EXPECT_EQ(net.checksum(), before);
  EXPECT_THROW(evaluate(net, {}, {}), Error);
}

TEST(TrainConfigJson, RoundtripAndValidation) {
  TrainConfig c;
  c.epochs = 7;
  c.adam.lr = 5e-4;
  c.weights.w = 2;
  const auto back = train_config_from_json(to_json(c));
  EXPECT_EQ(back.epochs, 7u);
  EXPECT_EQ(back.adam.lr, 5e-4);
  EXPECT_EQ(back.weights.w, 2.0);
  EXPECT_THROW(train_config_from_json({{"epoch", 3}}), Error);
  EXPECT_THROW(train_config_from_json({{"split_fraction", 1.0}}), Error);
  EXPECT_THROW(train_config_from_json({{"batch_size", 0}}), Error);
  EXPECT_THROW(train_config_from_json({{"loss_weights", {{"q", -1.0}}}}), Error);
}
