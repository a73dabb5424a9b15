#include "pixelgrasp/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/nn/ops.hpp"
#include "pixelgrasp/random.hpp"

namespace pixelgrasp::training {
namespace {

void require_same_dims(const Plane& a, const Plane& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    throw Error(ErrorCode::ShapeMismatch, "loss planes differ: " + std::to_string(a.rows) + "x" +
                                              std::to_string(a.cols) + " vs " +
                                              std::to_string(b.rows) + "x" + std::to_string(b.cols));
}

double plane_mse(const Plane& a, const Plane& b) {
  require_same_dims(a, b);
  if (a.size() == 0) throw Error(ErrorCode::ShapeMismatch, "loss on empty planes");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a.data[i]) - static_cast<double>(b.data[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

// Stacks examples [first, first + count) of `order` into input and label batches.
std::pair<nn::Tensor<float>, nn::Tensor<float>> assemble(std::span<const Example> set,
                                                         std::span<const std::size_t> order) {
  const nn::Shape in0 = set[order[0]].input.shape();
  const std::size_t rows = set[order[0]].label.rows(), cols = set[order[0]].label.cols();
  const std::size_t b = order.size();
  nn::Tensor<float> inputs(nn::Shape{b, in0.c, in0.h, in0.w});
  nn::Tensor<float> targets(nn::Shape{b, 4, rows, cols});
  const std::size_t plane = rows * cols;
  for (std::size_t i = 0; i < b; ++i) {
    const Example& ex = set[order[i]];
    if (!(ex.input.shape() == in0) || ex.label.rows() != rows || ex.label.cols() != cols)
      throw Error(ErrorCode::ShapeMismatch, "example " + ex.id + " differs in shape from its batch");
    std::copy(ex.input.values().begin(), ex.input.values().end(),
              inputs.data() + i * in0.image_size());
    const auto planes = ex.label.planes();
    for (std::size_t k = 0; k < 4; ++k)
      std::copy(planes[k]->data.begin(), planes[k]->data.end(),
                targets.data() + (i * 4 + k) * plane);
  }
  return {std::move(inputs), std::move(targets)};
}

}  // namespace

void LossWeights::validate() const {
  for (double v : as_array())
    if (!(v >= 0.0) || !std::isfinite(v))
      throw Error(ErrorCode::InvalidConfig, "loss weights must be finite and >= 0");
}

void TrainConfig::validate() const {
  if (!(split_fraction > 0.0 && split_fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "split_fraction must lie in (0, 1)");
  if (batch_size < 1) throw Error(ErrorCode::InvalidConfig, "batch_size must be >= 1");
  if (!(adam.lr > 0.0)) throw Error(ErrorCode::InvalidConfig, "learning rate must be positive");
  weights.validate();
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"split_fraction", c.split_fraction},
          {"seed", c.seed},
          {"adam",
           {{"lr", c.adam.lr}, {"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"eps", c.adam.eps}}},
          {"loss_weights",
           {{"q", c.weights.q},
            {"cos2phi", c.weights.cos2phi},
            {"sin2phi", c.weights.sin2phi},
            {"w", c.weights.w}}}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  cfg::read_object(
      j, "train",
      {{"epochs", cfg::into(c.epochs)},
       {"batch_size", cfg::into(c.batch_size)},
       {"split_fraction", cfg::into(c.split_fraction)},
       {"seed", cfg::into(c.seed)},
       {"adam",
        [&c](const cfg::Json& a) {
          cfg::read_object(a, "train.adam",
                           {{"lr", cfg::into(c.adam.lr)},
                            {"beta1", cfg::into(c.adam.beta1)},
                            {"beta2", cfg::into(c.adam.beta2)},
                            {"eps", cfg::into(c.adam.eps)}});
        }},
       {"loss_weights", [&c](const cfg::Json& w) {
          cfg::read_object(w, "train.loss_weights",
                           {{"q", cfg::into(c.weights.q)},
                            {"cos2phi", cfg::into(c.weights.cos2phi)},
                            {"sin2phi", cfg::into(c.weights.sin2phi)},
                            {"w", cfg::into(c.weights.w)}});
        }}});
  c.validate();
  return c;
}

Split split_dataset(std::span<const std::string> ids, double fraction, std::uint64_t seed) {
  if (ids.empty()) throw Error(ErrorCode::EmptyDataset, "cannot split an empty dataset");
  if (!(fraction > 0.0 && fraction < 1.0))
    throw Error(ErrorCode::InvalidConfig, "split fraction must lie in (0, 1)");
  std::vector<std::string> shuffled(ids.begin(), ids.end());
  Rng rng(derive_seed(seed, 0x5917ull));
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[uniform_index(rng, i)]);
  const auto n_train = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(ids.size())));
  Split s;
  s.train.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.val.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
  return s;
}

LossBreakdown composite_loss(const labels::GraspMaps& pred, const labels::GraspMaps& label,
                             const LossWeights& weights) {
  LossBreakdown b;
  b.q = plane_mse(pred.q, label.q);
  b.cos2phi = plane_mse(pred.cos2phi, label.cos2phi);
  b.sin2phi = plane_mse(pred.sin2phi, label.sin2phi);
  b.w = plane_mse(pred.w, label.w);
  b.total = weights.q * b.q + weights.cos2phi * b.cos2phi + weights.sin2phi * b.sin2phi +
            weights.w * b.w;
  return b;
}

template <typename T>
nn::NodeId composite_loss(nn::Graph<T>& g, const model::HeadNodes& heads, nn::NodeId labels,
                          const LossWeights& weights) {
  const auto outputs = heads.all();
  std::array<nn::NodeId, 4> terms{};
  for (std::size_t k = 0; k < 4; ++k)
    terms[k] = nn::mse(g, outputs[k], nn::select_channel(g, labels, k));
  const auto w = weights.as_array();
  return nn::weighted_sum<T>(g, terms, w);
}

template nn::NodeId composite_loss(nn::Graph<float>&, const model::HeadNodes&, nn::NodeId,
                                   const LossWeights&);
template nn::NodeId composite_loss(nn::Graph<double>&, const model::HeadNodes&, nn::NodeId,
                                   const LossWeights&);

std::vector<EpochLog> train(model::UGNet& net, std::span<const Example> train_set,
                            std::span<const Example> val_set, const TrainConfig& config,
                            const ProgressSink& sink) {
  config.validate();
  if (train_set.empty()) throw Error(ErrorCode::EmptyDataset, "training set is empty");

  std::vector<EpochLog> log;
  nn::AdamState adam;
  adam.config = config.adam;
  auto& params = net.parameters();
  std::vector<std::size_t> order(train_set.size());

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(derive_seed(config.seed, 0xE90Cull, epoch));
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[uniform_index(rng, i)]);

    double weighted_loss = 0.0;
    for (std::size_t first = 0; first < order.size(); first += config.batch_size) {
      const std::size_t count = std::min(config.batch_size, order.size() - first);
      auto [inputs, targets] =
          assemble(train_set, std::span<const std::size_t>(order).subspan(first, count));
      params.zero_grad();
      nn::Graph<float> g;
      const nn::NodeId x = g.constant(std::move(inputs));
      const auto heads = model::UGNet::forward(net.config(), g, params, x);
      const nn::NodeId loss = composite_loss(g, heads, g.constant(std::move(targets)), config.weights);
      weighted_loss += static_cast<double>(g.value(loss).item()) * static_cast<double>(count);
      g.backward(loss);
      nn::adam_step(params, adam);
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = weighted_loss / static_cast<double>(order.size());
    if (!val_set.empty()) entry.val_loss = evaluate(net, val_set, config.weights).mean.total;
    entry.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (sink) sink(entry);
    log.push_back(entry);
  }
  return log;
}

Evaluation evaluate(const model::UGNet& net, std::span<const Example> val_set,
                    const LossWeights& weights) {
  if (val_set.empty()) throw Error(ErrorCode::EmptyDataset, "evaluation set is empty");
  Evaluation ev;
  for (const Example& ex : val_set) {
    const LossBreakdown b = composite_loss(net.predict(ex.input), ex.label, weights);
    ev.mean.q += b.q;
    ev.mean.cos2phi += b.cos2phi;
    ev.mean.sin2phi += b.sin2phi;
    ev.mean.w += b.w;
    ev.mean.total += b.total;
  }
  ev.samples = val_set.size();
  const double n = static_cast<double>(ev.samples);
  ev.mean.q /= n;
  ev.mean.cos2phi /= n;
  ev.mean.sin2phi /= n;
  ev.mean.w /= n;
  ev.mean.total /= n;
  return ev;
}

}  // namespace pixelgrasp::training
