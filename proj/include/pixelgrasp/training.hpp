#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/model.hpp"
#include "pixelgrasp/nn/optim.hpp"

namespace pixelgrasp::training {

struct LossWeights {
  double q = 1.0;
  double cos2phi = 1.0;
  double sin2phi = 1.0;
  double w = 1.0;

  std::array<double, 4> as_array() const { return {q, cos2phi, sin2phi, w}; }
  void validate() const;
};

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 4;
  double split_fraction = 0.8;
  std::uint64_t seed = 0;
  nn::AdamConfig adam;
  LossWeights weights;

  void validate() const;
};

nlohmann::json to_json(const TrainConfig& config);
/// Rejects unknown keys. Loss weights live under "loss_weights", Adam under "adam".
TrainConfig train_config_from_json(const nlohmann::json& j);

struct Split {
  std::vector<std::string> train;
  std::vector<std::string> val;
};

/// Seeded shuffle; the training part receives ceil(fraction * N) ids.
Split split_dataset(std::span<const std::string> ids, double fraction, std::uint64_t seed);

/// One network input with its label maps. `input` is [1, C, H, W].
struct Example {
  std::string id;
  nn::Tensor<float> input;
  labels::GraspMaps label;
};

struct LossBreakdown {
  // Per-plane mean squared error, unweighted.
  double q = 0.0;
  double cos2phi = 0.0;
  double sin2phi = 0.0;
  double w = 0.0;
  double total = 0.0;  // weighted sum of the four terms
};

/// Sum over planes of lambda_k * mean((pred_k - label_k)^2), evaluated in double.
LossBreakdown composite_loss(const labels::GraspMaps& pred, const labels::GraspMaps& label,
                             const LossWeights& weights);

/// Graph form. `labels` is [N, 4, H, W] in plane order (q, cos2phi, sin2phi, w).
template <typename T>
nn::NodeId composite_loss(nn::Graph<T>& g, const model::HeadNodes& heads, nn::NodeId labels,
                          const LossWeights& weights);

struct EpochLog {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  std::optional<double> val_loss;
  double seconds = 0.0;
};

using ProgressSink = std::function<void(const EpochLog&)>;

/// Batches follow a per-epoch shuffle keyed by (seed, epoch); the last partial
/// batch is kept. The reported train loss is the sample-weighted mean of the
/// batch losses seen during the epoch.
std::vector<EpochLog> train(model::UGNet& net, std::span<const Example> train_set,
                            std::span<const Example> val_set, const TrainConfig& config,
                            const ProgressSink& sink = {});

struct Evaluation {
  LossBreakdown mean;
  std::size_t samples = 0;
};

/// Mean per-sample composite loss; parameters are not touched.
Evaluation evaluate(const model::UGNet& net, std::span<const Example> val_set,
                    const LossWeights& weights);

}  // namespace pixelgrasp::training
