#pragma once

// Encoder-decoder grasp network with four single-channel linear heads, and the
// UGCK checkpoint format.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/nn/graph.hpp"
#include "pixelgrasp/nn/tensor.hpp"

namespace pixelgrasp::model {

enum class UpMode { NearestConv };

struct ModelConfig {
  std::size_t in_channels = 4;  // 1 (depth), 2 (grey+depth) or 4 (rgb+depth)
  std::size_t input_side = 304;
  std::size_t base_width = 16;
  std::size_t levels = 4;
  UpMode up_mode = UpMode::NearestConv;
  std::uint64_t seed = 0;

  /// Throws InvalidConfig.
  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

nlohmann::json to_json(const ModelConfig& config);
/// Unknown keys are rejected; missing keys keep their defaults.
ModelConfig model_config_from_json(const nlohmann::json& j);

struct ConvSpec {
  std::string name;
  std::size_t in_channels;
  std::size_t out_channels;
  std::size_t kernel;

  std::size_t weight_count() const { return out_channels * in_channels * kernel * kernel; }
};

/// Every convolution in parameter declaration order.
std::vector<ConvSpec> layer_plan(const ModelConfig& config);

/// Closed-form kernel + bias element count.
std::size_t param_count(const ModelConfig& config);

struct HeadNodes {
  nn::NodeId q;
  nn::NodeId cos2phi;
  nn::NodeId sin2phi;
  nn::NodeId w;

  std::array<nn::NodeId, 4> all() const { return {q, cos2phi, sin2phi, w}; }
};

class UGNet {
 public:
  /// Fresh network, He-uniform weights from config.seed, zero biases.
  explicit UGNet(const ModelConfig& config);
  /// Wraps existing parameters; throws CountMismatch if they do not fit the plan.
  UGNet(const ModelConfig& config, nn::ParameterSet<float> params);

  const ModelConfig& config() const { return config_; }
  nn::ParameterSet<float>& parameters() { return params_; }
  const nn::ParameterSet<float>& parameters() const { return params_; }

  /// Appends the forward pass to `g`. `input` must be [N, in_channels, H, W]
  /// with H and W divisible by 2^levels. Parameter order follows layer_plan().
  /// A const parameter set enters the graph as constants (inference only).
  template <typename T, typename Params>
  static HeadNodes forward(const ModelConfig& config, nn::Graph<T>& g, Params& params,
                           nn::NodeId input);

  /// Inference on a [1, C, H, W] tensor.
  labels::GraspMaps predict(const nn::Tensor<float>& input) const;

  /// FNV-1a over all parameter bytes.
  std::uint64_t checksum() const;

 private:
  ModelConfig config_;
  nn::ParameterSet<float> params_;
};

inline constexpr std::array<char, 4> kCheckpointMagic = {'U', 'G', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> save_checkpoint(const UGNet& net);
UGNet load_checkpoint(std::span<const std::uint8_t> bytes);

}  // namespace pixelgrasp::model
