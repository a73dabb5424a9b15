#pragma once

#include <cstdint>
#include <vector>

#include "pixelgrasp/nn/graph.hpp"

namespace pixelgrasp::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First/second moment accumulators, one pair per parameter tensor.
struct AdamState {
  AdamConfig config;
  std::uint64_t step = 0;
  std::vector<Tensor<float>> m;
  std::vector<Tensor<float>> v;
};

/// One bias-corrected Adam update using the gradients stored in `params`.
/// Moments are created on the first call; later calls require matching dims.
void adam_step(ParameterSet<float>& params, AdamState& state);

}  // namespace pixelgrasp::nn
