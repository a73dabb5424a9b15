#pragma once

#include <span>

#include "pixelgrasp/nn/graph.hpp"
#include "pixelgrasp/nn/tensor.hpp"

namespace pixelgrasp::nn {

enum class Padding { Same, Valid };

struct Conv2dOptions {
  std::size_t stride = 1;
  Padding padding = Padding::Same;
};

/// Output extents of a convolution; throws ShapeMismatch on inconsistent operands.
Shape conv2d_output_shape(const Shape& input, const Shape& kernel, Conv2dOptions options);

// Graph-free kernels. Kernel layout is [out_channels, in_channels, k, k]; bias is
// [1, out_channels, 1, 1] or empty.
template <typename T>
Tensor<T> conv2d_forward(const Tensor<T>& input, const Tensor<T>& kernel, const Tensor<T>& bias,
                         Conv2dOptions options);

template <typename T>
struct Conv2dGrads {
  Tensor<T> input;
  Tensor<T> kernel;
  Tensor<T> bias;
};

template <typename T>
Conv2dGrads<T> conv2d_backward(const Tensor<T>& input, const Tensor<T>& kernel,
                               const Tensor<T>& upstream, Conv2dOptions options, bool want_input);

// Graph ops.
template <typename T>
NodeId conv2d(Graph<T>& g, NodeId input, NodeId kernel, NodeId bias, Conv2dOptions options = {});

template <typename T>
NodeId relu(Graph<T>& g, NodeId x);

/// Identity activation (the heads' "linear" output).
template <typename T>
NodeId linear(Graph<T>& g, NodeId x);

/// 2x2 non-overlapping max; gradient routed to the first row-major maximum.
template <typename T>
NodeId maxpool2(Graph<T>& g, NodeId x);

template <typename T>
NodeId upsample_nearest2(Graph<T>& g, NodeId x);

/// Channels of `a` followed by channels of `b`.
template <typename T>
NodeId concat_channels(Graph<T>& g, NodeId a, NodeId b);

/// (1/n) sum (a - b)^2 as a scalar node.
template <typename T>
NodeId mse(Graph<T>& g, NodeId a, NodeId b);

/// sum_i weights[i] * scalars[i].
template <typename T>
NodeId weighted_sum(Graph<T>& g, std::span<const NodeId> scalars, std::span<const double> weights);

/// Copies one channel out of an NCHW node.
template <typename T>
NodeId select_channel(Graph<T>& g, NodeId x, std::size_t channel);

}  // namespace pixelgrasp::nn
