#pragma once

// Reference implementations and randomized fixtures shared by the unit and
// acceptance suites.

#include <cmath>
#include <random>
#include <string>

#include "pixelgrasp/nn/graph.hpp"
#include "pixelgrasp/nn/ops.hpp"
#include "pixelgrasp/nn/tensor.hpp"

namespace fixtures {

using pixelgrasp::nn::Shape;
using pixelgrasp::nn::Tensor;

template <typename T>
Tensor<T> random_tensor(Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Tensor<T> t(shape);
  for (auto& v : t.values()) v = static_cast<T>(dist(rng));
  return t;
}

/// Six nested loops, accumulated in double. Kernel [O, C, K, K], bias [O] or empty.
inline Tensor<double> direct_conv(const Tensor<double>& x, const Tensor<double>& k,
                                  const Tensor<double>& bias, std::size_t stride, bool same) {
  const Shape s = x.shape(), ks = k.shape();
  const long pad = same ? static_cast<long>(ks.h / 2) : 0;
  const std::size_t oh = (s.h + 2 * pad - ks.h) / stride + 1;
  const std::size_t ow = (s.w + 2 * pad - ks.w) / stride + 1;
  Tensor<double> out(Shape{s.n, ks.n, oh, ow});
  for (std::size_t n = 0; n < s.n; ++n)
    for (std::size_t o = 0; o < ks.n; ++o)
      for (std::size_t y = 0; y < oh; ++y)
        for (std::size_t xx = 0; xx < ow; ++xx) {
          double acc = bias.empty() ? 0.0 : bias[o];
          for (std::size_t c = 0; c < s.c; ++c)
            for (std::size_t ky = 0; ky < ks.h; ++ky)
              for (std::size_t kx = 0; kx < ks.w; ++kx) {
                const long iy = static_cast<long>(y * stride + ky) - pad;
                const long ix = static_cast<long>(xx * stride + kx) - pad;
                if (iy < 0 || ix < 0 || iy >= static_cast<long>(s.h) || ix >= static_cast<long>(s.w))
                  continue;
                acc += x.at(n, c, static_cast<std::size_t>(iy), static_cast<std::size_t>(ix)) *
                       k.at(o, c, ky, kx);
              }
          out.at(n, o, y, xx) = acc;
        }
  return out;
}

/// Randomized conv/relu/pool/upsample/concat/mse composition for gradient checks.
struct GradCase {
  pixelgrasp::nn::ParameterSet<double> params;
  Tensor<double> target;
  std::size_t kernel = 3;
  std::string description;

  pixelgrasp::nn::NodeId build(pixelgrasp::nn::Graph<double>& g,
                               pixelgrasp::nn::ParameterSet<double>& p) const {
    namespace nn = pixelgrasp::nn;
    const nn::NodeId x = g.parameter(p, 0);
    const nn::NodeId a = nn::relu(g, nn::conv2d(g, x, g.parameter(p, 1), g.parameter(p, 2)));
    const nn::NodeId down = nn::maxpool2(g, a);
    const nn::NodeId up = nn::upsample_nearest2(g, down);
    const nn::NodeId joined = nn::concat_channels(g, up, a);
    const nn::NodeId y = nn::linear(g, nn::conv2d(g, joined, g.parameter(p, 3), g.parameter(p, 4)));
    return nn::mse(g, y, g.constant(target));
  }
};

inline GradCase make_grad_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::size_t n = 1 + rng() % 2;
  const std::size_t c = 1 + rng() % 3;
  const std::size_t hidden = 1 + rng() % 3;
  const std::size_t out = 1 + rng() % 2;
  const std::size_t side = (rng() % 2 == 0) ? 4 : 8;
  const std::size_t k1 = (rng() % 2 == 0) ? 1 : 3;
  const std::size_t k2 = (rng() % 2 == 0) ? 1 : 3;

  GradCase gc;
  gc.kernel = k1;
  gc.params.add("input", random_tensor<double>(Shape{n, c, side, side}, rng));
  gc.params.add("conv1.weight", random_tensor<double>(Shape{hidden, c, k1, k1}, rng, -0.8, 0.8));
  gc.params.add("conv1.bias", random_tensor<double>(Shape{1, hidden, 1, 1}, rng, -0.2, 0.2));
  gc.params.add("conv2.weight",
                random_tensor<double>(Shape{out, 2 * hidden, k2, k2}, rng, -0.8, 0.8));
  gc.params.add("conv2.bias", random_tensor<double>(Shape{1, out, 1, 1}, rng, -0.2, 0.2));
  gc.target = random_tensor<double>(Shape{n, out, side, side}, rng);
  gc.description = "n=" + std::to_string(n) + " c=" + std::to_string(c) + " side=" +
                   std::to_string(side) + " k=" + std::to_string(k1) + "/" + std::to_string(k2);
  return gc;
}

}  // namespace fixtures
