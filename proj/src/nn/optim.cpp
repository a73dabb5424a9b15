#include "pixelgrasp/nn/optim.hpp"

#include <cmath>

namespace pixelgrasp::nn {

void adam_step(ParameterSet<float>& params, AdamState& state) {
  if (state.m.empty() && state.v.empty()) {
    for (const auto& e : params.entries()) {
      state.m.emplace_back(e.value.shape());
      state.v.emplace_back(e.value.shape());
    }
  }
  if (state.m.size() != params.size() || state.v.size() != params.size())
    throw Error(ErrorCode::ShapeMismatch, "optimizer state does not match parameter count");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& e = params[i];
    if (!(state.m[i].shape() == e.value.shape()) || !(state.v[i].shape() == e.value.shape()) ||
        !(e.grad.shape() == e.value.shape()))
      throw Error(ErrorCode::ShapeMismatch, "optimizer state dims differ for " + e.name);
  }

  ++state.step;
  const AdamConfig& c = state.config;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(c.beta1, t);
  const double bc2 = 1.0 - std::pow(c.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& e = params[i];
    float* p = e.value.data();
    const float* g = e.grad.data();
    float* m = state.m[i].data();
    float* v = state.v[i].data();
    for (std::size_t k = 0; k < e.value.size(); ++k) {
      const double gk = g[k];
      const double mk = c.beta1 * m[k] + (1.0 - c.beta1) * gk;
      const double vk = c.beta2 * v[k] + (1.0 - c.beta2) * gk * gk;
      m[k] = static_cast<float>(mk);
      v[k] = static_cast<float>(vk);
      const double mhat = mk / bc1;
      const double vhat = vk / bc2;
      p[k] = static_cast<float>(p[k] - c.lr * mhat / (std::sqrt(vhat) + c.eps));
    }
  }
}

}  // namespace pixelgrasp::nn
