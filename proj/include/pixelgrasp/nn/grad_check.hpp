#pragma once

#include <functional>
#include <string>

#include "pixelgrasp/nn/graph.hpp"

namespace pixelgrasp::nn {

struct GradCheckReport {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  // Elements whose +/- eps probes changed a relu sign or pool argmax; the
  // function is not differentiable across that interval so they are excluded.
  std::size_t skipped = 0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
};

/// Builds the graph on the given parameters and returns the scalar output node.
using ScalarBuilder = std::function<NodeId(Graph<double>&, ParameterSet<double>&)>;

/// Compares reverse-mode gradients against central differences
/// (f(x+eps) - f(x-eps)) / 2eps, everything in 64-bit. The error per element is
/// |a - n| / max(|a|, |n|, 1e-8); the maximum over all parameters is reported.
GradCheckReport grad_check(const ScalarBuilder& build, ParameterSet<double>& params,
                           double eps = 1e-4);

}  // namespace pixelgrasp::nn
