#include "pixelgrasp/nn/grad_check.hpp"

#include <algorithm>
#include <cmath>

namespace pixelgrasp::nn {
namespace {

struct Probe {
  double value;
  std::uint64_t signature;
};

Probe evaluate(const ScalarBuilder& build, ParameterSet<double>& params) {
  Graph<double> g(/*track_decisions=*/true);
  const NodeId out = build(g, params);
  if (g.value(out).size() != 1)
    throw Error(ErrorCode::NonScalarOutput,
                "grad_check needs a scalar output, got " + g.value(out).shape().to_string());
  return {g.value(out)[0], g.decision_signature()};
}

}  // namespace

GradCheckReport grad_check(const ScalarBuilder& build, ParameterSet<double>& params, double eps) {
  params.zero_grad();
  std::uint64_t base_signature = 0;
  {
    Graph<double> g(/*track_decisions=*/true);
    const NodeId out = build(g, params);
    if (g.value(out).size() != 1)
      throw Error(ErrorCode::NonScalarOutput,
                  "grad_check needs a scalar output, got " + g.value(out).shape().to_string());
    g.backward(out);
    base_signature = g.decision_signature();
  }

  GradCheckReport report;
  for (std::size_t p = 0; p < params.size(); ++p) {
    for (std::size_t i = 0; i < params[p].value.size(); ++i) {
      double& x = params[p].value[i];
      const double saved = x;
      x = saved + eps;
      const Probe plus = evaluate(build, params);
      x = saved - eps;
      const Probe minus = evaluate(build, params);
      x = saved;

      if (plus.signature != base_signature || minus.signature != base_signature) {
        ++report.skipped;
        continue;
      }
      const double numeric = (plus.value - minus.value) / (2.0 * eps);
      const double analytic = params[p].grad[i];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double err = std::abs(analytic - numeric) / denom;
      ++report.checked;
      if (err > report.max_relative_error) {
        report.max_relative_error = err;
        report.worst_parameter = params[p].name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace pixelgrasp::nn
