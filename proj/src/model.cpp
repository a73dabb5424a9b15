#include "pixelgrasp/model.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/nn/ops.hpp"
#include "pixelgrasp/random.hpp"

namespace pixelgrasp::model {
namespace {

constexpr std::size_t kMaxLevels = 8;

std::size_t level_width(const ModelConfig& c, std::size_t level) { return c.base_width << level; }

nn::Tensor<float> he_uniform(const ConvSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  const double fan_in = static_cast<double>(spec.in_channels * spec.kernel * spec.kernel);
  const double limit = std::sqrt(6.0 / fan_in);
  nn::Tensor<float> w(nn::Shape{spec.out_channels, spec.in_channels, spec.kernel, spec.kernel});
  for (float& v : w.values()) v = static_cast<float>(uniform(rng, -limit, limit));
  return w;
}

void check_params(const ModelConfig& config, const nn::ParameterSet<float>& params) {
  const auto plan = layer_plan(config);
  if (params.size() != 2 * plan.size())
    throw Error(ErrorCode::CountMismatch, "expected " + std::to_string(2 * plan.size()) +
                                              " parameter tensors, got " +
                                              std::to_string(params.size()));
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& s = plan[i];
    const nn::Shape ws{s.out_channels, s.in_channels, s.kernel, s.kernel};
    const nn::Shape bs{1, s.out_channels, 1, 1};
    if (!(params[2 * i].value.shape() == ws) || !(params[2 * i + 1].value.shape() == bs))
      throw Error(ErrorCode::CountMismatch, "parameter dims differ for layer " + s.name);
  }
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint32_t>(
      ::crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

}  // namespace

void ModelConfig::validate() const {
  if (in_channels != 1 && in_channels != 2 && in_channels != 4)
    throw Error(ErrorCode::InvalidConfig, "in_channels must be 1, 2 or 4");
  if (base_width < 1) throw Error(ErrorCode::InvalidConfig, "base_width must be >= 1");
  if (levels < 1 || levels > kMaxLevels)
    throw Error(ErrorCode::InvalidConfig, "levels must be in [1, 8]");
  if (input_side == 0 || input_side % (std::size_t{1} << levels) != 0)
    throw Error(ErrorCode::InvalidConfig, "input_side " + std::to_string(input_side) +
                                              " is not divisible by 2^" + std::to_string(levels));
}

nlohmann::json to_json(const ModelConfig& c) {
  return {{"in_channels", c.in_channels}, {"input_side", c.input_side},
          {"base_width", c.base_width},   {"levels", c.levels},
          {"up_mode", "nearest+conv"},    {"seed", c.seed}};
}

ModelConfig model_config_from_json(const nlohmann::json& j) {
  ModelConfig c;
  cfg::read_object(j, "model",
                   {{"in_channels", cfg::into(c.in_channels)},
                    {"input_side", cfg::into(c.input_side)},
                    {"base_width", cfg::into(c.base_width)},
                    {"levels", cfg::into(c.levels)},
                    {"seed", cfg::into(c.seed)},
                    {"up_mode", [](const cfg::Json& v) {
                       if (v.get<std::string>() != "nearest+conv")
                         throw Error(ErrorCode::InvalidConfig, "unsupported up_mode " + v.dump());
                     }}});
  c.validate();
  return c;
}

std::vector<ConvSpec> layer_plan(const ModelConfig& c) {
  c.validate();
  std::vector<ConvSpec> plan;
  std::size_t in = c.in_channels;
  for (std::size_t i = 0; i < c.levels; ++i) {
    const std::size_t w = level_width(c, i);
    const std::string prefix = "enc" + std::to_string(i);
    plan.push_back({prefix + ".conv1", in, w, 3});
    plan.push_back({prefix + ".conv2", w, w, 3});
    in = w;
  }
  const std::size_t bottom = level_width(c, c.levels);
  plan.push_back({"bottleneck.conv1", in, bottom, 3});
  plan.push_back({"bottleneck.conv2", bottom, bottom, 3});
  in = bottom;
  for (std::size_t i = c.levels; i-- > 0;) {
    const std::size_t w = level_width(c, i);
    const std::string prefix = "dec" + std::to_string(i);
    plan.push_back({prefix + ".conv1", in + w, w, 3});
    plan.push_back({prefix + ".conv2", w, w, 3});
    in = w;
  }
  for (const char* head : {"head.q", "head.cos2phi", "head.sin2phi", "head.w"})
    plan.push_back({head, in, 1, 1});
  return plan;
}

std::size_t param_count(const ModelConfig& config) {
  std::size_t total = 0;
  for (const auto& s : layer_plan(config)) total += s.weight_count() + s.out_channels;
  return total;
}

UGNet::UGNet(const ModelConfig& config) : config_(config) {
  const auto plan = layer_plan(config_);
  for (std::size_t i = 0; i < plan.size(); ++i) {
    params_.add(plan[i].name + ".weight", he_uniform(plan[i], derive_seed(config_.seed, i)));
    params_.add(plan[i].name + ".bias", nn::Tensor<float>(nn::Shape{1, plan[i].out_channels, 1, 1}));
  }
}

UGNet::UGNet(const ModelConfig& config, nn::ParameterSet<float> params)
    : config_(config), params_(std::move(params)) {
  check_params(config_, params_);
}

template <typename T, typename Params>
HeadNodes UGNet::forward(const ModelConfig& config, nn::Graph<T>& g, Params& params,
                         nn::NodeId input) {
  const nn::Shape in_shape = g.value(input).shape();
  if (in_shape.c != config.in_channels)
    throw Error(ErrorCode::ShapeMismatch, "input has " + std::to_string(in_shape.c) +
                                              " channels, model expects " +
                                              std::to_string(config.in_channels));
  const std::size_t factor = std::size_t{1} << config.levels;
  if (in_shape.h % factor != 0 || in_shape.w % factor != 0)
    throw Error(ErrorCode::OddSpatialDims,
                "input " + in_shape.to_string() + " not divisible by " + std::to_string(factor));
  if (params.size() != 2 * (2 * config.levels + 2 + 2 * config.levels + 4))
    throw Error(ErrorCode::CountMismatch, "parameter set does not match the model config");

  std::size_t next = 0;
  auto conv = [&](nn::NodeId x) {
    const nn::NodeId w = g.parameter(params, next++);
    const nn::NodeId b = g.parameter(params, next++);
    return nn::conv2d(g, x, w, b);
  };
  auto double_conv = [&](nn::NodeId x) {
    x = nn::relu(g, conv(x));
    return nn::relu(g, conv(x));
  };

  std::vector<nn::NodeId> skips;
  nn::NodeId x = input;
  for (std::size_t i = 0; i < config.levels; ++i) {
    x = double_conv(x);
    skips.push_back(x);
    x = nn::maxpool2(g, x);
  }
  x = double_conv(x);
  for (std::size_t i = config.levels; i-- > 0;) {
    x = nn::upsample_nearest2(g, x);
    x = nn::concat_channels(g, x, skips[i]);
    x = double_conv(x);
  }
  HeadNodes heads;
  heads.q = nn::linear(g, conv(x));
  heads.cos2phi = nn::linear(g, conv(x));
  heads.sin2phi = nn::linear(g, conv(x));
  heads.w = nn::linear(g, conv(x));
  return heads;
}

template HeadNodes UGNet::forward(const ModelConfig&, nn::Graph<float>&, nn::ParameterSet<float>&,
                                  nn::NodeId);
template HeadNodes UGNet::forward(const ModelConfig&, nn::Graph<float>&,
                                  const nn::ParameterSet<float>&, nn::NodeId);
template HeadNodes UGNet::forward(const ModelConfig&, nn::Graph<double>&,
                                  nn::ParameterSet<double>&, nn::NodeId);

labels::GraspMaps UGNet::predict(const nn::Tensor<float>& input) const {
  if (input.shape().n != 1)
    throw Error(ErrorCode::ShapeMismatch, "predict takes a single image, got " +
                                              input.shape().to_string());
  nn::Graph<float> g;
  const nn::NodeId x = g.constant(input);
  const HeadNodes heads = forward(config_, g, params_, x);
  const std::size_t rows = input.shape().h;
  const std::size_t cols = input.shape().w;
  labels::GraspMaps maps(rows, cols);
  const auto nodes = heads.all();
  const auto planes = maps.planes();
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& t = g.value(nodes[k]);
    std::copy(t.values().begin(), t.values().end(), planes[k]->data.begin());
  }
  return maps;
}

std::uint64_t UGNet::checksum() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& e : params_.entries()) {
    const auto* bytes = reinterpret_cast<const std::uint8_t*>(e.value.data());
    for (std::size_t i = 0; i < e.value.size() * sizeof(float); ++i) {
      h ^= bytes[i];
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

std::vector<std::uint8_t> save_checkpoint(const UGNet& net) {
  std::vector<std::uint8_t> out(kCheckpointMagic.begin(), kCheckpointMagic.end());
  io::append_u32(out, kCheckpointVersion);
  const std::string config = to_json(net.config()).dump();
  io::append_u32(out, static_cast<std::uint32_t>(config.size()));
  out.insert(out.end(), config.begin(), config.end());

  const auto plan = layer_plan(net.config());
  const auto& params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& value = params[i].value;
    io::FloatArray blob;
    if (i % 2 == 0) {
      const auto& s = plan[i / 2];
      blob.dims = {static_cast<std::uint32_t>(s.out_channels),
                   static_cast<std::uint32_t>(s.in_channels), static_cast<std::uint32_t>(s.kernel),
                   static_cast<std::uint32_t>(s.kernel)};
    } else {
      blob.dims = {static_cast<std::uint32_t>(value.size())};
    }
    blob.values.assign(value.values().begin(), value.values().end());
    const auto bytes = io::write_tensor(blob);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  io::append_u32(out, crc32_of(out));
  return out;
}

UGNet load_checkpoint(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = 12;
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kCheckpointMagic.data(), 4) != 0)
    throw Error(ErrorCode::BadMagic, "not a UGCK checkpoint");
  if (bytes.size() < kHeader + 4)
    throw Error(ErrorCode::LengthMismatch, "checkpoint truncated");
  const std::size_t body = bytes.size() - 4;
  if (crc32_of(bytes.first(body)) != io::load_u32(bytes.data() + body))
    throw Error(ErrorCode::CrcMismatch, "checkpoint CRC32 mismatch");
  const std::uint32_t version = io::load_u32(bytes.data() + 4);
  if (version != kCheckpointVersion)
    throw Error(ErrorCode::VersionUnsupported,
                "checkpoint version " + std::to_string(version) + " is not supported");
  const std::uint32_t json_len = io::load_u32(bytes.data() + 8);
  if (kHeader + json_len > body) throw Error(ErrorCode::LengthMismatch, "config length overruns");

  ModelConfig config;
  try {
    const std::string_view text(reinterpret_cast<const char*>(bytes.data() + kHeader), json_len);
    config = model_config_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("checkpoint config: ") + e.what());
  }

  const auto plan = layer_plan(config);
  nn::ParameterSet<float> params;
  std::size_t offset = kHeader + json_len;
  std::size_t index = 0;
  while (offset < body) {
    if (index >= 2 * plan.size())
      throw Error(ErrorCode::CountMismatch, "checkpoint holds more tensors than the config needs");
    io::FloatArray blob;
    offset += io::read_tensor_prefix(bytes.subspan(offset, body - offset), blob);
    const auto& s = plan[index / 2];
    const bool weight = index % 2 == 0;
    const std::vector<std::uint32_t> expected =
        weight ? std::vector<std::uint32_t>{static_cast<std::uint32_t>(s.out_channels),
                                            static_cast<std::uint32_t>(s.in_channels),
                                            static_cast<std::uint32_t>(s.kernel),
                                            static_cast<std::uint32_t>(s.kernel)}
               : std::vector<std::uint32_t>{static_cast<std::uint32_t>(s.out_channels)};
    if (blob.dims != expected)
      throw Error(ErrorCode::CountMismatch, "tensor dims differ for layer " + s.name);
    const nn::Shape shape = weight ? nn::Shape{s.out_channels, s.in_channels, s.kernel, s.kernel}
                                   : nn::Shape{1, s.out_channels, 1, 1};
    params.add(s.name + (weight ? ".weight" : ".bias"),
               nn::Tensor<float>(shape, std::move(blob.values)));
    ++index;
  }
  if (index != 2 * plan.size())
    throw Error(ErrorCode::CountMismatch, "checkpoint holds " + std::to_string(index) +
                                              " tensors, config needs " +
                                              std::to_string(2 * plan.size()));
  return UGNet(config, std::move(params));
}

}  // namespace pixelgrasp::model
