#pragma once

// Whole-run JSON configuration shared by the command line tools.

#include <array>
#include <filesystem>
#include <optional>

#include "json.hpp"
#include "pixelgrasp/grasp_decode.hpp"
#include "pixelgrasp/model.hpp"
#include "pixelgrasp/preprocess.hpp"
#include "pixelgrasp/simworld.hpp"
#include "pixelgrasp/training.hpp"

namespace pixelgrasp::run {

struct DataConfig {
  std::size_t side = 304;
  prep::NormalizationRange depth_range = prep::kDefaultDepthRange;
  prep::AugmentConfig augment;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SimSettings {
  std::size_t scenes = 50;
  std::uint64_t seed = 0;
  sim::SceneParams scene;
  sim::ObservationSetup setup;
  sim::Channels channels = sim::Channels::Rgbd;
  sim::ControllerConfig controller;
  bool include_timing = false;

  void validate() const;
};

/// Observation heights compared by the benchmark, meters.
inline constexpr std::array<double, 3> kBenchmarkHeights{0.35, 0.45, 0.55};

struct RunConfig {
  DataConfig data;
  model::ModelConfig model;
  training::TrainConfig train;
  std::optional<decode::CameraModel> camera;
  SimSettings sim;
};

/// Sections data, model, train, camera and sim; all optional, unknown keys
/// rejected, every section validated.
RunConfig run_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

/// Reads and validates a config file. IoError or InvalidConfig.
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const sim::ControllerConfig& config);
sim::ControllerConfig controller_from_json(const nlohmann::json& j);

}  // namespace pixelgrasp::run
