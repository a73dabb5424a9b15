#pragma once

// On-disk layout of a prepared dataset: manifest.json plus, per sample,
// <id>.input.ugt ([C, H, W] normalized network input, depth last) and
// <id>.labels.ugt ([4, H, W] label maps).

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/nn/tensor.hpp"
#include "pixelgrasp/preprocess.hpp"
#include "pixelgrasp/training.hpp"

namespace pixelgrasp::cli {

struct ManifestEntry {
  std::string id;
  std::size_t pos_rects = 0;
  std::size_t neg_rects = 0;
  std::size_t dropped_groups = 0;
};

struct Manifest {
  std::string source;  // "cornell" or "synthetic"
  std::size_t side = 0;
  std::size_t channels = 4;
  prep::NormalizationRange depth_range;
  std::vector<ManifestEntry> samples;
};

nlohmann::json to_json(const Manifest& manifest);
Manifest manifest_from_json(const nlohmann::json& j);

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest);
Manifest read_manifest(const std::filesystem::path& dir);

/// `input` is [1, C, H, W].
void write_sample(const std::filesystem::path& dir, const std::string& id,
                  const nn::Tensor<float>& input, const labels::GraspMaps& label);

/// Accepts [C, H, W] or [1, C, H, W].
nn::Tensor<float> array_to_input(const io::FloatArray& array);

/// Reduces a stacked input to `channels` planes: 4 -> 2 replaces RGB by its
/// luma, anything -> 1 keeps the depth plane. InvalidShape otherwise.
nn::Tensor<float> select_channels(const nn::Tensor<float>& input, std::size_t channels);

/// Loads every manifest sample with its input reduced to `channels`.
std::vector<training::Example> load_examples(const std::filesystem::path& dir,
                                             const Manifest& manifest, std::size_t channels);

}  // namespace pixelgrasp::cli
