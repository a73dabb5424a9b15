#include "dataset_dir.hpp"

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/error.hpp"

namespace pixelgrasp::cli {

namespace {

std::filesystem::path input_path(const std::filesystem::path& dir, const std::string& id) {
  return dir / (id + ".input.ugt");
}

std::filesystem::path labels_path(const std::filesystem::path& dir, const std::string& id) {
  return dir / (id + ".labels.ugt");
}

}  // namespace

nlohmann::json to_json(const Manifest& m) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : m.samples)
    samples.push_back({{"id", s.id},
                       {"pos_rects", s.pos_rects},
                       {"neg_rects", s.neg_rects},
                       {"dropped_groups", s.dropped_groups}});
  return {{"source", m.source},
          {"side", m.side},
          {"channels", m.channels},
          {"depth_range", {m.depth_range.min, m.depth_range.max}},
          {"samples", samples}};
}

Manifest manifest_from_json(const nlohmann::json& j) {
  Manifest m;
  cfg::read_object(
      j, "manifest",
      {{"source", cfg::into(m.source)},
       {"side", cfg::into(m.side)},
       {"channels", cfg::into(m.channels)},
       {"depth_range",
        [&m](const cfg::Json& v) {
          const auto r = v.get<std::array<double, 2>>();
          m.depth_range = {r[0], r[1]};
        }},
       {"samples", [&m](const cfg::Json& v) {
          if (!v.is_array()) throw Error(ErrorCode::InvalidConfig, "manifest samples must be an array");
          for (const auto& item : v) {
            ManifestEntry e;
            cfg::read_object(item, "manifest.samples",
                             {{"id", cfg::into(e.id)},
                              {"pos_rects", cfg::into(e.pos_rects)},
                              {"neg_rects", cfg::into(e.neg_rects)},
                              {"dropped_groups", cfg::into(e.dropped_groups)}});
            m.samples.push_back(std::move(e));
          }
        }}});
  return m;
}

void write_manifest(const std::filesystem::path& dir, const Manifest& manifest) {
  io::write_text_file(dir / "manifest.json", to_json(manifest).dump(2) + "\n");
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_text_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

void write_sample(const std::filesystem::path& dir, const std::string& id,
                  const nn::Tensor<float>& input, const labels::GraspMaps& label) {
  const nn::Shape s = input.shape();
  io::FloatArray array;
  array.dims = {static_cast<std::uint32_t>(s.c), static_cast<std::uint32_t>(s.h),
                static_cast<std::uint32_t>(s.w)};
  array.values = input.storage();
  io::write_file(input_path(dir, id), io::write_tensor(array));
  io::write_file(labels_path(dir, id), io::write_tensor(labels::maps_to_array(label)));
}

nn::Tensor<float> array_to_input(const io::FloatArray& array) {
  const auto& d = array.dims;
  if (d.size() == 3) return nn::Tensor<float>(nn::Shape{1, d[0], d[1], d[2]}, array.values);
  if (d.size() == 4 && d[0] == 1)
    return nn::Tensor<float>(nn::Shape{1, d[1], d[2], d[3]}, array.values);
  throw Error(ErrorCode::InvalidShape, "network input must be [C, H, W] or [1, C, H, W]");
}

nn::Tensor<float> select_channels(const nn::Tensor<float>& input, std::size_t channels) {
  const nn::Shape s = input.shape();
  if (s.c == channels) return input;
  nn::Tensor<float> out(nn::Shape{1, channels, s.h, s.w});
  const std::size_t n = s.spatial();
  const float* depth = input.data() + (s.c - 1) * n;
  if (channels == 1) {
    std::copy(depth, depth + n, out.data());
    return out;
  }
  if (channels == 2 && s.c == 4) {
    const float* r = input.data();
    for (std::size_t i = 0; i < n; ++i)
      out[i] = static_cast<float>(0.299 * r[i] + 0.587 * r[n + i] + 0.114 * r[2 * n + i]);
    std::copy(depth, depth + n, out.data() + n);
    return out;
  }
  throw Error(ErrorCode::InvalidShape, "cannot reduce " + std::to_string(s.c) + " input channels to " +
                                           std::to_string(channels));
}

std::vector<training::Example> load_examples(const std::filesystem::path& dir,
                                             const Manifest& manifest, std::size_t channels) {
  std::vector<training::Example> out;
  out.reserve(manifest.samples.size());
  for (const auto& entry : manifest.samples) {
    training::Example ex;
    ex.id = entry.id;
    ex.input = select_channels(array_to_input(io::read_tensor(io::read_file(input_path(dir, entry.id)))),
                               channels);
    ex.label = labels::array_to_maps(io::read_tensor(io::read_file(labels_path(dir, entry.id))));
    if (ex.label.rows() != ex.input.shape().h || ex.label.cols() != ex.input.shape().w)
      throw Error(ErrorCode::InvalidShape, entry.id + ": labels do not match the input size");
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace pixelgrasp::cli
