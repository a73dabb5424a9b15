#include "pixelgrasp/run_config.hpp"

#include <string>

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/error.hpp"

namespace pixelgrasp::run {

namespace {

std::function<void(const cfg::Json&)> into_range(prep::NormalizationRange& range) {
  return [&range](const cfg::Json& v) {
    const auto pair = v.get<std::array<double, 2>>();
    range = {pair[0], pair[1]};
  };
}

nlohmann::json range_json(prep::NormalizationRange range) { return {range.min, range.max}; }

std::string_view smoothing_name(decode::QSmoothing s) {
  switch (s) {
    case decode::QSmoothing::None: return "none";
    case decode::QSmoothing::Mean3x3: return "mean3x3";
    case decode::QSmoothing::Gaussian: return "gaussian";
  }
  return "none";
}

decode::QSmoothing parse_smoothing(const std::string& name) {
  if (name == "none") return decode::QSmoothing::None;
  if (name == "mean3x3") return decode::QSmoothing::Mean3x3;
  if (name == "gaussian") return decode::QSmoothing::Gaussian;
  throw Error(ErrorCode::InvalidConfig, "unknown smoothing '" + name + "'");
}

nlohmann::json to_json(const prep::AugmentConfig& a) {
  return {{"copies", a.copies},
          {"rotation_steps", a.rotation_steps},
          {"max_rotation", a.max_rotation},
          {"translation_jitter", a.translation_jitter},
          {"scale_jitter", a.scale_jitter},
          {"crop_fraction", a.crop_fraction}};
}

}  // namespace

void DataConfig::validate() const {
  if (side < 8) throw Error(ErrorCode::InvalidConfig, "data: side must be >= 8");
  if (!(depth_range.max > depth_range.min))
    throw Error(ErrorCode::InvalidConfig, "data: depth range needs max > min");
  if (augment.copies < 0) throw Error(ErrorCode::InvalidConfig, "data: augment copies must be >= 0");
  if (augment.rotation_steps < 0)
    throw Error(ErrorCode::InvalidConfig, "data: rotation_steps must be >= 0");
  if (!(augment.translation_jitter >= 0.0) || !(augment.scale_jitter >= 0.0 && augment.scale_jitter < 1.0))
    throw Error(ErrorCode::InvalidConfig, "data: jitter out of range");
  if (!(augment.crop_fraction > 0.0 && augment.crop_fraction <= 1.0))
    throw Error(ErrorCode::InvalidConfig, "data: crop_fraction must lie in (0, 1]");
}

void SimSettings::validate() const {
  if (scenes == 0) throw Error(ErrorCode::InvalidConfig, "sim: scenes must be >= 1");
  scene.validate();
  setup.validate();
  controller.validate();
}

nlohmann::json to_json(const sim::ControllerConfig& c) {
  return {{"smoothing", smoothing_name(c.decode.smoothing)},
          {"sigma", c.decode.sigma},
          {"width_margin", c.width_margin},
          {"grasp_depth", c.grasp_depth},
          {"table_clearance", c.table_clearance},
          {"max_retries", c.max_retries},
          {"depth_range", range_json(c.depth_range)},
          {"max_width", c.oracle.max_width},
          {"antipodal_tolerance", c.oracle.antipodal_tolerance}};
}

sim::ControllerConfig controller_from_json(const nlohmann::json& j) {
  sim::ControllerConfig c;
  cfg::read_object(
      j, "sim.controller",
      {{"smoothing", [&c](const cfg::Json& v) { c.decode.smoothing = parse_smoothing(v.get<std::string>()); }},
       {"sigma", cfg::into(c.decode.sigma)},
       {"width_margin", cfg::into(c.width_margin)},
       {"grasp_depth", cfg::into(c.grasp_depth)},
       {"table_clearance", cfg::into(c.table_clearance)},
       {"max_retries", cfg::into(c.max_retries)},
       {"depth_range", into_range(c.depth_range)},
       {"max_width", cfg::into(c.oracle.max_width)},
       {"antipodal_tolerance", cfg::into(c.oracle.antipodal_tolerance)}});
  c.validate();
  return c;
}

RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig rc;
  cfg::read_object(
      j, "config",
      {{"data",
        [&rc](const cfg::Json& d) {
          DataConfig& data = rc.data;
          cfg::read_object(
              d, "data",
              {{"side", cfg::into(data.side)},
               {"depth_range", into_range(data.depth_range)},
               {"seed", cfg::into(data.seed)},
               {"augment", [&data](const cfg::Json& a) {
                  prep::AugmentConfig& aug = data.augment;
                  cfg::read_object(a, "data.augment",
                                   {{"copies", cfg::into(aug.copies)},
                                    {"rotation_steps", cfg::into(aug.rotation_steps)},
                                    {"max_rotation", cfg::into(aug.max_rotation)},
                                    {"translation_jitter", cfg::into(aug.translation_jitter)},
                                    {"scale_jitter", cfg::into(aug.scale_jitter)},
                                    {"crop_fraction", cfg::into(aug.crop_fraction)}});
                }}});
          data.validate();
        }},
       {"model", [&rc](const cfg::Json& m) { rc.model = model::model_config_from_json(m); }},
       {"train", [&rc](const cfg::Json& t) { rc.train = training::train_config_from_json(t); }},
       {"camera", [&rc](const cfg::Json& c) { rc.camera = decode::camera_from_json(c); }},
       {"sim", [&rc](const cfg::Json& s) {
          SimSettings& st = rc.sim;
          cfg::read_object(
              s, "sim",
              {{"scenes", cfg::into(st.scenes)},
               {"seed", cfg::into(st.seed)},
               {"side", cfg::into(st.setup.side)},
               {"height", cfg::into(st.setup.height)},
               {"dropout_base", cfg::into(st.setup.dropout_base)},
               {"noise_sigma", cfg::into(st.setup.noise_sigma)},
               {"channels",
                [&st](const cfg::Json& v) { st.channels = sim::parse_channels(v.get<std::string>()); }},
               {"include_timing", cfg::into(st.include_timing)},
               {"scene", [&st](const cfg::Json& v) { st.scene = sim::scene_params_from_json(v); }},
               {"controller",
                [&st](const cfg::Json& v) { st.controller = controller_from_json(v); }}});
          st.validate();
        }}});
  return rc;
}

nlohmann::json to_json(const RunConfig& rc) {
  nlohmann::json j;
  j["data"] = {{"side", rc.data.side},
               {"depth_range", range_json(rc.data.depth_range)},
               {"seed", rc.data.seed},
               {"augment", to_json(rc.data.augment)}};
  j["model"] = model::to_json(rc.model);
  j["train"] = training::to_json(rc.train);
  if (rc.camera) j["camera"] = decode::to_json(*rc.camera);
  const SimSettings& s = rc.sim;
  j["sim"] = {{"scenes", s.scenes},
              {"seed", s.seed},
              {"side", s.setup.side},
              {"height", s.setup.height},
              {"dropout_base", s.setup.dropout_base},
              {"noise_sigma", s.setup.noise_sigma},
              {"channels", sim::to_string(s.channels)},
              {"include_timing", s.include_timing},
              {"scene", sim::to_json(s.scene)},
              {"controller", to_json(s.controller)}};
  return j;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  const std::string text = io::read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
  }
  return run_config_from_json(j);
}

}  // namespace pixelgrasp::run
