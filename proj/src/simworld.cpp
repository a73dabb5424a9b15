#include "pixelgrasp/simworld.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <limits>
#include <optional>
#include <cmath>
#include <numbers>
#include <string>

#include "pixelgrasp/config_json.hpp"
#include "pixelgrasp/error.hpp"
#include "pixelgrasp/random.hpp"

namespace pixelgrasp::sim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxRejections = 1000;
// Absorbs rounding when a chord exactly equals the opening.
constexpr double kChordSlack = 1e-9;

double gaussian(Rng& rng) {
  // Box-Muller on the fixed uniform mapping keeps draws identical across standard libraries.
  const double u1 = 1.0 - uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

struct Local {
  double x;
  double y;
};

Local to_local(const SceneObject& o, double px, double py) {
  const double dx = px - o.x, dy = py - o.y;
  const double c = std::cos(o.orientation), s = std::sin(o.orientation);
  return {c * dx + s * dy, -s * dx + c * dy};
}

// Distinct flat colours whose luma stays well away from the table texture.
constexpr std::array<std::array<float, 3>, 8> kPalette{{{255, 220, 120},
                                                        {150, 255, 150},
                                                        {255, 180, 220},
                                                        {170, 220, 255},
                                                        {240, 240, 240},
                                                        {30, 30, 90},
                                                        {70, 20, 20},
                                                        {20, 60, 40}}};

struct Chord {
  double length = 0.0;
  Local n1;  // outward normal at the entry point
  Local n2;  // outward normal at the exit point
};

std::optional<Chord> ellipse_chord(const SceneObject& o, Local p, Local d) {
  const double ia = 1.0 / (o.a * o.a), ib = 1.0 / (o.b * o.b);
  const double qa = d.x * d.x * ia + d.y * d.y * ib;
  const double qb = 2.0 * (p.x * d.x * ia + p.y * d.y * ib);
  const double qc = p.x * p.x * ia + p.y * p.y * ib - 1.0;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return std::nullopt;
  const double root = std::sqrt(disc);
  const double t1 = (-qb - root) / (2.0 * qa), t2 = (-qb + root) / (2.0 * qa);
  const Local e1{p.x + t1 * d.x, p.y + t1 * d.y}, e2{p.x + t2 * d.x, p.y + t2 * d.y};
  return Chord{t2 - t1, {e1.x * ia, e1.y * ib}, {e2.x * ia, e2.y * ib}};
}

std::optional<Chord> box_chord(const SceneObject& o, Local p, Local d) {
  double t_enter = -std::numeric_limits<double>::infinity();
  double t_exit = std::numeric_limits<double>::infinity();
  Local n_enter{0, 0}, n_exit{0, 0};
  const std::array<double, 2> half{o.a, o.b}, pos{p.x, p.y}, dir{d.x, d.y};
  for (std::size_t k = 0; k < 2; ++k) {
    if (std::abs(dir[k]) < 1e-15) {
      if (std::abs(pos[k]) > half[k]) return std::nullopt;
      continue;
    }
    const double sign = dir[k] > 0 ? 1.0 : -1.0;
    const double lo = (-sign * half[k] - pos[k]) / dir[k];
    const double hi = (sign * half[k] - pos[k]) / dir[k];
    const Local axis = k == 0 ? Local{sign, 0} : Local{0, sign};
    if (lo > t_enter) t_enter = lo, n_enter = {-axis.x, -axis.y};
    if (hi < t_exit) t_exit = hi, n_exit = axis;
  }
  if (!(t_exit >= t_enter)) return std::nullopt;
  return Chord{t_exit - t_enter, n_enter, n_exit};
}

double angle_between(Local a, Local b) {
  const double na = std::hypot(a.x, a.y), nb = std::hypot(b.x, b.y);
  if (na == 0.0 || nb == 0.0) return kPi;
  const double c = std::clamp((a.x * b.x + a.y * b.y) / (na * nb), -1.0, 1.0);
  return std::acos(c);
}

nn::Tensor<float> stack_input(const io::RgbdSample& sample, const Plane& inpainted,
                              Channels channels, prep::NormalizationRange depth_range) {
  std::vector<Plane> planes;
  switch (channels) {
    case Channels::Depth: break;
    case Channels::GreyDepth:
      planes.push_back(prep::minmax_normalize(prep::rgb_to_grey(sample.rgb), prep::kRgbRange));
      break;
    case Channels::Rgbd:
      for (const Plane& c : sample.rgb.channels)
        planes.push_back(prep::minmax_normalize(c, prep::kRgbRange));
      break;
  }
  planes.push_back(prep::minmax_normalize(inpainted, depth_range));
  const std::size_t rows = sample.rows(), cols = sample.cols();
  nn::Tensor<float> out(nn::Shape{1, planes.size(), rows, cols});
  for (std::size_t k = 0; k < planes.size(); ++k)
    std::copy(planes[k].data.begin(), planes[k].data.end(), out.data() + k * rows * cols);
  return out;
}

}  // namespace

double SceneObject::bounding_radius() const {
  return shape == ShapeKind::Box ? std::hypot(a, b) : a;
}

bool SceneObject::contains(double px, double py) const {
  const Local l = to_local(*this, px, py);
  if (shape == ShapeKind::Box) return std::abs(l.x) <= a && std::abs(l.y) <= b;
  return (l.x * l.x) / (a * a) + (l.y * l.y) / (b * b) <= 1.0;
}

void SceneParams::validate() const {
  const auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, "scene: " + m); };
  if (min_objects > max_objects) fail("min_objects exceeds max_objects");
  if (!(a_min > 0.0 && a_max >= a_min)) fail("need 0 < a_min <= a_max");
  if (!(aspect_min > 0.0 && aspect_max >= aspect_min && aspect_max <= 1.0))
    fail("need 0 < aspect_min <= aspect_max <= 1");
  if (!(height_min > 0.0 && height_max >= height_min)) fail("need 0 < height_min <= height_max");
  if (!(min_gap >= 0.0)) fail("min_gap must be >= 0");
  if (!(box_fraction >= 0.0 && box_fraction <= 1.0)) fail("box_fraction must lie in [0, 1]");
  const double largest = box_fraction > 0.0 ? std::hypot(a_max, a_max * aspect_max) : a_max;
  if (max_objects > 0 && !(placement_half > largest))
    fail("placement_half must exceed the largest bounding radius");
}

Scene generate_scene(std::uint64_t seed, const SceneParams& params) {
  params.validate();
  Rng rng(derive_seed(seed, 0x5CE4Eull));
  Scene scene;
  const std::size_t count =
      params.min_objects + uniform_index(rng, params.max_objects - params.min_objects + 1);
  std::size_t rejections = 0;
  while (scene.objects.size() < count) {
    SceneObject o;
    o.shape = uniform01(rng) < params.box_fraction ? ShapeKind::Box : ShapeKind::Ellipse;
    o.a = uniform(rng, params.a_min, params.a_max);
    o.b = o.a * uniform(rng, params.aspect_min, params.aspect_max);
    o.orientation = uniform(rng, -kPi / 2, kPi / 2);
    o.height = uniform(rng, params.height_min, params.height_max);
    o.color = uniform_index(rng, kPalette.size());
    const double reach = params.placement_half - o.bounding_radius();
    o.x = uniform(rng, -reach, reach);
    o.y = uniform(rng, -reach, reach);
    const bool clear = std::all_of(scene.objects.begin(), scene.objects.end(), [&](const SceneObject& p) {
      return std::hypot(o.x - p.x, o.y - p.y) > o.bounding_radius() + p.bounding_radius() + params.min_gap;
    });
    if (clear) {
      scene.objects.push_back(o);
    } else if (++rejections >= kMaxRejections) {
      throw Error(ErrorCode::PlacementFailed,
                  "placed " + std::to_string(scene.objects.size()) + " of " + std::to_string(count) +
                      " objects after " + std::to_string(rejections) + " rejections");
    }
  }
  return scene;
}

void ObservationSetup::validate() const {
  if (side < 8) throw Error(ErrorCode::InvalidConfig, "sim: side must be >= 8");
  if (!(height > 0.0)) throw Error(ErrorCode::InvalidConfig, "sim: height must be positive");
  if (!(dropout_base >= 0.0 && dropout_base < 1.0))
    throw Error(ErrorCode::InvalidConfig, "sim: dropout base rate must lie in [0, 1)");
  if (!(noise_sigma >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sim: noise sigma must be >= 0");
}

double ObservationSetup::dropout_rate() const {
  return std::min(dropout_base * height / kReferenceHeight, std::nextafter(1.0, 0.0));
}

decode::CameraModel top_down_camera(std::size_t side, double height, double table_z) {
  decode::CameraModel cam;
  cam.fx = cam.fy = static_cast<double>(side) * kReferenceHeight / kReferenceFootprint;
  cam.cx = cam.cy = (static_cast<double>(side) - 1.0) / 2.0;
  // Camera x = robot x, camera y = -robot y, optical axis pointing down.
  cam.cam_to_robot = {1, 0, 0, 0, 0, -1, 0, 0, 0, 0, -1, table_z + height, 0, 0, 0, 1};
  return cam;
}

io::GraspRectangle ground_truth_rect(const SceneObject& o, const decode::CameraModel& camera,
                                     double table_z) {
  const auto top = decode::transform_point(decode::invert_rigid(camera.cam_to_robot),
                                           {o.x, o.y, table_z + o.height});
  // Continuous coordinates put pixel centres at +0.5.
  const double u = camera.fx * top.x / top.z + camera.cx + 0.5;
  const double v = camera.fy * top.y / top.z + camera.cy + 0.5;
  const double phi = decode::robot_angle_to_image(o.orientation + kPi / 2, camera);
  const double width = 2.0 * o.b * camera.fx / top.z;
  const double jaw = std::min(2.0 * o.a, 2.0 * o.b) * camera.fx / top.z;
  const double ex = std::cos(phi), ey = std::sin(phi);
  const double nx = -ey, ny = ex;
  const double hw = width / 2, hj = jaw / 2;
  io::GraspRectangle r;
  r.corners = {Point2{u - ex * hw - nx * hj, v - ey * hw - ny * hj},
               Point2{u - ex * hw + nx * hj, v - ey * hw + ny * hj},
               Point2{u + ex * hw + nx * hj, v + ey * hw + ny * hj},
               Point2{u + ex * hw - nx * hj, v + ey * hw - ny * hj}};
  return r;
}

decode::GraspPose ground_truth_grasp(const SceneObject& o, double table_z) {
  decode::GraspPose g;
  g.x = o.x;
  g.y = o.y;
  g.z = table_z + o.height;
  g.angle = labels::wrap_half_pi(o.orientation + kPi / 2);
  g.width = 2.0 * o.b;
  g.quality = 1.0;
  return g;
}

Observation render(const Scene& scene, const ObservationSetup& setup, std::uint64_t noise_seed) {
  setup.validate();
  const std::size_t side = setup.side;
  Observation obs;
  obs.table_z = scene.table_z;
  obs.camera = top_down_camera(side, setup.height, scene.table_z);
  const auto& cam = obs.camera;

  io::RgbdSample& s = obs.sample;
  s.id = "sim" + std::to_string(noise_seed);
  s.depth = Plane(side, side);
  s.depth_invalid = Mask(side, side);
  for (auto& c : s.rgb.channels) c = Plane(side, side);

  Rng texture(derive_seed(noise_seed, 0x7E47ull));
  for (std::size_t r = 0; r < side; ++r)
    for (std::size_t c = 0; c < side; ++c) {
      double best = setup.height;
      std::optional<std::size_t> hit;
      for (std::size_t i = 0; i < scene.objects.size(); ++i) {
        const SceneObject& o = scene.objects[i];
        const double d = setup.height - o.height;
        const auto p = decode::transform_point(
            cam.cam_to_robot, {(static_cast<double>(c) - cam.cx) * d / cam.fx,
                               (static_cast<double>(r) - cam.cy) * d / cam.fy, d});
        if (d < best && o.contains(p.x, p.y)) best = d, hit = i;
      }
      s.depth.at(r, c) = static_cast<float>(best);
      const double grain = 100.0 + 40.0 * uniform01(texture);
      const std::array<float, 3> rgb =
          hit ? kPalette[scene.objects[*hit].color]
              : std::array<float, 3>{static_cast<float>(grain), static_cast<float>(0.9 * grain),
                                     static_cast<float>(0.75 * grain)};
      for (std::size_t k = 0; k < 3; ++k) s.rgb.channels[k].at(r, c) = rgb[k];
    }

  Rng sensor(derive_seed(noise_seed, 0x5E45ull));
  const double rate = setup.dropout_rate();
  for (std::size_t i = 0; i < s.depth.size(); ++i) {
    if (uniform01(sensor) < rate) {
      s.depth.data[i] = 0.0f;
      s.depth_invalid.data[i] = 1;
    } else if (setup.noise_sigma > 0.0) {
      s.depth.data[i] += static_cast<float>(setup.noise_sigma * gaussian(sensor));
    }
  }

  for (const SceneObject& o : scene.objects)
    s.pos_rects.push_back(ground_truth_rect(o, cam, scene.table_z));
  return obs;
}

void OracleConfig::validate() const {
  if (!(max_width > 0.0)) throw Error(ErrorCode::InvalidConfig, "oracle: max_width must be positive");
  if (!(antipodal_tolerance >= 0.0 && antipodal_tolerance <= kPi))
    throw Error(ErrorCode::InvalidConfig, "oracle: antipodal tolerance must lie in [0, pi]");
}

std::string_view to_string(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::Success: return "success";
    case OracleVerdict::CenterOutside: return "center_outside";
    case OracleVerdict::ChordExceedsWidth: return "chord_exceeds_width";
    case OracleVerdict::WidthOverLimit: return "width_over_limit";
    case OracleVerdict::NotAntipodal: return "not_antipodal";
    case OracleVerdict::HeightOutside: return "height_outside";
  }
  return "unknown";
}

OracleResult oracle_grasp(const Scene& scene, const decode::GraspPose& g, const OracleConfig& config) {
  config.validate();
  OracleResult result;
  const auto it = std::find_if(scene.objects.begin(), scene.objects.end(),
                               [&](const SceneObject& o) { return o.contains(g.x, g.y); });
  if (it == scene.objects.end()) return result;
  const SceneObject& o = *it;

  const Local p = to_local(o, g.x, g.y);
  const Local d{std::cos(g.angle - o.orientation), std::sin(g.angle - o.orientation)};
  const auto chord = o.shape == ShapeKind::Box ? box_chord(o, p, d) : ellipse_chord(o, p, d);
  if (!chord) return result;
  result.chord = chord->length;
  if (chord->length > g.width + kChordSlack) {
    result.verdict = OracleVerdict::ChordExceedsWidth;
  } else if (g.width > config.max_width) {
    result.verdict = OracleVerdict::WidthOverLimit;
  } else if (angle_between(chord->n1, {-chord->n2.x, -chord->n2.y}) > config.antipodal_tolerance) {
    result.verdict = OracleVerdict::NotAntipodal;
  } else if (g.z < scene.table_z || g.z > scene.table_z + o.height) {
    result.verdict = OracleVerdict::HeightOutside;
  } else {
    result.verdict = OracleVerdict::Success;
  }
  return result;
}

std::size_t channel_count(Channels c) {
  switch (c) {
    case Channels::Depth: return 1;
    case Channels::GreyDepth: return 2;
    case Channels::Rgbd: return 4;
  }
  return 0;
}

Channels channels_for(std::size_t count) {
  switch (count) {
    case 1: return Channels::Depth;
    case 2: return Channels::GreyDepth;
    case 4: return Channels::Rgbd;
    default:
      throw Error(ErrorCode::InvalidConfig, "no channel layout with " + std::to_string(count) + " planes");
  }
}

Channels parse_channels(std::string_view text) {
  if (text == "d") return Channels::Depth;
  if (text == "greyd") return Channels::GreyDepth;
  if (text == "rgbd") return Channels::Rgbd;
  throw Error(ErrorCode::InvalidConfig, "channels must be d, greyd or rgbd, got '" + std::string(text) + "'");
}

std::string_view to_string(Channels c) {
  switch (c) {
    case Channels::Depth: return "d";
    case Channels::GreyDepth: return "greyd";
    case Channels::Rgbd: return "rgbd";
  }
  return "unknown";
}

nn::Tensor<float> make_input(const io::RgbdSample& sample, Channels channels,
                             prep::NormalizationRange depth_range) {
  return stack_input(sample, prep::inpaint_depth(sample.depth, sample.depth_invalid), channels,
                     depth_range);
}

labels::GraspMaps GroundTruthPredictor::predict(const Observation& observation,
                                                const nn::Tensor<float>&) const {
  const auto& s = observation.sample;
  return labels::rasterize(s.pos_rects, s.rows(), s.cols());
}

void ControllerConfig::validate() const {
  if (!(width_margin >= 1.0)) throw Error(ErrorCode::InvalidConfig, "controller: width_margin must be >= 1");
  if (!(grasp_depth >= 0.0)) throw Error(ErrorCode::InvalidConfig, "controller: grasp_depth must be >= 0");
  if (!(table_clearance >= 0.0))
    throw Error(ErrorCode::InvalidConfig, "controller: table_clearance must be >= 0");
  if (decode.smoothing == decode::QSmoothing::Gaussian && !(decode.sigma > 0.0))
    throw Error(ErrorCode::InvalidConfig, "controller: smoothing sigma must be positive");
  if (!(depth_range.max > depth_range.min))
    throw Error(ErrorCode::InvalidConfig, "controller: depth range needs max > min");
  oracle.validate();
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::None: return "none";
    case FailureReason::OutOfWorkspace: return "out_of_workspace";
    case FailureReason::BelowTable: return "below_table";
    case FailureReason::GripperClosedEmpty: return "gripper_closed_empty";
  }
  return "unknown";
}

TrialResult run_episode(const GraspPredictor& predictor, const Scene& scene,
                        const Observation& observation, const ControllerConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  const auto& sample = observation.sample;
  const Plane depth = prep::inpaint_depth(sample.depth, sample.depth_invalid);
  const auto input = stack_input(sample, depth, predictor.channels(), config.depth_range);
  const auto maps = predictor.predict(observation, input);
  const auto candidates = decode::decode_ranked(maps, config.max_retries + 1, config.decode);

  TrialResult t;
  for (const auto& candidate : candidates) {
    ++t.attempts;
    const auto pose = decode::image_to_robot(candidate, depth, observation.camera);
    t.grasp = pose;
    t.quality = pose.quality;
    if (!scene.workspace.contains(pose.x, pose.y, pose.z)) {
      t.failure_reason = FailureReason::OutOfWorkspace;
      continue;
    }
    if (pose.z <= scene.table_z + config.table_clearance) {
      t.failure_reason = FailureReason::BelowTable;
      continue;
    }
    t.grasp.width = pose.width * config.width_margin;
    t.grasp.z = std::max(pose.z - config.grasp_depth, scene.table_z);
    t.planning_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    t.success = oracle_grasp(scene, t.grasp, config.oracle).success();
    t.failure_reason = t.success ? FailureReason::None : FailureReason::GripperClosedEmpty;
    return t;
  }
  t.planning_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return t;
}

TrialResult run_episode(const GraspPredictor& predictor, const Scene& scene,
                        const ObservationSetup& setup, const ControllerConfig& config,
                        std::uint64_t noise_seed) {
  return run_episode(predictor, scene, render(scene, setup, noise_seed), config);
}

MetricsReport metrics(std::span<const TrialResult> trials) {
  if (trials.empty()) throw Error(ErrorCode::EmptyTrials, "no trials to summarize");
  MetricsReport m;
  m.trials = trials.size();
  std::vector<double> times;
  double total_time = 0.0;
  for (const TrialResult& t : trials) {
    m.successes += t.success;
    m.robust += t.success && t.quality > 0.5;
    times.push_back(t.planning_seconds);
    total_time += t.planning_seconds;
  }
  const double n = static_cast<double>(m.trials);
  m.success_rate = static_cast<double>(m.successes) / n;
  m.robust_grasp_rate = static_cast<double>(m.robust) / n;
  std::sort(times.begin(), times.end());
  m.mean_planning_seconds = total_time / n;
  const std::size_t mid = times.size() / 2;
  m.median_planning_seconds = times.size() % 2 ? times[mid] : 0.5 * (times[mid - 1] + times[mid]);
  const auto rank = static_cast<std::size_t>(std::ceil(0.95 * n));
  m.p95_planning_seconds = times[std::max<std::size_t>(rank, 1) - 1];
  return m;
}

nlohmann::json to_json(const MetricsReport& m, bool include_timing) {
  nlohmann::json j = {{"trials", m.trials},
                      {"successes", m.successes},
                      {"robust", m.robust},
                      {"success_rate", m.success_rate},
                      {"robust_grasp_rate", m.robust_grasp_rate}};
  if (include_timing) {
    j["planning_seconds"] = {{"mean", m.mean_planning_seconds},
                             {"median", m.median_planning_seconds},
                             {"p95", m.p95_planning_seconds}};
  }
  return j;
}

nlohmann::json to_json(const TrialResult& t, bool include_timing) {
  nlohmann::json j = {{"success", t.success},
                      {"failure_reason", std::string(to_string(t.failure_reason))},
                      {"attempts", t.attempts},
                      {"quality", t.quality},
                      {"grasp", decode::to_json(t.grasp)}};
  if (include_timing) j["planning_seconds"] = t.planning_seconds;
  return j;
}

std::uint64_t scene_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, 0x5CE7Eull, index);
}

std::uint64_t noise_seed(std::uint64_t seed, std::size_t index) {
  return derive_seed(seed, 0x7015Eull, index);
}

SimulationRun simulate(const GraspPredictor& predictor, const SimulationConfig& config) {
  config.scene.validate();
  config.setup.validate();
  config.controller.validate();
  if (config.scenes == 0) throw Error(ErrorCode::EmptyTrials, "simulation needs at least one scene");
  SimulationRun run;
  for (std::size_t i = 0; i < config.scenes; ++i) {
    const auto seed = scene_seed(config.seed, i);
    const Scene scene = generate_scene(seed, config.scene);
    run.scene_seeds.push_back(seed);
    run.trials.push_back(
        run_episode(predictor, scene, config.setup, config.controller, noise_seed(config.seed, i)));
  }
  run.report = metrics(run.trials);
  return run;
}

nlohmann::json report_json(const SimulationRun& run, bool include_timing) {
  nlohmann::json trials = nlohmann::json::array();
  for (std::size_t i = 0; i < run.trials.size(); ++i) {
    auto t = to_json(run.trials[i], include_timing);
    t["index"] = i;
    t["scene_seed"] = run.scene_seeds[i];
    trials.push_back(std::move(t));
  }
  return {{"metrics", to_json(run.report, include_timing)}, {"trials", std::move(trials)}};
}

std::vector<training::Example> synthesize_dataset(const DatasetConfig& config) {
  config.scene.validate();
  config.setup.validate();
  std::vector<training::Example> out;
  out.reserve(config.count);
  for (std::size_t i = 0; i < config.count; ++i) {
    ObservationSetup setup = config.setup;
    if (!config.heights.empty()) setup.height = config.heights[i % config.heights.size()];
    const Scene scene = generate_scene(derive_seed(config.seed, 0xDA7Aull, i), config.scene);
    const Observation obs = render(scene, setup, derive_seed(config.seed, 0xD015Eull, i));
    training::Example ex;
    ex.id = "synth" + std::to_string(i);
    ex.input = make_input(obs.sample, config.channels, config.depth_range);
    ex.label = labels::rasterize(obs.sample.pos_rects, obs.sample.rows(), obs.sample.cols());
    out.push_back(std::move(ex));
  }
  return out;
}

nlohmann::json to_json(const SceneParams& p) {
  return {{"min_objects", p.min_objects},   {"max_objects", p.max_objects},
          {"a_min", p.a_min},               {"a_max", p.a_max},
          {"aspect_min", p.aspect_min},     {"aspect_max", p.aspect_max},
          {"height_min", p.height_min},     {"height_max", p.height_max},
          {"placement_half", p.placement_half}, {"min_gap", p.min_gap},
          {"box_fraction", p.box_fraction}};
}

SceneParams scene_params_from_json(const nlohmann::json& j) {
  SceneParams p;
  cfg::read_object(j, "sim.scene",
                   {{"min_objects", cfg::into(p.min_objects)},
                    {"max_objects", cfg::into(p.max_objects)},
                    {"a_min", cfg::into(p.a_min)},
                    {"a_max", cfg::into(p.a_max)},
                    {"aspect_min", cfg::into(p.aspect_min)},
                    {"aspect_max", cfg::into(p.aspect_max)},
                    {"height_min", cfg::into(p.height_min)},
                    {"height_max", cfg::into(p.height_max)},
                    {"placement_half", cfg::into(p.placement_half)},
                    {"min_gap", cfg::into(p.min_gap)},
                    {"box_fraction", cfg::into(p.box_fraction)}});
  p.validate();
  return p;
}

}  // namespace pixelgrasp::sim
