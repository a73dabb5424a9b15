#pragma once

// Planar tabletop world: scene sampling, top-down RGB-D rendering with
// height-dependent depth degradation, an analytic parallel-jaw oracle and the
// open-loop grasp controller with its metrics.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/grasp_decode.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/model.hpp"
#include "pixelgrasp/nn/tensor.hpp"
#include "pixelgrasp/preprocess.hpp"
#include "pixelgrasp/training.hpp"

namespace pixelgrasp::sim {

enum class ShapeKind { Ellipse, Box };

/// Upright prism on the table. Half-extents a >= b > 0; the a axis points
/// along `orientation` (radians, robot frame).
struct SceneObject {
  ShapeKind shape = ShapeKind::Ellipse;
  double x = 0.0;
  double y = 0.0;
  double a = 0.0;
  double b = 0.0;
  double orientation = 0.0;
  double height = 0.0;
  std::size_t color = 0;  // palette index used by the renderer

  /// Radius of the bounding circle of the footprint.
  double bounding_radius() const;
  /// Point-in-footprint test in robot x, y.
  bool contains(double px, double py) const;
};

struct Workspace {
  double x_min = -0.2;
  double x_max = 0.2;
  double y_min = -0.2;
  double y_max = 0.2;
  double z_max = 0.5;

  bool contains(double x, double y, double z) const {
    return x >= x_min && x <= x_max && y >= y_min && y <= y_max && z <= z_max;
  }
};

struct Scene {
  std::vector<SceneObject> objects;
  double table_z = 0.0;
  Workspace workspace;
};

struct SceneParams {
  std::size_t min_objects = 1;
  std::size_t max_objects = 3;
  double a_min = 0.02;
  double a_max = 0.04;
  double aspect_min = 0.5;  // b / a
  double aspect_max = 0.8;
  double height_min = 0.02;
  double height_max = 0.08;
  double placement_half = 0.11;  // every footprint stays inside this square
  double min_gap = 0.01;         // between bounding circles
  double box_fraction = 0.5;     // probability of a box instead of an ellipse

  void validate() const;
};

/// Rejection-samples non-overlapping objects. PlacementFailed after 1000
/// rejections within one scene.
Scene generate_scene(std::uint64_t seed, const SceneParams& params);

struct ObservationSetup {
  std::size_t side = 96;
  double height = 0.35;        // camera above the table, meters
  double dropout_base = 0.0;   // invalid-pixel rate at the reference height
  double noise_sigma = 0.0;    // meters

  void validate() const;
  /// Dropout at this height: dropout_base * height / 0.35, kept below 1.
  double dropout_rate() const;
};

inline constexpr double kReferenceHeight = 0.35;
/// Field of view across the image at the reference height.
inline constexpr double kReferenceFootprint = 0.30;

/// Camera centred over the table origin looking straight down.
decode::CameraModel top_down_camera(std::size_t side, double height, double table_z);

/// One rendered frame. Depth is metric camera distance; pos_rects hold one
/// ground-truth rectangle per visible object.
struct Observation {
  io::RgbdSample sample;
  decode::CameraModel camera;
  double table_z = 0.0;
};

Observation render(const Scene& scene, const ObservationSetup& setup, std::uint64_t noise_seed);

/// Grasp rectangle across the minor axis at the centroid, in continuous pixel
/// coordinates.
io::GraspRectangle ground_truth_rect(const SceneObject& object, const decode::CameraModel& camera,
                                     double table_z);

/// The exact robot-frame grasp that the ground-truth rectangle describes.
decode::GraspPose ground_truth_grasp(const SceneObject& object, double table_z);

struct OracleConfig {
  double max_width = 0.10;  // meters
  double antipodal_tolerance = 0.2617993877991494;  // 15 degrees

  void validate() const;
};

enum class OracleVerdict {
  Success,
  CenterOutside,
  ChordExceedsWidth,
  WidthOverLimit,
  NotAntipodal,
  HeightOutside,
};

std::string_view to_string(OracleVerdict verdict);

struct OracleResult {
  OracleVerdict verdict = OracleVerdict::CenterOutside;
  double chord = 0.0;  // meters, when the center hits an object

  bool success() const { return verdict == OracleVerdict::Success; }
};

OracleResult oracle_grasp(const Scene& scene, const decode::GraspPose& grasp,
                          const OracleConfig& config = {});

// ---------------------------------------------------------------------------
// Network input and predictors

enum class Channels { Depth, GreyDepth, Rgbd };

std::size_t channel_count(Channels channels);
Channels channels_for(std::size_t count);
/// "d", "greyd" or "rgbd".
Channels parse_channels(std::string_view text);
std::string_view to_string(Channels channels);

inline constexpr prep::NormalizationRange kSimDepthRange{0.2, 0.6};

/// Inpaints depth, normalizes every plane and stacks [1, C, H, W]. Depth is
/// always the last channel.
nn::Tensor<float> make_input(const io::RgbdSample& sample, Channels channels,
                             prep::NormalizationRange depth_range);

class GraspPredictor {
 public:
  virtual ~GraspPredictor() = default;
  virtual Channels channels() const = 0;
  virtual labels::GraspMaps predict(const Observation& observation,
                                    const nn::Tensor<float>& input) const = 0;
};

class NetworkPredictor final : public GraspPredictor {
 public:
  explicit NetworkPredictor(const model::UGNet& net) : net_(net) {}
  Channels channels() const override { return channels_for(net_.config().in_channels); }
  labels::GraspMaps predict(const Observation&, const nn::Tensor<float>& input) const override {
    return net_.predict(input);
  }

 private:
  const model::UGNet& net_;
};

/// Returns the rasterized ground-truth label maps of the observation.
class GroundTruthPredictor final : public GraspPredictor {
 public:
  explicit GroundTruthPredictor(Channels channels = Channels::Rgbd) : channels_(channels) {}
  Channels channels() const override { return channels_; }
  labels::GraspMaps predict(const Observation& observation,
                            const nn::Tensor<float>& input) const override;

 private:
  Channels channels_;
};

// ---------------------------------------------------------------------------
// Controller

struct ControllerConfig {
  decode::DecodeOptions decode{decode::QSmoothing::Gaussian, 4.0};
  double width_margin = 1.5;   // opening = predicted width * margin
  double grasp_depth = 0.01;   // descend below the observed surface, meters
  double table_clearance = 0.005;  // surfaces this close to the table count as table
  std::size_t max_retries = 1;
  prep::NormalizationRange depth_range = kSimDepthRange;
  OracleConfig oracle;

  void validate() const;
};

enum class FailureReason { None, OutOfWorkspace, BelowTable, GripperClosedEmpty };

std::string_view to_string(FailureReason reason);

struct TrialResult {
  bool success = false;
  decode::GraspPose grasp;  // last commanded grasp
  double quality = 0.0;
  double planning_seconds = 0.0;
  FailureReason failure_reason = FailureReason::GripperClosedEmpty;
  std::size_t attempts = 0;
};

/// Predict, decode, transform and execute against the oracle. A pose outside
/// the workspace or within table_clearance of the table is rejected and the next Q peak is
/// tried, up to max_retries times.
TrialResult run_episode(const GraspPredictor& predictor, const Scene& scene,
                        const Observation& observation, const ControllerConfig& config);

TrialResult run_episode(const GraspPredictor& predictor, const Scene& scene,
                        const ObservationSetup& setup, const ControllerConfig& config,
                        std::uint64_t noise_seed);

struct MetricsReport {
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t robust = 0;          // successes with quality > 0.5
  double success_rate = 0.0;
  double robust_grasp_rate = 0.0;  // robust / trials
  double mean_planning_seconds = 0.0;
  double median_planning_seconds = 0.0;
  double p95_planning_seconds = 0.0;  // nearest rank
};

/// Throws EmptyTrials.
MetricsReport metrics(std::span<const TrialResult> trials);

nlohmann::json to_json(const MetricsReport& report, bool include_timing);
nlohmann::json to_json(const TrialResult& trial, bool include_timing);

// ---------------------------------------------------------------------------
// Drivers

struct SimulationConfig {
  std::size_t scenes = 50;
  std::uint64_t seed = 0;
  SceneParams scene;
  ObservationSetup setup;
  ControllerConfig controller;
};

struct SimulationRun {
  std::vector<std::uint64_t> scene_seeds;
  std::vector<TrialResult> trials;
  MetricsReport report;
};

/// Scene i uses seeds derived from (seed, i), so runs with the same seed see
/// identical scenes and sensor noise whatever the predictor.
std::uint64_t scene_seed(std::uint64_t seed, std::size_t index);
std::uint64_t noise_seed(std::uint64_t seed, std::size_t index);

SimulationRun simulate(const GraspPredictor& predictor, const SimulationConfig& config);

nlohmann::json report_json(const SimulationRun& run, bool include_timing);

struct DatasetConfig {
  std::size_t count = 200;
  std::uint64_t seed = 0;
  SceneParams scene;
  ObservationSetup setup;
  std::vector<double> heights;  // cycled per sample when nonempty
  Channels channels = Channels::Rgbd;
  prep::NormalizationRange depth_range = kSimDepthRange;
};

/// Rendered scenes with rasterized ground-truth labels. Scenes whose
/// rectangles leave the frame are still kept; their masks are clipped.
std::vector<training::Example> synthesize_dataset(const DatasetConfig& config);

nlohmann::json to_json(const SceneParams& params);
SceneParams scene_params_from_json(const nlohmann::json& j);

}  // namespace pixelgrasp::sim
