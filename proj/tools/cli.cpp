#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "dataset_dir.hpp"
#include "json.hpp"
#include "pixelgrasp/data_ingest.hpp"
#include "pixelgrasp/error.hpp"
#include "pixelgrasp/grasp_decode.hpp"
#include "pixelgrasp/labels.hpp"
#include "pixelgrasp/model.hpp"
#include "pixelgrasp/preprocess.hpp"
#include "pixelgrasp/run_config.hpp"
#include "pixelgrasp/simworld.hpp"
#include "pixelgrasp/training.hpp"
#include "png_io.hpp"

namespace pixelgrasp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Checkpoint name that selects the ground-truth label predictor.
constexpr std::string_view kGroundTruthStub = "gt-stub";

run::RunConfig load_config(const std::optional<std::string>& path) {
  return path ? run::load_run_config(*path) : run::RunConfig{};
}

template <typename T>
void apply(const std::optional<T>& flag, T& target) {
  if (flag) target = *flag;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, dir.string() + ": " + ec.message());
}

model::UGNet load_network(const fs::path& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingCheckpoint, path.string() + ": no such file");
  return model::load_checkpoint(io::read_file(path));
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareArgs {
  std::string cornell_dir;
  std::string out;
  std::optional<std::string> config;
  std::optional<std::size_t> side;
};

struct CornellFiles {
  std::string id;
  fs::path pcd;
  fs::path png;
  fs::path pos;
  fs::path neg;
};

std::vector<CornellFiles> find_cornell_samples(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, dir.string() + ": not a directory");
  static const std::regex pattern(R"(pcd(\d+)\.txt)");
  std::vector<CornellFiles> found;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    std::smatch m;
    if (!std::regex_match(name, m, pattern)) continue;
    const fs::path parent = entry.path().parent_path();
    const std::string stem = "pcd" + m[1].str();
    found.push_back({stem, entry.path(), parent / (stem + "r.png"), parent / (stem + "cpos.txt"),
                     parent / (stem + "cneg.txt")});
  }
  std::sort(found.begin(), found.end(),
            [](const CornellFiles& a, const CornellFiles& b) { return a.id < b.id; });
  return found;
}

int run_prepare(const PrepareArgs& args, std::ostream& out, std::ostream& err) {
  run::RunConfig rc = load_config(args.config);
  apply(args.side, rc.data.side);
  rc.data.validate();

  const auto files = find_cornell_samples(args.cornell_dir);
  if (files.empty()) throw Error(ErrorCode::EmptyDataset, args.cornell_dir + ": no pcdNNNN.txt files");
  ensure_directory(args.out);

  Manifest manifest{"cornell", rc.data.side, 4, rc.data.depth_range, {}};
  std::size_t dropped_total = 0;
  for (const auto& f : files) {
    io::RgbdSample sample;
    sample.id = f.id;
    sample.rgb = read_png(f.png);
    const io::PointCloud cloud = io::parse_pcd(io::read_text_file(f.pcd));
    io::DepthImage depth = io::project_to_depth(cloud.points, sample.rgb.rows(), sample.rgb.cols());
    sample.depth = std::move(depth.depth);
    sample.depth_invalid = std::move(depth.invalid);
    const io::RectangleParseResult pos = io::parse_rectangles(io::read_text_file(f.pos));
    sample.pos_rects = pos.rects;
    std::size_t dropped = pos.dropped_groups;
    if (fs::exists(f.neg)) {
      const io::RectangleParseResult neg = io::parse_rectangles(io::read_text_file(f.neg));
      sample.neg_rects = neg.rects;
      dropped += neg.dropped_groups;
    }
    dropped_total += dropped;

    const io::RgbdSample base = prep::center_crop_resize(sample, rc.data.side);
    const auto emit = [&](const io::RgbdSample& s, const std::string& id) {
      const nn::Tensor<float> input = sim::make_input(s, sim::Channels::Rgbd, rc.data.depth_range);
      write_sample(args.out, id, input, labels::rasterize(s.pos_rects, s.rows(), s.cols()));
      manifest.samples.push_back({id, s.pos_rects.size(), s.neg_rects.size(), dropped});
    };
    emit(base, f.id);
    for (int v = 1; v <= rc.data.augment.copies; ++v) {
      const prep::AugmentParams params =
          prep::sample_augment(rc.data.augment, rc.data.seed, prep::sample_key(f.id),
                               static_cast<std::uint64_t>(v), rc.data.side);
      emit(prep::augment(base, params), f.id + "_a" + std::to_string(v));
    }
  }
  write_manifest(args.out, manifest);
  if (dropped_total > 0) err << "dropped " << dropped_total << " rectangle groups with NaN corners\n";
  out << json{{"samples", manifest.samples.size()}, {"dropped_groups", dropped_total}}.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::string out;
  std::optional<std::string> config;
  std::optional<std::size_t> count;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> side;
  std::vector<double> heights;
  std::optional<double> dropout_base;
  std::optional<double> noise_sigma;
  std::optional<std::size_t> min_objects;
  std::optional<std::size_t> max_objects;
};

int run_synth(const SynthArgs& args, std::ostream& out, std::ostream&) {
  run::RunConfig rc = load_config(args.config);
  sim::DatasetConfig dc;
  dc.count = 200;
  dc.seed = rc.sim.seed;
  dc.scene = rc.sim.scene;
  dc.setup = rc.sim.setup;
  dc.channels = sim::Channels::Rgbd;
  dc.depth_range = rc.sim.controller.depth_range;
  apply(args.count, dc.count);
  apply(args.seed, dc.seed);
  apply(args.side, dc.setup.side);
  apply(args.dropout_base, dc.setup.dropout_base);
  apply(args.noise_sigma, dc.setup.noise_sigma);
  apply(args.min_objects, dc.scene.min_objects);
  apply(args.max_objects, dc.scene.max_objects);
  dc.heights = args.heights;
  dc.scene.validate();
  dc.setup.validate();
  if (dc.count == 0) throw Error(ErrorCode::InvalidConfig, "synth: count must be >= 1");

  const auto examples = sim::synthesize_dataset(dc);
  ensure_directory(args.out);
  Manifest manifest{"synthetic", dc.setup.side, 4, dc.depth_range, {}};
  for (const auto& ex : examples) {
    write_sample(args.out, ex.id, ex.input, ex.label);
    manifest.samples.push_back({ex.id, 0, 0, 0});
  }
  write_manifest(args.out, manifest);
  out << json{{"samples", examples.size()}}.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  std::optional<std::string> config;
  std::string data;
  std::string out;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  bool no_timing = false;
};

json epoch_json(const training::EpochLog& log, bool timing) {
  json j{{"epoch", log.epoch}, {"train_loss", log.train_loss}};
  j["val_loss"] = log.val_loss ? json(*log.val_loss) : json(nullptr);
  if (timing) j["seconds"] = log.seconds;
  return j;
}

int run_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  run::RunConfig rc = load_config(args.config);
  apply(args.epochs, rc.train.epochs);
  apply(args.batch_size, rc.train.batch_size);
  apply(args.seed, rc.train.seed);
  apply(args.lr, rc.train.adam.lr);
  rc.train.validate();

  const Manifest manifest = read_manifest(args.data);
  if (rc.model.input_side != manifest.side) {
    err << "model input side " << rc.model.input_side << " follows the dataset side " << manifest.side
        << '\n';
    rc.model.input_side = manifest.side;
  }
  rc.model.validate();

  const auto examples = load_examples(args.data, manifest, rc.model.in_channels);
  if (examples.empty()) throw Error(ErrorCode::EmptyDataset, args.data + ": manifest lists no samples");
  std::vector<std::string> ids;
  for (const auto& ex : examples) ids.push_back(ex.id);
  const training::Split split = training::split_dataset(ids, rc.train.split_fraction, rc.train.seed);
  std::map<std::string, const training::Example*> by_id;
  for (const auto& ex : examples) by_id[ex.id] = &ex;
  std::vector<training::Example> train_set, val_set;
  for (const auto& id : split.train) train_set.push_back(*by_id.at(id));
  for (const auto& id : split.val) val_set.push_back(*by_id.at(id));

  model::UGNet net(rc.model);
  training::train(net, train_set, val_set, rc.train, [&](const training::EpochLog& log) {
    out << epoch_json(log, !args.no_timing).dump() << std::endl;
  });
  io::write_file(args.out, model::save_checkpoint(net));
  return 0;
}

// ---------------------------------------------------------------------------
// init

struct InitArgs {
  std::optional<std::string> config;
  std::string out;
  std::optional<std::size_t> in_channels;
  std::optional<std::size_t> side;
  std::optional<std::size_t> base_width;
  std::optional<std::size_t> levels;
  std::optional<std::uint64_t> seed;
};

int run_init(const InitArgs& args, std::ostream& out, std::ostream&) {
  run::RunConfig rc = load_config(args.config);
  apply(args.in_channels, rc.model.in_channels);
  apply(args.side, rc.model.input_side);
  apply(args.base_width, rc.model.base_width);
  apply(args.levels, rc.model.levels);
  apply(args.seed, rc.model.seed);
  rc.model.validate();
  const model::UGNet net(rc.model);
  const auto bytes = model::save_checkpoint(net);
  io::write_file(args.out, bytes);
  out << json{{"param_count", model::param_count(rc.model)}, {"bytes", bytes.size()}}.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// model-info

int run_model_info(const std::string& path, std::ostream& out) {
  if (!fs::exists(path)) throw Error(ErrorCode::MissingCheckpoint, path + ": no such file");
  const auto bytes = io::read_file(path);
  const model::UGNet net = model::load_checkpoint(bytes);
  out << json{{"config", model::to_json(net.config())},
              {"param_count", model::param_count(net.config())},
              {"bytes", bytes.size()},
              {"checksum", hex64(net.checksum())}}
             .dump()
      << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// predict

struct PredictArgs {
  std::optional<std::string> config;
  std::string ckpt;
  std::string input;
  std::optional<std::string> camera;
  std::optional<std::string> heatmaps;
  std::vector<double> depth_range;
  std::optional<std::string> smoothing;
  std::optional<double> sigma;
};

decode::QSmoothing parse_smoothing(const std::string& name) {
  if (name == "none") return decode::QSmoothing::None;
  if (name == "mean3x3") return decode::QSmoothing::Mean3x3;
  if (name == "gaussian") return decode::QSmoothing::Gaussian;
  throw Error(ErrorCode::Usage, "unknown smoothing '" + name + "'");
}

void write_heatmaps(const fs::path& dir, const labels::GraspMaps& maps) {
  ensure_directory(dir);
  io::write_file(dir / "q.ppm", decode::heatmap_ppm(maps.q, 0.0, 1.0));
  io::write_file(dir / "cos2phi.ppm", decode::heatmap_ppm(maps.cos2phi, -1.0, 1.0));
  io::write_file(dir / "sin2phi.ppm", decode::heatmap_ppm(maps.sin2phi, -1.0, 1.0));
  io::write_file(dir / "width.ppm", decode::heatmap_ppm(maps.w, 0.0, 1.0));
}

int run_predict(const PredictArgs& args, std::ostream& out, std::ostream&) {
  run::RunConfig rc = load_config(args.config);
  if (args.camera) {
    try {
      rc.camera = decode::camera_from_json(json::parse(io::read_text_file(*args.camera)));
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::InvalidConfig, *args.camera + ": " + e.what());
    }
  }
  if (!rc.camera) throw Error(ErrorCode::Usage, "predict needs --camera or a camera config section");
  prep::NormalizationRange depth_range = rc.data.depth_range;
  if (!args.depth_range.empty()) {
    if (args.depth_range.size() != 2) throw Error(ErrorCode::Usage, "--depth-range takes two values");
    depth_range = {args.depth_range[0], args.depth_range[1]};
  }
  if (!(depth_range.max > depth_range.min))
    throw Error(ErrorCode::InvalidConfig, "depth range needs max > min");
  decode::DecodeOptions options;
  if (args.smoothing) options.smoothing = parse_smoothing(*args.smoothing);
  apply(args.sigma, options.sigma);

  const model::UGNet net = load_network(args.ckpt);
  const nn::Tensor<float> stacked = array_to_input(io::read_tensor(io::read_file(args.input)));
  const nn::Tensor<float> input = select_channels(stacked, net.config().in_channels);

  const auto start = std::chrono::steady_clock::now();
  const labels::GraspMaps maps = net.predict(input);
  const decode::ImageGrasp grasp = decode::decode_best(maps, options);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  // The network sees normalized depth; undo the normalization for back-projection.
  const nn::Shape s = stacked.shape();
  Plane depth(s.h, s.w);
  const float* normalized = stacked.data() + (s.c - 1) * s.spatial();
  for (std::size_t i = 0; i < depth.size(); ++i)
    depth.data[i] = static_cast<float>(depth_range.min + normalized[i] * (depth_range.max - depth_range.min));
  const decode::GraspPose pose = decode::image_to_robot(grasp, depth, *rc.camera);

  if (args.heatmaps) write_heatmaps(*args.heatmaps, maps);
  json j = decode::to_json(pose);
  j["planning_seconds"] = seconds;
  out << j.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// heatmap

struct HeatmapArgs {
  std::string input;
  std::string out;
  std::size_t plane = 0;
  std::optional<double> lo;
  std::optional<double> hi;
};

int run_heatmap(const HeatmapArgs& args, std::ostream& out, std::ostream&) {
  const io::FloatArray array = io::read_tensor(io::read_file(args.input));
  if (array.dims.size() < 2) throw Error(ErrorCode::InvalidShape, "heatmap needs at least two dimensions");
  const std::size_t rows = array.dims[array.dims.size() - 2];
  const std::size_t cols = array.dims.back();
  const std::size_t planes = array.element_count() / (rows * cols);
  if (args.plane >= planes)
    throw Error(ErrorCode::InvalidShape, "plane " + std::to_string(args.plane) + " of " +
                                             std::to_string(planes));
  Plane plane(rows, cols);
  std::copy_n(array.values.begin() + static_cast<std::ptrdiff_t>(args.plane * rows * cols), rows * cols,
              plane.data.begin());
  const auto [min_it, max_it] = std::minmax_element(plane.data.begin(), plane.data.end());
  const double lo = args.lo.value_or(*min_it);
  double hi = args.hi.value_or(*max_it);
  if (!args.hi && hi <= lo) hi = lo + 1.0;
  io::write_file(args.out, decode::heatmap_ppm(plane, lo, hi));
  out << json{{"rows", rows}, {"cols", cols}, {"lo", lo}, {"hi", hi}}.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// simulate and benchmark

struct SimArgs {
  std::optional<std::string> config;
  std::optional<std::size_t> scenes;
  std::optional<std::uint64_t> seed;
  std::optional<double> dropout_base;
  std::optional<double> noise_sigma;
  std::optional<std::string> report;
  bool include_timing = false;
};

struct LoadedPredictor {
  std::unique_ptr<model::UGNet> net;  // heap-held so predictor references survive moves
  std::unique_ptr<sim::GraspPredictor> predictor;
  std::size_t side = 0;
  std::size_t bytes = 0;
};

/// The ground-truth stub has no checkpoint; it renders at `stub_side` with
/// `stub_channels`.
LoadedPredictor load_predictor(const std::string& ckpt, sim::Channels stub_channels,
                               std::size_t stub_side) {
  LoadedPredictor p;
  if (ckpt == kGroundTruthStub) {
    p.predictor = std::make_unique<sim::GroundTruthPredictor>(stub_channels);
    p.side = stub_side;
    return p;
  }
  if (!fs::exists(ckpt)) throw Error(ErrorCode::MissingCheckpoint, ckpt + ": no such file");
  const auto bytes = io::read_file(ckpt);
  p.net = std::make_unique<model::UGNet>(model::load_checkpoint(bytes));
  p.predictor = std::make_unique<sim::NetworkPredictor>(*p.net);
  p.side = p.net->config().input_side;
  p.bytes = bytes.size();
  return p;
}

void apply_sim_flags(const SimArgs& args, run::SimSettings& s) {
  apply(args.scenes, s.scenes);
  apply(args.seed, s.seed);
  apply(args.dropout_base, s.setup.dropout_base);
  apply(args.noise_sigma, s.setup.noise_sigma);
  if (args.include_timing) s.include_timing = true;
}

struct SimulateArgs : SimArgs {
  std::string ckpt;
  std::optional<double> height;
  std::optional<std::string> channels;
};

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream&) {
  run::RunConfig rc = load_config(args.config);
  run::SimSettings& s = rc.sim;
  apply_sim_flags(args, s);
  apply(args.height, s.setup.height);
  if (args.channels) s.channels = sim::parse_channels(*args.channels);
  s.validate();

  LoadedPredictor loaded = load_predictor(args.ckpt, s.channels, s.setup.side);
  if (loaded.net && args.channels && loaded.predictor->channels() != s.channels)
    throw Error(ErrorCode::InvalidConfig,
                "checkpoint expects channels '" + std::string(sim::to_string(loaded.predictor->channels())) +
                    "' but '" + std::string(sim::to_string(s.channels)) + "' was requested");
  s.setup.side = loaded.side;

  const sim::SimulationConfig sc{s.scenes, s.seed, s.scene, s.setup, s.controller};
  const sim::SimulationRun run = sim::simulate(*loaded.predictor, sc);
  if (args.report) io::write_text_file(*args.report, sim::report_json(run, s.include_timing).dump(2) + "\n");
  out << sim::to_json(run.report, s.include_timing).dump() << '\n';
  return 0;
}

struct BenchmarkArgs : SimArgs {
  std::string baseline;
  std::string rgbd;
  std::optional<std::string> table;
};

std::string format_rate(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << v;
  return os.str();
}

std::string benchmark_table(const json& rows, bool timing) {
  std::vector<std::string> header{"height", "model", "channels", "success", "robust"};
  if (timing) {
    header.push_back("median_ms");
    header.push_back("p95_ms");
  }
  header.push_back("model_bytes");
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& r : rows) {
    std::vector<std::string> line{format_rate(r["height"].get<double>()).substr(0, 4),
                                  r["model"].get<std::string>(), r["channels"].get<std::string>(),
                                  format_rate(r["success_rate"].get<double>()),
                                  format_rate(r["robust_grasp_rate"].get<double>())};
    if (timing) {
      line.push_back(format_rate(r["median_planning_ms"].get<double>()));
      line.push_back(format_rate(r["p95_planning_ms"].get<double>()));
    }
    line.push_back(std::to_string(r["model_bytes"].get<std::size_t>()));
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) widths[i] = std::max(widths[i], line[i].size());
  std::ostringstream os;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) os << "  ";
      if (i < 3)
        os << std::left << std::setw(static_cast<int>(widths[i])) << line[i];
      else
        os << std::right << std::setw(static_cast<int>(widths[i])) << line[i];
    }
    os << '\n';
  }
  return os.str();
}

int run_benchmark(const BenchmarkArgs& args, std::ostream& out, std::ostream& err) {
  run::RunConfig rc = load_config(args.config);
  run::SimSettings& s = rc.sim;
  apply_sim_flags(args, s);
  s.validate();

  struct Entry {
    std::string name;
    LoadedPredictor loaded;
  };
  // Without a network the stubs fall back to the two channel layouts being compared.
  std::vector<Entry> entries;
  entries.push_back({"baseline", load_predictor(args.baseline, sim::Channels::Depth, s.setup.side)});
  entries.push_back({"rgbd", load_predictor(args.rgbd, sim::Channels::Rgbd, s.setup.side)});

  json rows = json::array();
  for (const double height : run::kBenchmarkHeights) {
    for (const auto& e : entries) {
      sim::ObservationSetup setup = s.setup;
      setup.height = height;
      setup.side = e.loaded.side;
      const sim::SimulationConfig sc{s.scenes, s.seed, s.scene, setup, s.controller};
      const sim::MetricsReport report = sim::simulate(*e.loaded.predictor, sc).report;
      json row{{"height", height},
               {"model", e.name},
               {"channels", sim::to_string(e.loaded.predictor->channels())},
               {"trials", report.trials},
               {"success_rate", report.success_rate},
               {"robust_grasp_rate", report.robust_grasp_rate},
               {"model_bytes", e.loaded.bytes}};
      if (s.include_timing) {
        row["median_planning_ms"] = report.median_planning_seconds * 1e3;
        row["p95_planning_ms"] = report.p95_planning_seconds * 1e3;
      }
      rows.push_back(std::move(row));
    }
  }
  const json result{{"scenes", s.scenes}, {"seed", s.seed}, {"rows", rows}};
  const std::string table = benchmark_table(rows, s.include_timing);
  if (args.report) io::write_text_file(*args.report, result.dump(2) + "\n");
  if (args.table)
    io::write_text_file(*args.table, table);
  else
    err << table;
  out << result.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage: return 1;
    case ErrorKind::Data: return 2;
    case ErrorKind::Internal: return 3;
  }
  return 3;
}

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--config", a.config, "Run config JSON");
  cmd->add_option("--scenes", a.scenes, "Number of scenes");
  cmd->add_option("--seed", a.seed, "Scene and noise seed");
  cmd->add_option("--dropout-base", a.dropout_base, "Invalid depth rate at 0.35 m");
  cmd->add_option("--noise-sigma", a.noise_sigma, "Depth noise, meters");
  cmd->add_option("--report", a.report, "Write the full report JSON here");
  cmd->add_flag("--include-timing", a.include_timing, "Report planning times");
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pixel-wise grasp detection toolkit", "pixelgrasp"};
  app.require_subcommand(1);

  PrepareArgs prepare;
  auto* cmd_prepare = app.add_subcommand("prepare", "Convert a Cornell-style directory into tensor files");
  cmd_prepare->add_option("--cornell-dir", prepare.cornell_dir, "Source directory")->required();
  cmd_prepare->add_option("--out", prepare.out, "Output directory")->required();
  cmd_prepare->add_option("--config", prepare.config, "Run config JSON");
  cmd_prepare->add_option("--side", prepare.side, "Output image side");

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Render a labelled synthetic dataset");
  cmd_synth->add_option("--out", synth.out, "Output directory")->required();
  cmd_synth->add_option("--config", synth.config, "Run config JSON");
  cmd_synth->add_option("--count", synth.count, "Number of samples");
  cmd_synth->add_option("--seed", synth.seed, "Dataset seed");
  cmd_synth->add_option("--side", synth.side, "Image side");
  cmd_synth->add_option("--heights", synth.heights, "Camera heights, cycled per sample");
  cmd_synth->add_option("--dropout-base", synth.dropout_base, "Invalid depth rate at 0.35 m");
  cmd_synth->add_option("--noise-sigma", synth.noise_sigma, "Depth noise, meters");
  cmd_synth->add_option("--min-objects", synth.min_objects, "Fewest objects per scene");
  cmd_synth->add_option("--max-objects", synth.max_objects, "Most objects per scene");

  TrainArgs train;
  auto* cmd_train = app.add_subcommand("train", "Train a network on a prepared dataset");
  cmd_train->add_option("--config", train.config, "Run config JSON");
  cmd_train->add_option("--data", train.data, "Prepared dataset directory")->required();
  cmd_train->add_option("--out", train.out, "Checkpoint to write")->required();
  cmd_train->add_option("--epochs", train.epochs, "Epochs");
  cmd_train->add_option("--batch-size", train.batch_size, "Batch size");
  cmd_train->add_option("--seed", train.seed, "Split and shuffle seed");
  cmd_train->add_option("--lr", train.lr, "Adam learning rate");
  cmd_train->add_flag("--no-timing", train.no_timing, "Omit seconds from the epoch log");

  InitArgs init;
  auto* cmd_init = app.add_subcommand("init", "Write a freshly initialized checkpoint");
  cmd_init->add_option("--config", init.config, "Run config JSON");
  cmd_init->add_option("--out", init.out, "Checkpoint to write")->required();
  cmd_init->add_option("--in-channels", init.in_channels, "Input channels (1, 2 or 4)");
  cmd_init->add_option("--side", init.side, "Input side");
  cmd_init->add_option("--base-width", init.base_width, "Channels of the first level");
  cmd_init->add_option("--levels", init.levels, "Encoder levels");
  cmd_init->add_option("--seed", init.seed, "Weight seed");

  std::string info_path;
  auto* cmd_info = app.add_subcommand("model-info", "Describe a checkpoint");
  cmd_info->add_option("ckpt", info_path, "Checkpoint file")->required();

  PredictArgs predict;
  auto* cmd_predict = app.add_subcommand("predict", "Predict one grasp for a network input tensor");
  cmd_predict->add_option("--config", predict.config, "Run config JSON");
  cmd_predict->add_option("--ckpt", predict.ckpt, "Checkpoint")->required();
  cmd_predict->add_option("--input", predict.input, "Input TensorFile [C, H, W]")->required();
  cmd_predict->add_option("--camera", predict.camera, "Camera JSON");
  cmd_predict->add_option("--heatmaps", predict.heatmaps, "Write q, cos2phi, sin2phi and width PPMs here");
  cmd_predict->add_option("--depth-range", predict.depth_range, "Depth normalization min max")->expected(2);
  cmd_predict->add_option("--smoothing", predict.smoothing, "none, mean3x3 or gaussian");
  cmd_predict->add_option("--sigma", predict.sigma, "Gaussian smoothing sigma, pixels");

  HeatmapArgs heatmap;
  auto* cmd_heatmap = app.add_subcommand("heatmap", "Render one plane of a TensorFile as a PPM");
  cmd_heatmap->add_option("--input", heatmap.input, "TensorFile")->required();
  cmd_heatmap->add_option("--out", heatmap.out, "PPM to write")->required();
  cmd_heatmap->add_option("--plane", heatmap.plane, "Plane index");
  cmd_heatmap->add_option("--lo", heatmap.lo, "Value mapped to the cold end");
  cmd_heatmap->add_option("--hi", heatmap.hi, "Value mapped to the hot end");

  SimulateArgs simulate;
  auto* cmd_simulate = app.add_subcommand("simulate", "Closed-loop grasp trials in the tabletop world");
  cmd_simulate->add_option("--ckpt", simulate.ckpt, "Checkpoint, or gt-stub")->required();
  cmd_simulate->add_option("--height", simulate.height, "Camera height, meters");
  cmd_simulate->add_option("--channels", simulate.channels, "rgbd, greyd or d");
  add_sim_options(cmd_simulate, simulate);

  BenchmarkArgs benchmark;
  auto* cmd_benchmark = app.add_subcommand("benchmark", "Compare two checkpoints across observation heights");
  cmd_benchmark->add_option("--baseline", benchmark.baseline, "Depth-only checkpoint, or gt-stub")->required();
  cmd_benchmark->add_option("--rgbd", benchmark.rgbd, "Colour checkpoint, or gt-stub")->required();
  cmd_benchmark->add_option("--table", benchmark.table, "Write the text table here instead of stderr");
  add_sim_options(cmd_benchmark, benchmark);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (cmd_prepare->parsed()) return run_prepare(prepare, out, err);
    if (cmd_synth->parsed()) return run_synth(synth, out, err);
    if (cmd_train->parsed()) return run_train(train, out, err);
    if (cmd_init->parsed()) return run_init(init, out, err);
    if (cmd_info->parsed()) return run_model_info(info_path, out);
    if (cmd_predict->parsed()) return run_predict(predict, out, err);
    if (cmd_heatmap->parsed()) return run_heatmap(heatmap, out, err);
    if (cmd_simulate->parsed()) return run_simulate(simulate, out, err);
    if (cmd_benchmark->parsed()) return run_benchmark(benchmark, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(kind_of(e.code()));
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return 3;
  }
  err << app.help();
  return 1;
}

}  // namespace pixelgrasp::cli
