#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "uwd/uwd.hpp"

namespace fs = std::filesystem;

namespace {

using uwd::json;

struct Common {
  std::string config;
  std::string out;
};

uwd::PipelineConfig load(const Common& c) {
  return c.config.empty() ? uwd::PipelineConfig{} : uwd::load_config(c.config);
}

fs::path prepare_out(const Common& c) {
  fs::create_directories(c.out);
  return c.out;
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

uwd::Intrinsics load_intrinsics(const std::string& path, int height, int width) {
  const uwd::CameraFile cam = uwd::read_camera(path);
  if ((cam.width > 0 && cam.width != width) || (cam.height > 0 && cam.height != height)) {
    throw uwd::ParameterError("camera file describes " + std::to_string(cam.width) + "x" +
                              std::to_string(cam.height) + " but images are " +
                              std::to_string(width) + "x" + std::to_string(height));
  }
  return cam.K;
}

std::vector<uwd::Pose> load_poses(const std::string& path, std::size_t expected) {
  std::vector<uwd::Pose> poses = uwd::read_poses(path);
  if (poses.size() != expected) {
    throw uwd::ParameterError("expected " + std::to_string(expected) + " poses in " + path +
                              ", found " + std::to_string(poses.size()));
  }
  return poses;
}

std::vector<uwd::Image> load_images(const std::vector<std::string>& paths) {
  std::vector<uwd::Image> out;
  for (const auto& p : paths) out.push_back(uwd::read_image(p));
  return out;
}

std::vector<uwd::Warp> warp_sources(const std::vector<uwd::Image>& sources,
                                    const uwd::DepthMap& depth,
                                    const std::vector<uwd::Pose>& poses,
                                    const uwd::Intrinsics& K) {
  std::vector<uwd::Warp> warps;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    warps.push_back(uwd::synthesize_view(sources[i], depth, poses[i], K));
  }
  return warps;
}

// Frames with depth from an image directory and a depth directory.
std::vector<uwd::Frame> paired_frames(const std::string& images, const std::string& depths,
                                      std::vector<std::string>& warnings) {
  std::vector<uwd::Frame> frames = uwd::pair_frames(images, depths, warnings);
  std::erase_if(frames, [](const uwd::Frame& f) { return !f.depth; });
  if (frames.empty()) throw uwd::IoError("no image with a matching depth map in " + images);
  return frames;
}

int run_enhance(const Common& c, const std::string& images, const std::string& depths,
                const std::string& model_path, bool estimate) {
  const uwd::PipelineConfig cfg = load(c);
  const fs::path out = prepare_out(c);
  if (model_path.empty() && !estimate) throw uwd::ParameterError("enhance needs --model or --estimate");
  std::vector<std::string> warnings;
  const auto frames = paired_frames(images, depths, warnings);
  report_warnings(warnings);

  std::vector<uwd::FrameWithDepth> data;
  for (const auto& f : frames) data.push_back({uwd::read_image(f.image), uwd::read_depth(*f.depth)});
  const uwd::WaterModel model = estimate ? uwd::estimate_water_model(data, cfg.model_stride)
                                         : uwd::read_water_model(model_path);
  fs::create_directories(out / "images");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const uwd::Image e = uwd::enhance(data[i].image, data[i].depth, model, cfg.sharpen);
    uwd::write_image(out / "images" / (frames[i].basename() + ".png"), e, uwd::PngDepth::k16);
  }
  uwd::write_json(out / "scene_model.json", model);
  std::cout << "enhanced " << frames.size() << " frames\n";
  return 0;
}

int run_simulate(const Common& c, const std::string& clean, const std::string& depths,
                 const std::string& model_path) {
  load(c);
  const fs::path out = prepare_out(c);
  const uwd::WaterModel model = uwd::read_water_model(model_path);
  std::vector<std::string> warnings;
  const auto frames = paired_frames(clean, depths, warnings);
  report_warnings(warnings);
  fs::create_directories(out / "images");
  for (const auto& f : frames) {
    const uwd::Image d = uwd::degrade(uwd::read_image(f.image), uwd::read_depth(*f.depth), model);
    uwd::write_image(out / "images" / (f.basename() + ".png"), d, uwd::PngDepth::k16);
  }
  std::cout << "degraded " << frames.size() << " frames\n";
  return 0;
}

int run_losses(const Common& c, const std::string& target_path,
               const std::vector<std::string>& source_paths, const std::string& depth_path,
               const std::string& poses_path, const std::string& k_path) {
  const uwd::PipelineConfig cfg = load(c);
  const fs::path out = prepare_out(c);
  const uwd::Image target = uwd::read_image(target_path);
  const auto sources = load_images(source_paths);
  const uwd::DepthMap depth = uwd::read_depth(depth_path);
  const auto poses = load_poses(poses_path, sources.size());
  const uwd::Intrinsics K = load_intrinsics(k_path, target.height(), target.width());

  const auto warps = warp_sources(sources, depth, poses, K);
  json summary;
  summary["photometric"] = json::array();
  for (std::size_t i = 0; i < warps.size(); ++i) {
    uwd::LossMap pe = uwd::photometric_error(target, warps[i].image, cfg.loss);
    for (std::size_t p = 0; p < pe.value.size(); ++p) pe.valid[p] &= warps[i].mask[p] ? 1 : 0;
    uwd::write_loss_map(out / ("photometric_" + std::to_string(i) + ".tif"), pe);
    summary["photometric"].push_back(pe.valid_count() ? pe.mean() : 0.0);
  }
  const uwd::LossMap minrep = uwd::min_reprojection_loss(target, warps, cfg.loss);
  const uwd::LossMap teacher = uwd::teacher_loss_map(target, warps, cfg.blur, cfg.loss);
  uwd::write_loss_map(out / "min_reprojection.tif", minrep);
  uwd::write_loss_map(out / "teacher.tif", teacher);
  summary["min_reprojection"] = minrep.valid_count() ? minrep.mean() : 0.0;
  summary["teacher"] = teacher.valid_count() ? teacher.mean() : 0.0;
  summary["valid_pixels"] = minrep.valid_count();
  summary["smoothness"] = uwd::smoothness_loss(depth, target);
  uwd::write_json(out / "losses.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

struct MaskArgs {
  std::string mode;
  std::vector<std::string> loss_maps;
  std::string state;
  std::string target;
  std::vector<std::string> sources;
  std::string depth;
  std::vector<std::string> source_depths;
  std::string poses;
  std::string K;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw uwd::ParameterError(what);
}

int run_masks(const Common& c, const MaskArgs& a) {
  const uwd::PipelineConfig cfg = load(c);
  const fs::path out = prepare_out(c);
  json summary;
  summary["mode"] = a.mode;

  if (a.mode == "tgam") {
    require(!a.loss_maps.empty(), "tgam mode needs --loss-maps");
    uwd::TgamState state = cfg.tgam;
    if (!a.state.empty()) state = uwd::read_json(a.state).get<uwd::TgamState>();
    // Updates run in the order given on the command line, on this thread only.
    json trace = json::array();
    for (std::size_t i = 0; i < a.loss_maps.size(); ++i) {
      const uwd::LossMap loss = uwd::read_loss_map(a.loss_maps[i]);
      const uwd::TgamUpdate u = uwd::tgam_update(state, loss);
      state = u.state;
      const uwd::Mask m = uwd::tgam_mask(loss, u.threshold);
      const std::string name = fs::path(a.loss_maps[i]).stem().string();
      uwd::write_mask(out / (std::to_string(i) + "_" + name + ".png"), m);
      trace.push_back({{"frame", a.loss_maps[i]},
                       {"frame_threshold", u.frame_threshold},
                       {"threshold", u.threshold},
                       {"keep_rate", m.keep_rate()}});
    }
    summary["trace"] = trace;
    uwd::write_json(out / "state.json", state);
  } else if (a.mode == "am") {
    require(!a.target.empty() && !a.sources.empty() && !a.depth.empty() && !a.poses.empty() &&
                !a.K.empty(),
            "am mode needs --target, --sources, --depth, --poses and --K");
    const uwd::Image target = uwd::read_image(a.target);
    const auto sources = load_images(a.sources);
    const uwd::DepthMap depth = uwd::read_depth(a.depth);
    const auto poses = load_poses(a.poses, sources.size());
    const uwd::Intrinsics K = load_intrinsics(a.K, target.height(), target.width());
    const auto warps = warp_sources(sources, depth, poses, K);
    const uwd::Mask m = uwd::auto_mask(target, sources, warps, cfg.loss);
    uwd::write_mask(out / "auto_mask.png", m);
    summary["keep_rate"] = m.keep_rate();
  } else if (a.mode == "consistency") {
    require(!a.depth.empty() && !a.source_depths.empty() && !a.poses.empty() && !a.K.empty(),
            "consistency mode needs --depth, --source-depths, --poses and --K");
    const uwd::DepthMap depth = uwd::read_depth(a.depth);
    const auto poses = load_poses(a.poses, a.source_depths.size());
    const uwd::Intrinsics K = load_intrinsics(a.K, depth.height(), depth.width());
    std::vector<uwd::SourceDepth> sources;
    for (std::size_t i = 0; i < poses.size(); ++i) {
      sources.push_back({uwd::read_depth(a.source_depths[i]), poses[i]});
    }
    const uwd::Mask m = uwd::consistency_mask(depth, sources, K, cfg.distill.tau);
    uwd::write_mask(out / "consistency.png", m);
    summary["keep_rate"] = m.keep_rate();
    summary["tau"] = cfg.distill.tau;
  } else {
    throw uwd::ParameterError("unknown mask mode " + a.mode);
  }
  uwd::write_json(out / "masks.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

bool stem_matches(const std::string& a, const std::string& b) {
  if (a == b) return true;
  const auto prefixed = [](const std::string& s, const std::string& p) {
    return s.size() > p.size() && s.compare(0, p.size(), p) == 0 && s[p.size()] == '_';
  };
  return prefixed(a, b) || prefixed(b, a);
}

std::vector<fs::path> depth_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw uwd::IoError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (e.is_regular_file() && (ext == ".tif" || ext == ".tiff" || ext == ".pfm")) {
      files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

int run_eval(const Common& c, const std::string& pred_dir, const std::string& gt_dir,
             bool scale) {
  load(c);
  const fs::path out = prepare_out(c);
  const auto preds = depth_files(pred_dir);
  std::vector<std::string> warnings;
  std::vector<uwd::MetricReport> reports;
  json per_image = json::object();
  for (const fs::path& gt_path : depth_files(gt_dir)) {
    const std::string stem = gt_path.stem().string();
    const auto it = std::find_if(preds.begin(), preds.end(), [&](const fs::path& p) {
      return stem_matches(p.stem().string(), stem);
    });
    if (it == preds.end()) {
      warnings.push_back("no prediction for " + gt_path.filename().string());
      continue;
    }
    const uwd::DepthMap gt = uwd::read_depth(gt_path);
    uwd::DepthMap pred = uwd::read_depth(*it);
    if (scale) pred = uwd::median_scale(pred, gt);
    reports.push_back(uwd::depth_metrics(pred, gt));
    per_image[stem] = reports.back();
  }
  report_warnings(warnings);
  if (reports.empty()) throw uwd::IoError("no prediction matched a ground truth file");
  const uwd::MetricReport mean = uwd::mean_report(reports);
  json result{{"mean", mean}, {"images", per_image}, {"median_scaled", scale},
              {"warnings", warnings}};
  uwd::write_json(out / "metrics.json", result);
  const std::string table = uwd::metrics_table_header() + "\n" + uwd::metrics_table_row(mean) + "\n";
  std::ofstream(out / "metrics.txt") << table;
  std::cout << table;
  return 0;
}

int run_split(const Common& c, const std::string& root) {
  load(c);
  const fs::path out = prepare_out(c);
  uwd::ScanResult scan = uwd::scan_scenes(root);
  const uwd::SplitResult split = uwd::generate_split(scan.scenes);
  scan.warnings.insert(scan.warnings.end(), split.warnings.begin(), split.warnings.end());
  report_warnings(scan.warnings);
  uwd::write_split(split.split, out);
  const json summary{{"scenes", scan.scenes.size()},
                     {"train", split.split.train.size()},
                     {"val", split.split.val.size()},
                     {"test", split.split.test.size()},
                     {"warnings", scan.warnings}};
  uwd::write_json(out / "split.json", summary);
  std::cout << summary.dump(2) << '\n';
  return 0;
}

int run_rotate(const Common& c, const std::string& images, const std::string& depths,
               std::optional<double> gamma, std::uint64_t seed) {
  const uwd::PipelineConfig cfg = load(c);
  const fs::path out = prepare_out(c);
  std::vector<std::string> warnings;
  const auto frames = paired_frames(images, depths, warnings);
  report_warnings(warnings);
  std::mt19937_64 rng(seed);
  fs::create_directories(out / "images");
  fs::create_directories(out / "depth");
  json angles = json::object();
  for (const auto& f : frames) {
    const uwd::RotationSpec spec = uwd::sample_rotation(gamma.value_or(cfg.rotation_gamma), rng);
    const uwd::Image img = uwd::rotate_center_crop(uwd::read_image(f.image), spec);
    const uwd::DepthMap depth = uwd::rotate_center_crop(uwd::read_depth(*f.depth), spec);
    uwd::write_image(out / "images" / (f.basename() + ".png"), img, uwd::PngDepth::k16);
    uwd::write_depth(out / "depth" / (f.basename() + ".tif"), depth);
    angles[f.basename()] = spec.theta;
  }
  uwd::write_json(out / "angles.json", {{"seed", seed}, {"angles", angles}});
  std::cout << "rotated " << frames.size() << " pairs\n";
  return 0;
}

int run_fit(const Common& c, const std::vector<std::string>& frame_paths,
            const std::string& poses_path, const std::string& k_path, int grid, int iters,
            double init) {
  uwd::PipelineConfig cfg = load(c);
  const fs::path out = prepare_out(c);
  if (frame_paths.size() < 2 || frame_paths.size() > 3) {
    throw uwd::ParameterError("fit-depth takes 2 or 3 frames");
  }
  if (init <= 0) throw uwd::ParameterError("--init must be positive");
  // Three frames are (previous, target, next); two are (target, source).
  const std::size_t t = frame_paths.size() == 3 ? 1 : 0;
  const auto images = load_images(frame_paths);
  const auto poses = load_poses(poses_path, images.size() - 1);
  const uwd::Intrinsics K = load_intrinsics(k_path, images[t].height(), images[t].width());
  std::vector<uwd::FitSource> sources;
  for (std::size_t i = 0, p = 0; i < images.size(); ++i) {
    if (i != t) sources.push_back({images[i], poses[p++]});
  }
  cfg.fit.max_iters = iters;
  const uwd::FitResult r = uwd::fit_depth(images[t], sources, K, uwd::DepthMap(grid, grid, init), cfg.fit);
  uwd::write_depth(out / "depth.tif", r.depth);
  const json trace{{"trace", r.trace},
                   {"iterations", r.iterations},
                   {"converged", r.converged},
                   {"degenerate", r.degenerate}};
  uwd::write_json(out / "trace.json", trace);
  if (r.degenerate) std::cerr << "warning: degenerate photometric signal, depth left at init\n";
  std::cout << "iterations " << r.iterations << ", final objective " << r.trace.back() << '\n';
  return 0;
}

int fail(const std::string& kind, const std::string& message, const std::string& command,
         const std::string& out) {
  const json diag{{"kind", kind}, {"message", message}, {"command", command}};
  std::cerr << diag.dump() << '\n';
  if (!out.empty()) {
    std::error_code ec;
    fs::create_directories(out, ec);
    std::ofstream f(fs::path(out) / "diagnostics.json");
    if (f) f << diag.dump(2) << '\n';
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"uwdepth: underwater depth estimation toolkit"};
  app.require_subcommand(1);
  Common common;
  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "pipeline config JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory")->required();
  };

  std::string images, depths, model, clean, pred, gt, root, target, depth, poses, K;
  std::vector<std::string> sources, frames;
  bool estimate = false, scale = false;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  int grid = 16, iters = 500;
  double init = 1.0;
  MaskArgs masks;

  auto* enhance = app.add_subcommand("enhance", "restore and sharpen images with a water model");
  add_common(enhance);
  enhance->add_option("--images", images)->required();
  enhance->add_option("--depths", depths)->required();
  auto* model_opt = enhance->add_option("--model", model, "water model JSON");
  enhance->add_flag("--estimate", estimate, "estimate the water model from the frames")
      ->excludes(model_opt);

  auto* simulate = app.add_subcommand("simulate", "degrade clean images with a water model");
  add_common(simulate);
  simulate->add_option("--clean", clean)->required();
  simulate->add_option("--depths", depths)->required();
  simulate->add_option("--model", model)->required();

  auto* losses = app.add_subcommand("losses", "photometric loss maps for one target frame");
  add_common(losses);
  losses->add_option("--target", target)->required();
  losses->add_option("--sources", sources)->required();
  losses->add_option("--depth", depth)->required();
  losses->add_option("--poses", poses)->required();
  losses->add_option("--K", K)->required();

  auto* mask = app.add_subcommand("masks", "tgam, auto or depth consistency masks");
  add_common(mask);
  mask->add_option("--mode", masks.mode)->required()->check(CLI::IsMember({"tgam", "am", "consistency"}));
  mask->add_option("--loss-maps", masks.loss_maps, "teacher loss maps in frame order (tgam)");
  mask->add_option("--state", masks.state, "initial threshold state JSON (tgam)");
  mask->add_option("--target", masks.target);
  mask->add_option("--sources", masks.sources);
  mask->add_option("--depth", masks.depth);
  mask->add_option("--source-depths", masks.source_depths);
  mask->add_option("--poses", masks.poses);
  mask->add_option("--K", masks.K);

  auto* eval = app.add_subcommand("eval", "depth metrics against ground truth");
  add_common(eval);
  eval->add_option("--pred", pred)->required();
  eval->add_option("--gt", gt)->required();
  eval->add_flag("--median-scale", scale);

  auto* split = app.add_subcommand("split", "train/val/test lists for a dataset root");
  add_common(split);
  split->add_option("--root", root)->required();

  auto* rotate = app.add_subcommand("rotate", "random rotate-and-crop of image/depth pairs");
  add_common(rotate);
  rotate->add_option("--images", images)->required();
  rotate->add_option("--depths", depths)->required();
  rotate->add_option("--gamma", gamma, "angle range in degrees");
  rotate->add_option("--seed", seed)->required();

  auto* fit = app.add_subcommand("fit-depth", "fit a coarse depth grid to 2 or 3 frames");
  add_common(fit);
  fit->add_option("--frames", frames)->required()->expected(2, 3);
  fit->add_option("--poses", poses)->required();
  fit->add_option("--K", K)->required();
  fit->add_option("--grid", grid)->check(CLI::Range(1, 32));
  fit->add_option("--iters", iters)->check(CLI::NonNegativeNumber);
  fit->add_option("--init", init, "initial depth of every cell");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    return fail("usage", e.what(), subs.empty() ? "" : subs.front()->get_name(), common.out) + 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "enhance") return run_enhance(common, images, depths, model, estimate);
    if (command == "simulate") return run_simulate(common, clean, depths, model);
    if (command == "losses") return run_losses(common, target, sources, depth, poses, K);
    if (command == "masks") return run_masks(common, masks);
    if (command == "eval") return run_eval(common, pred, gt, scale);
    if (command == "split") return run_split(common, root);
    if (command == "rotate") return run_rotate(common, images, depths, gamma, seed);
    return run_fit(common, frames, poses, K, grid, iters, init);
  } catch (const uwd::Error& e) {
    return fail(e.kind(), e.what(), command, common.out);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), command, common.out);
  }
}
