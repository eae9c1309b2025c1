#pragma once

#include <filesystem>

#include "uwd/fit_depth.hpp"
#include "uwd/imaging.hpp"
#include "uwd/losses.hpp"
#include "uwd/masking.hpp"
#include "uwd/serialization.hpp"
#include "uwd/uifm.hpp"

namespace uwd {

/// Every tunable of the pipeline. All fields have defaults; a config file
/// only needs the keys it overrides:
///
///   {
///     "loss":    {"alpha": 0.85, "ssim_window": 3, "ssim_c1": 1e-4, "ssim_c2": 9e-4},
///     "blur":    {"k": 2, "sigma": 1.5},
///     "tgam":    {"beta": 0.98, "epsilon": 5},
///     "distill": {"tau": 0.03, "lambda0": 1.0, "decay_steps": 100000},
///     "sharpen": {"k": 3, "sigma": 2.0},
///     "rotation": {"gamma": 15},
///     "scene_model": {"stride": 20},
///     "fit":     {"smoothness_weight": 1e-3, "max_halvings": 40}
///   }
struct PipelineConfig {
  LossConfig loss;
  BlurConfig blur;
  TgamState tgam;
  DistillConfig distill;
  SharpenConfig sharpen;
  double rotation_gamma = 15.0;
  int model_stride = 20;
  FitConfig fit;

  void validate() const;
};

PipelineConfig config_from_json(const json& j);
json config_to_json(const PipelineConfig& cfg);
PipelineConfig load_config(const std::filesystem::path& path);

}  // namespace uwd
