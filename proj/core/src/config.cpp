#include "uwd/config.hpp"

#include "uwd/error.hpp"

namespace uwd {
namespace {

const json& section(const json& j, const char* key) {
  static const json kEmpty = json::object();
  if (!j.contains(key)) return kEmpty;
  const json& s = j.at(key);
  if (!s.is_object()) throw ParameterError(std::string("config section \"") + key + "\" must be an object");
  return s;
}

}  // namespace

void PipelineConfig::validate() const {
  loss.validate();
  blur.validate();
  tgam.validate();
  distill.validate();
  sharpen.lowpass.validate();
  fit.loss.validate();
  if (!(rotation_gamma >= 0.0)) throw ParameterError("rotation gamma must be non-negative");
  if (model_stride < 1) throw ParameterError("scene model stride must be >= 1");
  if (!(fit.smoothness_weight >= 0.0)) throw ParameterError("fit smoothness weight must be non-negative");
}

PipelineConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("config must be a JSON object");
  PipelineConfig c;
  try {
    const json& loss = section(j, "loss");
    c.loss.alpha = loss.value("alpha", c.loss.alpha);
    c.loss.ssim_window = loss.value("ssim_window", c.loss.ssim_window);
    c.loss.ssim_c1 = loss.value("ssim_c1", c.loss.ssim_c1);
    c.loss.ssim_c2 = loss.value("ssim_c2", c.loss.ssim_c2);

    const json& blur = section(j, "blur");
    c.blur.k = blur.value("k", c.blur.k);
    c.blur.sigma = blur.value("sigma", c.blur.sigma);

    const json& tgam = section(j, "tgam");
    c.tgam.beta = tgam.value("beta", c.tgam.beta);
    c.tgam.epsilon = tgam.value("epsilon", c.tgam.epsilon);

    const json& distill = section(j, "distill");
    c.distill.tau = distill.value("tau", c.distill.tau);
    c.distill.lambda0 = distill.value("lambda0", c.distill.lambda0);
    c.distill.decay_steps = distill.value("decay_steps", c.distill.decay_steps);

    const json& sharpen = section(j, "sharpen");
    c.sharpen.lowpass.k = sharpen.value("k", c.sharpen.lowpass.k);
    c.sharpen.lowpass.sigma = sharpen.value("sigma", c.sharpen.lowpass.sigma);

    c.rotation_gamma = section(j, "rotation").value("gamma", c.rotation_gamma);
    c.model_stride = section(j, "scene_model").value("stride", c.model_stride);

    const json& fit = section(j, "fit");
    c.fit.smoothness_weight = fit.value("smoothness_weight", c.fit.smoothness_weight);
    c.fit.max_halvings = fit.value("max_halvings", c.fit.max_halvings);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("malformed config: ") + e.what());
  }
  c.fit.loss = c.loss;
  c.validate();
  return c;
}

json config_to_json(const PipelineConfig& c) {
  return json{
      {"loss",
       {{"alpha", c.loss.alpha},
        {"ssim_window", c.loss.ssim_window},
        {"ssim_c1", c.loss.ssim_c1},
        {"ssim_c2", c.loss.ssim_c2}}},
      {"blur", {{"k", c.blur.k}, {"sigma", c.blur.sigma}}},
      {"tgam", {{"beta", c.tgam.beta}, {"epsilon", c.tgam.epsilon}}},
      {"distill",
       {{"tau", c.distill.tau}, {"lambda0", c.distill.lambda0}, {"decay_steps", c.distill.decay_steps}}},
      {"sharpen", {{"k", c.sharpen.lowpass.k}, {"sigma", c.sharpen.lowpass.sigma}}},
      {"rotation", {{"gamma", c.rotation_gamma}}},
      {"scene_model", {{"stride", c.model_stride}}},
      {"fit", {{"smoothness_weight", c.fit.smoothness_weight}, {"max_halvings", c.fit.max_halvings}}},
  };
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json(path));
}

}  // namespace uwd
