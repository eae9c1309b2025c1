#include "uwd/buffer.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "uwd/error.hpp"

namespace uwd {
namespace {

constexpr std::array<std::string_view, 12> kOperations{
    "enhance",          "restore",       "degrade",     "photometric_error",
    "min_reprojection_loss", "pearson_loss", "tgam_update", "tgam_mask",
    "consistency_mask", "depth_metrics", "median_scale", "noop"};

void check_shape(const BufferView& view) {
  if (view.height <= 0 || view.width <= 0) throw ParameterError("buffer shape must be positive");
  const auto expected = static_cast<std::size_t>(view.height) * view.width * view.channels;
  if (view.data.size() != expected) {
    throw ParameterError("buffer holds " + std::to_string(view.data.size()) + " values, shape needs " +
                         std::to_string(expected));
  }
}

}  // namespace

Image image_from_buffer(const BufferView& view) {
  if (view.channels != 1 && view.channels != 3) throw ParameterError("image buffers need 1 or 3 channels");
  check_shape(view);
  return Image(view.height, view.width, view.channels,
               std::vector<double>(view.data.begin(), view.data.end()));
}

std::vector<float> image_to_buffer(const Image& img) {
  const auto data = img.data();
  std::vector<float> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = static_cast<float>(data[i]);
  return out;
}

DepthMap depth_from_buffer(const BufferView& view) {
  if (view.channels != 1) throw ParameterError("depth buffers must have one channel");
  check_shape(view);
  const std::vector<double> values(view.data.begin(), view.data.end());
  return DepthMap(view.height, view.width, values);
}

std::vector<float> depth_to_buffer(const DepthMap& depth) {
  std::vector<float> out(depth.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = depth.valid(i) ? static_cast<float>(depth[i]) : std::numeric_limits<float>::quiet_NaN();
  }
  return out;
}

std::span<const std::string_view> exported_operations() { return kOperations; }

json export_manifest() {
  json ops = json::array();
  for (std::string_view op : kOperations) ops.push_back(std::string(op));
  return json{{"version", 1}, {"operations", ops}};
}

}  // namespace uwd
