#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "uwd/image.hpp"
#include "uwd/serialization.hpp"

namespace uwd {

/// Contiguous row-major float32 buffer with an (H, W, C) shape, the
/// interchange format for scripting bindings.
struct BufferView {
  std::span<const float> data;
  int height = 0;
  int width = 0;
  int channels = 1;
};

/// Throws ParameterError when the shape is inconsistent with the data.
Image image_from_buffer(const BufferView& view);
std::vector<float> image_to_buffer(const Image& img);

/// Single-channel buffer; NaN and non-positive values become invalid.
DepthMap depth_from_buffer(const BufferView& view);
/// Invalid pixels are written as NaN.
std::vector<float> depth_to_buffer(const DepthMap& depth);

/// Operations a binding may export, in a stable order.
std::span<const std::string_view> exported_operations();

/// {"version": ..., "operations": [...]}.
json export_manifest();

}  // namespace uwd
