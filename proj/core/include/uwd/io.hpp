#pragma once

#include <filesystem>

#include "uwd/image.hpp"
#include "uwd/losses.hpp"

namespace uwd {

enum class PngDepth { k8 = 8, k16 = 16 };

/// Reads an 8/16-bit PNG (or JPEG) or a float TIFF into [0,1] RGB or gray.
/// An alpha channel is dropped. Throws IoError.
Image read_image(const std::filesystem::path& path);

/// Writes by extension: .png as 8 or 16 bit (values clamped to [0,1]),
/// .tif/.tiff as 32-bit float.
void write_image(const std::filesystem::path& path, const Image& img,
                 PngDepth png_depth = PngDepth::k8);

/// Reads a single-channel float TIFF or PFM. NaN and non-positive values
/// become invalid pixels.
DepthMap read_depth(const std::filesystem::path& path);

/// Writes a 32-bit float TIFF or PFM; invalid pixels are stored as 0.
void write_depth(const std::filesystem::path& path, const DepthMap& depth);

/// 1-channel PNG, 0 = dropped, 255 = kept.
void write_mask(const std::filesystem::path& path, const Mask& mask);
Mask read_mask(const std::filesystem::path& path);

/// 32-bit float TIFF; invalid pixels are stored as NaN.
void write_loss_map(const std::filesystem::path& path, const LossMap& loss);
/// Reads a single-channel float TIFF; NaN pixels become invalid.
LossMap read_loss_map(const std::filesystem::path& path);

}  // namespace uwd
