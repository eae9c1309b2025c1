#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <vector>

#include "uwd/camera.hpp"
#include "uwd/evaluation.hpp"
#include "uwd/masking.hpp"
#include "uwd/uifm.hpp"

namespace uwd {

using json = nlohmann::json;

/// Contents of an intrinsics file: {fx, fy, cx, cy, width, height}.
struct CameraFile {
  Intrinsics K;
  int width = 0;
  int height = 0;
};

void to_json(json& j, const Intrinsics& K);
void from_json(const json& j, Intrinsics& K);
void to_json(json& j, const CameraFile& cam);
void from_json(const json& j, CameraFile& cam);

/// Poses are 4x4 row-major matrices, either nested ([[...],[...],...]) or flat (16 numbers).
void to_json(json& j, const Pose& pose);
void from_json(const json& j, Pose& pose);

/// {"B": [r,g,b], "beta_D": [r,g,b]}
void to_json(json& j, const WaterModel& model);
void from_json(const json& j, WaterModel& model);

void to_json(json& j, const MetricReport& report);

void to_json(json& j, const TgamState& state);
void from_json(const json& j, TgamState& state);

json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

CameraFile read_camera(const std::filesystem::path& path);
/// A pose file holds either one matrix or an array of matrices.
std::vector<Pose> read_poses(const std::filesystem::path& path);
WaterModel read_water_model(const std::filesystem::path& path);

}  // namespace uwd
