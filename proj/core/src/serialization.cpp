#include "uwd/serialization.hpp"

#include <algorithm>
#include <fstream>

#include "uwd/error.hpp"

namespace uwd {
namespace {

Rgb rgb_from(const json& j, const char* key) {
  if (!j.contains(key)) throw ParameterError(std::string("water model is missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw ParameterError(std::string("water model field \"") + key + "\" must hold 3 numbers");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

bool is_number_row(const json& j, std::size_t n) {
  return j.is_array() && j.size() == n &&
         std::all_of(j.begin(), j.end(), [](const json& v) { return v.is_number(); });
}

bool is_matrix(const json& j) {
  if (is_number_row(j, 16)) return true;
  return j.is_array() && j.size() == 4 &&
         std::all_of(j.begin(), j.end(), [](const json& row) { return is_number_row(row, 4); });
}

}  // namespace

void to_json(json& j, const Intrinsics& K) {
  j = json{{"fx", K.fx}, {"fy", K.fy}, {"cx", K.cx}, {"cy", K.cy}};
}

void from_json(const json& j, Intrinsics& K) {
  K.fx = j.at("fx").get<double>();
  K.fy = j.at("fy").get<double>();
  K.cx = j.at("cx").get<double>();
  K.cy = j.at("cy").get<double>();
  K.validate();
}

void to_json(json& j, const CameraFile& cam) {
  to_json(j, cam.K);
  j["width"] = cam.width;
  j["height"] = cam.height;
}

void from_json(const json& j, CameraFile& cam) {
  from_json(j, cam.K);
  cam.width = j.value("width", 0);
  cam.height = j.value("height", 0);
}

void to_json(json& j, const Pose& pose) {
  const Eigen::Matrix4d m = pose.matrix();
  j = json::array();
  for (int r = 0; r < 4; ++r) j.push_back({m(r, 0), m(r, 1), m(r, 2), m(r, 3)});
}

void from_json(const json& j, Pose& pose) {
  if (!is_matrix(j)) throw ParameterError("pose must be a 4x4 row-major matrix");
  Eigen::Matrix4d m;
  if (j.size() == 16) {
    for (int i = 0; i < 16; ++i) m(i / 4, i % 4) = j[static_cast<std::size_t>(i)].get<double>();
  } else {
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  pose = Pose::from_matrix(m);
}

void to_json(json& j, const WaterModel& model) {
  j = json{{"B", model.backscatter}, {"beta_D", model.attenuation}};
}

void from_json(const json& j, WaterModel& model) {
  model.backscatter = rgb_from(j, "B");
  model.attenuation = rgb_from(j, "beta_D");
  model.validate();
}

void to_json(json& j, const MetricReport& r) {
  j = json{{"abs_rel", r.abs_rel}, {"sq_rel", r.sq_rel}, {"rmse", r.rmse},
           {"rmse_log", r.rmse_log}, {"delta1", r.delta1}, {"delta2", r.delta2},
           {"delta3", r.delta3}, {"n_valid", r.n_valid}};
}

void to_json(json& j, const TgamState& s) {
  j = json{{"threshold", s.threshold}, {"beta", s.beta}, {"epsilon", s.epsilon},
           {"initialized", s.initialized}};
}

void from_json(const json& j, TgamState& s) {
  s.threshold = j.value("threshold", 0.0);
  s.beta = j.value("beta", 0.98);
  s.epsilon = j.value("epsilon", 5.0);
  s.initialized = j.value("initialized", false);
  s.validate();
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParameterError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

namespace {

template <typename T>
T parse_as(const json& j, const std::filesystem::path& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ParameterError("malformed " + path.string() + ": " + e.what());
  }
}

}  // namespace

CameraFile read_camera(const std::filesystem::path& path) {
  return parse_as<CameraFile>(read_json(path), path);
}

std::vector<Pose> read_poses(const std::filesystem::path& path) {
  const json j = read_json(path);
  if (is_matrix(j)) return {parse_as<Pose>(j, path)};
  if (!j.is_array() || j.empty()) throw ParameterError(path.string() + ": expected pose matrices");
  std::vector<Pose> poses;
  for (const json& m : j) poses.push_back(parse_as<Pose>(m, path));
  return poses;
}

WaterModel read_water_model(const std::filesystem::path& path) {
  return parse_as<WaterModel>(read_json(path), path);
}

}  // namespace uwd
