#include "uwd/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "uwd/error.hpp"

namespace fs = std::filesystem;

namespace uwd {
namespace {

std::string lower_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

bool is_image_file(const fs::path& p) {
  static const std::set<std::string> kExt{".png", ".jpg", ".jpeg", ".tif", ".tiff"};
  return kExt.count(lower_extension(p)) > 0;
}

bool is_depth_file(const fs::path& p) {
  static const std::set<std::string> kExt{".tif", ".tiff", ".pfm"};
  return kExt.count(lower_extension(p)) > 0;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    if (entry.is_regular_file()) out.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

// Image stem matching a depth stem: equal, or a prefix followed by '_'.
const Frame* find_owner(const std::map<std::string, std::size_t>& by_stem,
                        const std::vector<Frame>& frames, const std::string& depth_stem) {
  if (auto it = by_stem.find(depth_stem); it != by_stem.end()) return &frames[it->second];
  for (auto pos = depth_stem.rfind('_'); pos != std::string::npos && pos > 0;
       pos = depth_stem.rfind('_', pos - 1)) {
    if (auto it = by_stem.find(depth_stem.substr(0, pos)); it != by_stem.end()) {
      return &frames[it->second];
    }
  }
  return nullptr;
}

// Collects frames from `image_dir` and pairs depth files with them. With
// `flat` set, files ending in "_depth" inside image_dir are depth maps.
std::vector<Frame> collect_frames(const fs::path& image_dir, const fs::path& depth_dir, bool flat,
                                  const std::string& scene, std::vector<std::string>& warnings) {
  std::vector<Frame> frames;
  std::vector<fs::path> depth_files;
  for (const fs::path& p : sorted_files(image_dir)) {
    const std::string stem = p.stem().string();
    if (flat && ends_with(stem, "_depth")) {
      if (is_depth_file(p)) depth_files.push_back(p);
      continue;
    }
    if (!is_image_file(p)) continue;
    Frame f;
    f.image = p;
    f.scene = scene;
    frames.push_back(std::move(f));
  }
  if (!depth_dir.empty() && fs::is_directory(depth_dir)) {
    for (const fs::path& p : sorted_files(depth_dir)) {
      if (is_depth_file(p)) depth_files.push_back(p);
    }
  }

  std::map<std::string, std::size_t> by_stem;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    frames[i].index = static_cast<int>(i) + 1;
    by_stem.emplace(frames[i].basename(), i);
  }
  const std::string where = scene.empty() ? image_dir.string() : scene;
  for (const fs::path& p : depth_files) {
    const Frame* owner = find_owner(by_stem, frames, p.stem().string());
    if (!owner) {
      warnings.push_back(where + ": depth file " + p.filename().string() + " has no image");
      continue;
    }
    auto& frame = frames[static_cast<std::size_t>(owner->index - 1)];
    if (frame.depth) {
      warnings.push_back(where + ": extra depth file " + p.filename().string() + " for " +
                         frame.basename());
      continue;
    }
    frame.depth = p;
  }
  if (!depth_files.empty()) {
    for (const Frame& f : frames) {
      if (!f.depth) warnings.push_back(where + ": frame " + f.basename() + " has no depth");
    }
  }
  return frames;
}

Scene scan_one(const fs::path& dir, std::vector<std::string>& warnings) {
  Scene scene;
  scene.id = dir.filename().string();
  fs::path image_dir = dir;
  for (const char* name : {"images", "imgs"}) {
    if (fs::is_directory(dir / name)) {
      image_dir = dir / name;
      break;
    }
  }
  scene.frames = collect_frames(image_dir, dir / "depth", image_dir == dir, scene.id, warnings);
  return scene;
}

}  // namespace

std::vector<Frame> pair_frames(const fs::path& image_dir, const fs::path& depth_dir,
                               std::vector<std::string>& warnings) {
  if (!fs::is_directory(image_dir)) throw IoError(image_dir.string() + " is not a directory");
  if (!fs::is_directory(depth_dir)) throw IoError(depth_dir.string() + " is not a directory");
  return collect_frames(image_dir, depth_dir, false, "", warnings);
}

ScanResult scan_scenes(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("dataset root " + root.string() + " is not a directory");
  std::vector<fs::path> dirs;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_directory()) dirs.push_back(entry.path());
  }
  if (ec) throw IoError("cannot list " + root.string() + ": " + ec.message());
  std::sort(dirs.begin(), dirs.end());

  ScanResult out;
  for (const fs::path& d : dirs) out.scenes.push_back(scan_one(d, out.warnings));
  return out;
}

Partition partition_of(int index, int scene_size, const SplitRule& rule) {
  if (scene_size <= rule.val_end) return Partition::kTrain;
  if (index <= rule.test_candidates) {
    return (index - 1) % rule.test_stride == 0 ? Partition::kTest : Partition::kUnused;
  }
  if (index <= rule.val_end) return Partition::kVal;
  return Partition::kTrain;
}

SplitResult generate_split(const std::vector<Scene>& scenes, const SplitRule& rule) {
  SplitResult out;
  for (const Scene& scene : scenes) {
    const int n = static_cast<int>(scene.frames.size());
    if (n <= rule.val_end) {
      out.warnings.push_back(scene.id + ": only " + std::to_string(n) + " frames (need " +
                             std::to_string(rule.val_end + 1) + "), all assigned to train");
    }
    for (const Frame& f : scene.frames) {
      SplitEntry e{scene.id, f.basename(), f.index};
      switch (partition_of(f.index, n, rule)) {
        case Partition::kTrain: out.split.train.push_back(std::move(e)); break;
        case Partition::kVal: out.split.val.push_back(std::move(e)); break;
        case Partition::kTest: out.split.test.push_back(std::move(e)); break;
        case Partition::kUnused: break;
      }
    }
  }
  return out;
}

std::vector<SplitEntry> triplet_targets(const std::vector<SplitEntry>& part) {
  std::set<std::pair<std::string, int>> members;
  for (const SplitEntry& e : part) members.emplace(e.scene, e.index);
  std::vector<SplitEntry> out;
  for (const SplitEntry& e : part) {
    if (members.count({e.scene, e.index - 1}) && members.count({e.scene, e.index + 1})) {
      out.push_back(e);
    }
  }
  return out;
}

void write_split(const Split& split, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const std::pair<const char*, const std::vector<SplitEntry>*> parts[] = {
      {"train.txt", &split.train}, {"val.txt", &split.val}, {"test.txt", &split.test}};
  for (const auto& [name, entries] : parts) {
    std::ofstream out(dir / name);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    for (const SplitEntry& e : *entries) out << e.scene << ' ' << e.basename << '\n';
  }
}

}  // namespace uwd
