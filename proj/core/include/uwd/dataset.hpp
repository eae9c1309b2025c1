#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uwd {

struct Frame {
  std::filesystem::path image;
  std::optional<std::filesystem::path> depth;
  std::string scene;
  int index = 0;  // 1-based position within the scene, in filename order

  std::string basename() const { return image.stem().string(); }
};

struct Scene {
  std::string id;
  std::vector<Frame> frames;
};

struct ScanResult {
  std::vector<Scene> scenes;
  std::vector<std::string> warnings;
};

/// Scans a dataset root laid out as
///
///   root/<scene>/{images,imgs}/<name>.{png,jpg,jpeg,tif,tiff}
///   root/<scene>/depth/<name>[_suffix].{tif,tiff,pfm}
///
/// A scene without an images/imgs directory is read flat from the scene
/// directory itself, with depth maps recognised by a "_depth" suffix. Frames
/// are ordered lexicographically by file name; a depth map pairs with the
/// image whose stem equals the depth stem or prefixes it followed by '_'.
/// Unpaired files produce warnings. Throws IoError if root is not a directory.
ScanResult scan_scenes(const std::filesystem::path& root);

/// Frames of one image directory paired with a separate depth directory by
/// the same stem rule. Frames carry no scene id. Throws IoError if either
/// directory is missing.
std::vector<Frame> pair_frames(const std::filesystem::path& image_dir,
                               const std::filesystem::path& depth_dir,
                               std::vector<std::string>& warnings);

enum class Partition { kTrain, kVal, kTest, kUnused };

struct SplitEntry {
  std::string scene;
  std::string basename;
  int index = 0;
  bool operator==(const SplitEntry&) const = default;
};

struct Split {
  std::vector<SplitEntry> train;
  std::vector<SplitEntry> val;
  std::vector<SplitEntry> test;
};

struct SplitResult {
  Split split;
  std::vector<std::string> warnings;
};

struct SplitRule {
  int test_candidates = 300;  // first N frames are test candidates
  int test_stride = 6;        // every k-th candidate, starting at frame 1
  int val_end = 350;          // frames test_candidates+1 .. val_end validate
};

/// Partition of a frame index (1-based) in a scene of `scene_size` frames.
Partition partition_of(int index, int scene_size, const SplitRule& rule = {});

/// Deterministic scene-wise split. Scenes shorter than val_end + 1 frames go
/// entirely to train with a warning.
SplitResult generate_split(const std::vector<Scene>& scenes, const SplitRule& rule = {});

/// Entries of `part` whose previous and next frames in the same scene also
/// belong to `part`, i.e. usable as the centre of a training triplet.
std::vector<SplitEntry> triplet_targets(const std::vector<SplitEntry>& part);

/// Writes train.txt, val.txt and test.txt ("scene basename" per line).
void write_split(const Split& split, const std::filesystem::path& dir);

}  // namespace uwd
