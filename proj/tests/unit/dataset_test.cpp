#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "uwd/dataset.hpp"
#include "uwd/error.hpp"

namespace fs = std::filesystem;

namespace uwd {
namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("uwd_dataset_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void touch(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << "";
}

std::string frame_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%05d", i);
  return buf;
}

std::vector<Scene> synthetic_scenes(int count, int frames) {
  std::vector<Scene> out;
  for (int s = 0; s < count; ++s) {
    Scene scene{"scene" + std::to_string(s), {}};
    for (int i = 1; i <= frames; ++i) scene.frames.push_back({frame_name(i) + ".png", std::nullopt, scene.id, i});
    out.push_back(std::move(scene));
  }
  return out;
}

TEST(ScanScenes, NestedLayoutPairsDepth) {
  TempDir tmp;
  for (const char* scene : {"canyon", "reef"}) {
    for (int i = 1; i <= 10; ++i) {
      touch(tmp.path() / scene / "imgs" / (frame_name(i) + ".tiff"));
      touch(tmp.path() / scene / "depth" / (frame_name(i) + "_abs_depth.tif"));
    }
  }
  const ScanResult r = scan_scenes(tmp.path());
  ASSERT_EQ(r.scenes.size(), 2u);
  EXPECT_TRUE(r.warnings.empty());
  EXPECT_EQ(r.scenes[0].id, "canyon");
  for (const Scene& s : r.scenes) {
    ASSERT_EQ(s.frames.size(), 10u);
    for (int i = 0; i < 10; ++i) {
      EXPECT_EQ(s.frames[i].index, i + 1);
      EXPECT_EQ(s.frames[i].basename(), frame_name(i + 1));
      ASSERT_TRUE(s.frames[i].depth.has_value());
      EXPECT_EQ(s.frames[i].depth->filename().string(), frame_name(i + 1) + "_abs_depth.tif");
    }
  }
}

TEST(ScanScenes, FlatLayoutAndWarnings) {
  TempDir tmp;
  const fs::path scene = tmp.path() / "wreck";
  touch(scene / "a.png");
  touch(scene / "a_depth.tif");
  touch(scene / "b.png");
  touch(scene / "zz_depth.tif");  // no image
  touch(scene / "notes.txt");
  const ScanResult r = scan_scenes(tmp.path());
  ASSERT_EQ(r.scenes.size(), 1u);
  const Scene& s = r.scenes[0];
  ASSERT_EQ(s.frames.size(), 2u);
  EXPECT_TRUE(s.frames[0].depth.has_value());
  EXPECT_FALSE(s.frames[1].depth.has_value());
  ASSERT_EQ(r.warnings.size(), 2u);
  std::set<std::string> w(r.warnings.begin(), r.warnings.end());
  EXPECT_TRUE(w.count("wreck: depth file zz_depth.tif has no image"));
  EXPECT_TRUE(w.count("wreck: frame b has no depth"));
}

TEST(ScanScenes, MissingRootThrows) {
  EXPECT_THROW(scan_scenes("/nonexistent/uwd/root"), IoError);
}

TEST(PartitionOf, Rule) {
  EXPECT_EQ(partition_of(1, 400), Partition::kTest);
  EXPECT_EQ(partition_of(2, 400), Partition::kUnused);
  EXPECT_EQ(partition_of(7, 400), Partition::kTest);
  EXPECT_EQ(partition_of(295, 400), Partition::kTest);
  EXPECT_EQ(partition_of(300, 400), Partition::kUnused);
  EXPECT_EQ(partition_of(301, 400), Partition::kVal);
  EXPECT_EQ(partition_of(350, 400), Partition::kVal);
  EXPECT_EQ(partition_of(351, 400), Partition::kTrain);
  EXPECT_EQ(partition_of(1, 350), Partition::kTrain);
}

TEST(GenerateSplit, TwelveScenesOfFourHundred) {
  const SplitResult r = generate_split(synthetic_scenes(12, 400));
  EXPECT_EQ(r.split.test.size(), 600u);
  EXPECT_EQ(r.split.val.size(), 600u);
  EXPECT_EQ(r.split.train.size(), 12u * 50u);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(GenerateSplit, SizesAndDisjointness) {
  for (int n : {351, 360, 1000}) {
    const SplitResult r = generate_split(synthetic_scenes(1, n));
    EXPECT_EQ(r.split.test.size(), 50u);
    EXPECT_EQ(r.split.val.size(), 50u);
    EXPECT_EQ(r.split.train.size(), static_cast<std::size_t>(n - 350));
    std::set<int> seen;
    for (const auto* part : {&r.split.train, &r.split.val, &r.split.test})
      for (const SplitEntry& e : *part) EXPECT_TRUE(seen.insert(e.index).second);
  }
}

TEST(GenerateSplit, ShortScenesGoToTrain) {
  const SplitResult r = generate_split(synthetic_scenes(1, 100));
  EXPECT_EQ(r.split.train.size(), 100u);
  EXPECT_TRUE(r.split.test.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
}

TEST(GenerateSplit, Deterministic) {
  const auto scenes = synthetic_scenes(3, 420);
  const SplitResult a = generate_split(scenes), b = generate_split(scenes);
  EXPECT_EQ(a.split.train, b.split.train);
  EXPECT_EQ(a.split.test, b.split.test);
}

TEST(TripletTargets, NeedBothNeighboursInThePartition) {
  const SplitResult r = generate_split(synthetic_scenes(2, 400));
  const auto t = triplet_targets(r.split.train);
  // Train is 351..400 per scene: centres 352..399.
  EXPECT_EQ(t.size(), 2u * 48u);
  EXPECT_EQ(t.front().index, 352);
  EXPECT_TRUE(triplet_targets(r.split.test).empty());
}

TEST(WriteSplit, OneLinePerEntry) {
  TempDir tmp;
  Split s;
  s.train = {{"a", "001", 1}, {"a", "002", 2}};
  s.test = {{"b", "009", 9}};
  write_split(s, tmp.path() / "out");
  std::ifstream in(tmp.path() / "out" / "train.txt");
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  EXPECT_EQ(lines, (std::vector<std::string>{"a 001", "a 002"}));
  EXPECT_TRUE(fs::exists(tmp.path() / "out" / "val.txt"));
  EXPECT_EQ(fs::file_size(tmp.path() / "out" / "val.txt"), 0u);
}

}  // namespace
}  // namespace uwd
