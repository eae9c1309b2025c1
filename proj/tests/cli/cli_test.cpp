#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support/synthetic.hpp"
#include "uwd/evaluation.hpp"
#include "uwd/io.hpp"
#include "uwd/serialization.hpp"
#include "uwd/uifm.hpp"

namespace fs = std::filesystem;

namespace uwd {
namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("uwd_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  // Runs the tool with `args`, returning its exit status. Output goes to log.txt.
  int run(const std::string& args) {
    const std::string cmd = std::string(UWD_CLI_PATH) + " " + args + " > " +
                            (dir_ / "log.txt").string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string log() const {
    std::ifstream in(dir_ / "log.txt");
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }
  fs::path path(const std::string& rel) const { return dir_ / rel; }
  std::string arg(const std::string& rel) const { return path(rel).string(); }

  // Textured plane pair: frame a is the target, frame b sees it from 10 cm right.
  void write_plane_pair() {
    const Intrinsics K{50, 50, 31.5, 31.5};
    write_image(path("a.png"), testing::render_plane(64, 64, 3, K, 2.0, {0, 0, 0}), PngDepth::k16);
    write_image(path("b.png"), testing::render_plane(64, 64, 3, K, 2.0, {0.1, 0, 0}), PngDepth::k16);
    write_depth(path("depth.tif"), DepthMap(64, 64, 2.0));
    write_json(path("K.json"), json{{"fx", 50}, {"fy", 50}, {"cx", 31.5}, {"cy", 31.5}});
    write_json(path("pose.json"), json(testing::translation(0.1, 0, 0)));
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateThenEnhance) {
  const WaterModel model{{0.1, 0.2, 0.3}, {0.4, 0.2, 0.1}};
  write_json(path("model.json"), json(model));
  std::mt19937_64 rng(1);
  fs::create_directories(path("clean"));
  fs::create_directories(path("depth"));
  for (const char* name : {"f001", "f002"}) {
    write_image(path(std::string("clean/") + name + ".png"), testing::random_image(16, 20, 3, rng),
                PngDepth::k16);
    write_depth(path(std::string("depth/") + name + ".tif"), testing::random_depth(16, 20, rng, 0.5, 1.5));
  }
  ASSERT_EQ(run("simulate --clean " + arg("clean") + " --depths " + arg("depth") + " --model " +
                arg("model.json") + " --out " + arg("sim")),
            0)
      << log();
  const Image clean = read_image(path("clean/f001.png"));
  const DepthMap depth = read_depth(path("depth/f001.tif"));
  const Image expected = degrade(clean, depth, model);
  const Image got = read_image(path("sim/images/f001.png"));
  ASSERT_TRUE(got.same_shape(expected));
  for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got.data()[i], expected.data()[i], 1e-4);

  ASSERT_EQ(run("enhance --images " + arg("sim/images") + " --depths " + arg("depth") +
                " --model " + arg("model.json") + " --out " + arg("enh")),
            0)
      << log();
  EXPECT_TRUE(fs::exists(path("enh/images/f002.png")));
  EXPECT_EQ(read_water_model(path("enh/scene_model.json")).attenuation, model.attenuation);

  EXPECT_NE(run("enhance --images " + arg("sim/images") + " --depths " + arg("depth") +
                " --out " + arg("none")),
            0);
  EXPECT_EQ(read_json(path("none/diagnostics.json")).at("kind"), "parameter");
}

TEST_F(Cli, EvalOfGroundTruthIsPerfect) {
  std::mt19937_64 rng(2);
  fs::create_directories(path("gt"));
  fs::create_directories(path("pred"));
  for (const char* name : {"x1", "x2"}) {
    const DepthMap d = testing::random_depth(8, 8, rng, 1, 10);
    write_depth(path(std::string("gt/") + name + ".tif"), d);
    write_depth(path(std::string("pred/") + name + "_pred.tif"), d);
  }
  ASSERT_EQ(run("eval --pred " + arg("pred") + " --gt " + arg("gt") + " --median-scale --out " +
                arg("ev")),
            0)
      << log();
  const json m = read_json(path("ev/metrics.json"));
  EXPECT_NEAR(m.at("mean").at("abs_rel").get<double>(), 0.0, 1e-6);
  EXPECT_EQ(m.at("mean").at("delta1").get<double>(), 1.0);
  EXPECT_EQ(m.at("images").size(), 2u);
  EXPECT_TRUE(fs::exists(path("ev/metrics.txt")));
}

TEST_F(Cli, SplitWritesLists) {
  for (const char* scene : {"s1", "s2"}) {
    fs::create_directories(path(std::string("root/") + scene));
    for (int i = 1; i <= 12; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "root/%s/%04d.png", scene, i);
      write_image(path(name), Image(2, 2, 3, 0.5));
    }
  }
  ASSERT_EQ(run("split --root " + arg("root") + " --out " + arg("lists")), 0) << log();
  for (const char* f : {"train.txt", "val.txt", "test.txt"}) EXPECT_TRUE(fs::exists(path(std::string("lists/") + f))) << f;
  EXPECT_EQ(read_json(path("lists/split.json")).at("scenes"), 2);
}

TEST_F(Cli, RotateIsDeterministicInTheSeed) {
  std::mt19937_64 rng(3);
  fs::create_directories(path("img"));
  fs::create_directories(path("dep"));
  for (const char* name : {"a", "b", "c"}) {
    write_image(path(std::string("img/") + name + ".png"), testing::random_image(40, 60, 3, rng));
    write_depth(path(std::string("dep/") + name + ".tif"), testing::random_depth(40, 60, rng, 1, 5));
  }
  const std::string base = "rotate --images " + arg("img") + " --depths " + arg("dep") + " --gamma 10";
  ASSERT_EQ(run(base + " --seed 7 --out " + arg("r1")), 0) << log();
  ASSERT_EQ(run(base + " --seed 7 --out " + arg("r2")), 0) << log();
  ASSERT_EQ(run(base + " --seed 8 --out " + arg("r3")), 0) << log();
  const json a1 = read_json(path("r1/angles.json")).at("angles");
  EXPECT_EQ(a1, read_json(path("r2/angles.json")).at("angles"));
  EXPECT_NE(a1, read_json(path("r3/angles.json")).at("angles"));
  for (const auto& [name, theta] : a1.items()) EXPECT_LE(std::abs(theta.get<double>()), 10.0);
  const Image r1 = read_image(path("r1/images/a.png"));
  const Image r2 = read_image(path("r2/images/a.png"));
  ASSERT_TRUE(r1.same_shape(r2));
  EXPECT_TRUE(std::equal(r1.data().begin(), r1.data().end(), r2.data().begin()));
  EXPECT_TRUE(fs::exists(path("r1/depth/c.tif")));
}

TEST_F(Cli, LossesFeedTgamMasks) {
  write_plane_pair();
  ASSERT_EQ(run("losses --target " + arg("a.png") + " --sources " + arg("b.png") + " --depth " +
                arg("depth.tif") + " --poses " + arg("pose.json") + " --K " + arg("K.json") +
                " --out " + arg("loss")),
            0)
      << log();
  const json s = read_json(path("loss/losses.json"));
  // Correct depth and pose: the photometric error is near zero.
  EXPECT_LT(s.at("photometric")[0].get<double>(), 0.01);
  ASSERT_TRUE(fs::exists(path("loss/teacher.tif")));

  const std::string teacher = arg("loss/teacher.tif");
  ASSERT_EQ(run("masks --mode tgam --loss-maps " + teacher + " " + teacher + " --out " + arg("m")), 0)
      << log();
  const json trace = read_json(path("m/masks.json")).at("trace");
  ASSERT_EQ(trace.size(), 2u);
  // First update initialises the threshold; the second repeats the same frame.
  EXPECT_EQ(trace[0].at("threshold"), trace[0].at("frame_threshold"));
  EXPECT_NEAR(trace[1].at("threshold").get<double>(), trace[0].at("threshold").get<double>(), 1e-12);
  EXPECT_TRUE(read_json(path("m/state.json")).at("initialized").get<bool>());
  EXPECT_TRUE(fs::exists(path("m/0_teacher.png")));

  ASSERT_EQ(run("masks --mode am --target " + arg("a.png") + " --sources " + arg("b.png") +
                " --depth " + arg("depth.tif") + " --poses " + arg("pose.json") + " --K " +
                arg("K.json") + " --out " + arg("am")),
            0)
      << log();
  EXPECT_TRUE(fs::exists(path("am/auto_mask.png")));
}

TEST_F(Cli, ConsistencyOfIdenticalDepthsKeepsEverything) {
  write_depth(path("d.tif"), DepthMap(12, 12, 3.0));
  write_json(path("K.json"), json{{"fx", 20}, {"fy", 20}, {"cx", 5.5}, {"cy", 5.5}});
  write_json(path("I.json"), json(Pose::identity()));
  ASSERT_EQ(run("masks --mode consistency --depth " + arg("d.tif") + " --source-depths " +
                arg("d.tif") + " --poses " + arg("I.json") + " --K " + arg("K.json") + " --out " +
                arg("c")),
            0)
      << log();
  EXPECT_EQ(read_json(path("c/masks.json")).at("keep_rate"), 1.0);
  EXPECT_NE(run("masks --mode consistency --depth " + arg("d.tif") + " --out " + arg("c2")), 0);
  EXPECT_EQ(read_json(path("c2/diagnostics.json")).at("kind"), "parameter");
}

TEST_F(Cli, FitDepthRecoversThePlane) {
  write_plane_pair();
  ASSERT_EQ(run("fit-depth --frames " + arg("a.png") + " " + arg("b.png") + " --poses " +
                arg("pose.json") + " --K " + arg("K.json") + " --grid 8 --iters 300 --init 4 --out " +
                arg("fit")),
            0)
      << log();
  const json t = read_json(path("fit/trace.json"));
  const auto trace = t.at("trace").get<std::vector<double>>();
  for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1]);
  // 16-bit PNG inputs add quantisation noise, hence the looser bound.
  EXPECT_LT(depth_metrics(read_depth(path("fit/depth.tif")), DepthMap(64, 64, 2.0)).abs_rel, 0.05);
}

TEST_F(Cli, ErrorsProduceJsonDiagnostics) {
  EXPECT_NE(run("eval --pred " + arg("missing") + " --gt " + arg("missing") + " --out " + arg("e")), 0);
  const json d = read_json(path("e/diagnostics.json"));
  EXPECT_EQ(d.at("kind"), "io");
  EXPECT_EQ(d.at("command"), "eval");
  EXPECT_FALSE(d.at("message").get<std::string>().empty());
  // The same object also goes to stderr.
  EXPECT_NE(log().find("\"kind\":\"io\""), std::string::npos);

  write_plane_pair();
  EXPECT_NE(run("fit-depth --frames " + arg("a.png") + " " + arg("b.png") + " " + arg("b.png") +
                " --poses " + arg("pose.json") + " --K " + arg("K.json") + " --out " + arg("f")),
            0);
  EXPECT_EQ(read_json(path("f/diagnostics.json")).at("kind"), "parameter");

  EXPECT_NE(run("rotate --images x --out " + arg("u")), 0);
  EXPECT_EQ(read_json(path("u/diagnostics.json")).at("kind"), "usage");
  EXPECT_NE(run("nonsense"), 0);
}

}  // namespace
}  // namespace uwd
