#include <benchmark/benchmark.h>

#include <random>

#include "uwd/uwd.hpp"

namespace {

constexpr int kHeight = 288;
constexpr int kWidth = 448;

uwd::Image noise_image(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  uwd::Image img(kHeight, kWidth, 3);
  for (double& v : img.data()) v = dist(rng);
  return img;
}

uwd::DepthMap slanted_depth() {
  uwd::DepthMap d(kHeight, kWidth);
  for (int y = 0; y < kHeight; ++y) {
    for (int x = 0; x < kWidth; ++x) d.set(y, x, 1.0 + 4.0 * y / kHeight);
  }
  return d;
}

const uwd::Intrinsics kK{300.0, 300.0, kWidth / 2.0, kHeight / 2.0};

void BM_SynthesizeView(benchmark::State& state) {
  const uwd::Image src = noise_image(1);
  const uwd::DepthMap depth = slanted_depth();
  uwd::Pose pose;
  pose.translation = {0.05, 0.0, 0.02};
  for (auto _ : state) benchmark::DoNotOptimize(uwd::synthesize_view(src, depth, pose, kK));
}
BENCHMARK(BM_SynthesizeView)->Unit(benchmark::kMillisecond);

void BM_PhotometricError(benchmark::State& state) {
  const uwd::Image a = noise_image(2);
  const uwd::Image b = noise_image(3);
  const uwd::LossConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(uwd::photometric_error(a, b, cfg));
}
BENCHMARK(BM_PhotometricError)->Unit(benchmark::kMillisecond);

void BM_Enhance(benchmark::State& state) {
  const uwd::Image img = noise_image(4);
  const uwd::DepthMap depth = slanted_depth();
  const uwd::WaterModel model{{0.1, 0.2, 0.3}, {0.4, 0.2, 0.1}};
  const uwd::SharpenConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(uwd::enhance(img, depth, model, cfg));
}
BENCHMARK(BM_Enhance)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
