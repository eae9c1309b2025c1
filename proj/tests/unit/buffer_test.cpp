#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <string>

#include "support/synthetic.hpp"
#include "uwd/buffer.hpp"
#include "uwd/error.hpp"

namespace uwd {
namespace {

TEST(Buffer, ImageRoundTrip) {
  std::mt19937_64 rng(1);
  const Image img = testing::random_image(4, 5, 3, rng);
  const std::vector<float> buf = image_to_buffer(img);
  ASSERT_EQ(buf.size(), 60u);
  // Row-major, channel-interleaved.
  EXPECT_EQ(buf[(2 * 5 + 3) * 3 + 1], static_cast<float>(img.at(2, 3, 1)));
  const Image back = image_from_buffer({buf, 4, 5, 3});
  for (std::size_t i = 0; i < img.size(); ++i) EXPECT_EQ(back.data()[i], static_cast<double>(buf[i]));
  EXPECT_EQ(image_to_buffer(back), buf);
}

TEST(Buffer, ShapeErrors) {
  const std::vector<float> buf(12, 0.5f);
  EXPECT_THROW(image_from_buffer({buf, 2, 2, 2}), ParameterError);
  EXPECT_THROW(image_from_buffer({buf, 2, 3, 3}), ParameterError);
  EXPECT_THROW(image_from_buffer({buf, 0, 4, 3}), ParameterError);
  EXPECT_THROW(depth_from_buffer({buf, 2, 2, 3}), ParameterError);
  EXPECT_NO_THROW(image_from_buffer({buf, 2, 2, 3}));
}

TEST(Buffer, DepthUsesNanForInvalid) {
  const std::vector<float> buf{1.5f, NAN, -1.0f, 2.0f};
  const DepthMap d = depth_from_buffer({buf, 2, 2, 1});
  EXPECT_EQ(d.valid_count(), 2u);
  const std::vector<float> back = depth_to_buffer(d);
  EXPECT_EQ(back[0], 1.5f);
  EXPECT_TRUE(std::isnan(back[1]));
  EXPECT_TRUE(std::isnan(back[2]));
  EXPECT_EQ(back[3], 2.0f);
}

TEST(Manifest, ListsUniqueOperations) {
  const json m = export_manifest();
  EXPECT_EQ(m.at("version"), 1);
  const auto& ops = m.at("operations");
  ASSERT_EQ(ops.size(), exported_operations().size());
  std::set<std::string> names;
  for (const auto& op : ops) names.insert(op.get<std::string>());
  EXPECT_EQ(names.size(), ops.size());
  for (const char* required : {"enhance", "photometric_error", "pearson_loss", "tgam_update",
                               "consistency_mask", "depth_metrics"}) {
    EXPECT_TRUE(names.count(required)) << required;
  }
}

}  // namespace
}  // namespace uwd
