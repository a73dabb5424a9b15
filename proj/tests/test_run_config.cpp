#include <gtest/gtest.h>

#include "pixelgrasp/error.hpp"
#include "pixelgrasp/run_config.hpp"

using namespace pixelgrasp;
using nlohmann::json;

TEST(RunConfig, EmptyDocumentKeepsDefaults) {
  const run::RunConfig rc = run::run_config_from_json(json::object());
  EXPECT_EQ(rc.data.side, 304u);
  EXPECT_EQ(rc.data.depth_range.min, 20.0);
  EXPECT_EQ(rc.data.depth_range.max, 120.0);
  EXPECT_EQ(rc.train.epochs, 10u);
  EXPECT_EQ(rc.train.batch_size, 4u);
  EXPECT_FALSE(rc.camera.has_value());
  EXPECT_EQ(rc.sim.channels, sim::Channels::Rgbd);
}

TEST(RunConfig, JsonRoundtrip) {
  run::RunConfig rc;
  rc.data.side = 96;
  rc.data.augment.copies = 3;
  rc.model.in_channels = 2;
  rc.train.epochs = 7;
  rc.camera = decode::CameraModel{100, 110, 40, 50, decode::kIdentity4};
  rc.sim.scenes = 12;
  rc.sim.channels = sim::Channels::GreyDepth;
  rc.sim.setup.height = 0.55;
  rc.sim.controller.decode.smoothing = decode::QSmoothing::Mean3x3;
  rc.sim.controller.max_retries = 0;
  const json j = run::to_json(rc);
  const run::RunConfig back = run::run_config_from_json(j);
  EXPECT_EQ(run::to_json(back), j);
  EXPECT_EQ(back.sim.channels, sim::Channels::GreyDepth);
  EXPECT_EQ(back.sim.controller.decode.smoothing, decode::QSmoothing::Mean3x3);
  ASSERT_TRUE(back.camera.has_value());
  EXPECT_EQ(back.camera->fy, 110.0);
}

TEST(RunConfig, UnknownKeysRejected) {
  for (const char* text : {R"({"extra": {}})", R"({"data": {"sides": 3}})", R"({"sim": {"scene": {"n": 1}}})",
                           R"({"sim": {"controller": {"margin": 1.2}}})", R"({"data": {"augment": {"flip": true}}})"}) {
    try {
      run::run_config_from_json(json::parse(text));
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << text;
    }
  }
}

TEST(RunConfig, InvalidValuesRejected) {
  for (const char* text :
       {R"({"data": {"side": 4}})", R"({"data": {"depth_range": [5, 5]}})", R"({"sim": {"channels": "rgb"}})",
        R"({"sim": {"controller": {"smoothing": "median"}}})", R"({"sim": {"scenes": 0}})",
        R"({"train": {"split_fraction": 1.0}})", R"({"model": {"in_channels": 3}})",
        R"({"sim": {"height": "high"}})"}) {
    EXPECT_THROW(run::run_config_from_json(json::parse(text)), Error) << text;
  }
}
