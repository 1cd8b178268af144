#include <gtest/gtest.h>

#include "fouriscale/config.hpp"
#include "support.hpp"

using namespace fouriscale;

namespace {

std::string config_error(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const char* kFull = R"({
  "original": [64, 64],
  "target": [128, 128],
  "filter": {"sigma": 0.2, "ramp": [2, 3]},
  "blocks": ["DB2", "MB"],
  "steps": 40,
  "anneal": [5, 25],
  "sigma_mild": 0.7
})";

}  // namespace

TEST(Presets, SdxlTable) {
    const auto c = parse_config(R"({"preset": "sdxl", "target": [256, 256]})");
    EXPECT_EQ(c.blocks, (std::vector<std::string>{"DB2", "MB", "UB0", "UB1"}));
    EXPECT_EQ(c.s_init, 20u);
    EXPECT_EQ(c.s_stop, 35u);
    EXPECT_EQ(c.total_steps, 50u);
    EXPECT_EQ(c.filter.sigma, 0.6);
    EXPECT_EQ(c.original, (Extent2{128, 128}));
    EXPECT_EQ(c.filter.ramp_rows, 16.0);
}

TEST(Presets, SdSixteenTimes) {
    for (const char* name : {"sd15", "sd21"}) {
        const auto c = preset_config(name, {256, 256});
        EXPECT_EQ(c.blocks, (std::vector<std::string>{"DB2", "DB3", "MB", "UB0", "UB1", "UB2"}));
        EXPECT_EQ(c.total_steps, 50u);
        EXPECT_EQ(c.s_init, 20u);
        EXPECT_EQ(c.s_stop, 35u);
        EXPECT_EQ(c.filter.sigma, 0.0);
        EXPECT_EQ(c.filter.ramp_rows, 0.0);
    }
}

TEST(Presets, SdWindowsByPixelRatio) {
    // 4x and 6.25x 1:1 -> [10, 30]; 8x 1:2 and 16x -> [20, 35]
    const auto four = preset_config("sd15", {128, 128});
    EXPECT_EQ(four.s_init, 10u);
    EXPECT_EQ(four.s_stop, 30u);
    const auto six = preset_config("sd15", {160, 160});
    EXPECT_EQ(six.s_init, 10u);
    EXPECT_EQ(six.s_stop, 30u);
    const auto eight = preset_config("sd21", {128, 256});
    EXPECT_EQ(eight.s_init, 20u);
    EXPECT_EQ(eight.s_stop, 35u);
    EXPECT_EQ(eight.full_scale(), 4u);
}

TEST(Presets, UnknownNameIsConfigError) {
    EXPECT_NE(config_error(R"({"preset": "sd3", "target": [128, 128]})").find("preset"), std::string::npos);
}

TEST(Presets, FieldsOverridePreset) {
    const auto c = parse_config(R"({"preset": "sd21", "target": [256, 256], "anneal": [5, 15], "filter": {"sigma": 0.3}})");
    EXPECT_EQ(c.s_init, 5u);
    EXPECT_EQ(c.s_stop, 15u);
    EXPECT_EQ(c.filter.sigma, 0.3);
    EXPECT_EQ(c.blocks.size(), 6u);
}

TEST(LoadConfig, FullDocument) {
    const auto c = parse_config(kFull);
    EXPECT_TRUE(c.preset.empty());
    EXPECT_EQ(c.original, (Extent2{64, 64}));
    EXPECT_EQ(c.target, (Extent2{128, 128}));
    EXPECT_EQ(c.filter.sigma, 0.2);
    EXPECT_EQ(c.filter.ramp_rows, 2.0);
    EXPECT_EQ(c.filter.ramp_cols, 3.0);
    EXPECT_EQ(c.total_steps, 40u);
    EXPECT_EQ(c.s_init, 5u);
    EXPECT_EQ(c.s_stop, 25u);
    EXPECT_EQ(c.sigma_mild, 0.7);
}

TEST(LoadConfig, TrainingShapes) {
    auto doc = json::parse(kFull);
    doc["training_shapes"] = {{64, 64}, {48, 80}};
    doc["target"] = {96, 160};
    doc["original"] = {48, 48};
    const auto c = load_config(doc);
    ASSERT_EQ(c.training_shapes.size(), 2u);
    EXPECT_EQ(c.base_shape(), (Extent2{48, 80}));
}

TEST(LoadConfig, AnnealOrderViolation) {
    auto doc = json::parse(kFull);
    doc["anneal"] = {30, 20};
    EXPECT_THROW(load_config(doc), ConfigError);
    EXPECT_NE(config_error(doc.dump()).find("anneal"), std::string::npos);
}

TEST(LoadConfig, ErrorsNameTheField) {
    auto doc = json::parse(kFull);
    doc.erase("steps");
    EXPECT_NE(config_error(doc.dump()).find("steps"), std::string::npos);

    doc = json::parse(kFull);
    doc["colour"] = 1;
    EXPECT_NE(config_error(doc.dump()).find("colour"), std::string::npos);

    doc = json::parse(kFull);
    doc["filter"]["cutoff"] = 2;
    EXPECT_NE(config_error(doc.dump()).find("filter.cutoff"), std::string::npos);

    doc = json::parse(kFull);
    doc["target"] = {32, 128};
    EXPECT_NE(config_error(doc.dump()).find("target"), std::string::npos);

    doc = json::parse(kFull);
    doc["original"] = {0, 64};
    EXPECT_NE(config_error(doc.dump()).find("original"), std::string::npos);

    doc = json::parse(kFull);
    doc["sigma_mild"] = 0.1;
    EXPECT_NE(config_error(doc.dump()).find("sigma_mild"), std::string::npos);

    doc = json::parse(kFull);
    doc["filter"]["sigma"] = "high";
    EXPECT_NE(config_error(doc.dump()).find("filter.sigma"), std::string::npos);

    doc = json::parse(kFull);
    doc["blocks"] = {1, 2};
    EXPECT_NE(config_error(doc.dump()).find("blocks"), std::string::npos);

    doc = json::parse(kFull);
    doc["steps"] = -3;
    EXPECT_NE(config_error(doc.dump()).find("steps"), std::string::npos);
}

TEST(LoadConfig, MalformedJson) {
    EXPECT_NE(config_error("{not json").find("malformed"), std::string::npos);
    EXPECT_THROW(parse_config("[1, 2]"), ConfigError);
}

TEST(LoadConfig, FileAccess) {
    support::TempDir dir("config");
    support::write_file(dir / "c.json", kFull);
    EXPECT_EQ(load_config_file(dir / "c.json").total_steps, 40u);
    EXPECT_THROW(load_config_file(dir / "none.json"), IoError);
}

TEST(ToJson, ConfigRoundTrips) {
    for (const auto& c : {parse_config(kFull), preset_config("sdxl", {256, 384}), preset_config("sd15", {128, 128})}) {
        const auto back = load_config(to_json(c));
        EXPECT_EQ(back.preset, c.preset);
        EXPECT_EQ(back.original, c.original);
        EXPECT_EQ(back.target, c.target);
        EXPECT_EQ(back.filter, c.filter);
        EXPECT_EQ(back.blocks, c.blocks);
        EXPECT_EQ(back.total_steps, c.total_steps);
        EXPECT_EQ(back.s_init, c.s_init);
        EXPECT_EQ(back.s_stop, c.s_stop);
        EXPECT_EQ(back.sigma_mild, c.sigma_mild);
    }
}

TEST(ToJson, ScheduleStepFields) {
    const auto c = parse_config(kFull);
    const auto j = to_json(schedule_params(0, c));
    EXPECT_EQ(j["t"], 0);
    EXPECT_EQ(j["dilation"], 2);
    EXPECT_EQ(j["filter_active"], true);
    EXPECT_EQ(j["effective_filter"]["sigma"], 0.2);
    EXPECT_EQ(j["guidance_filter"]["sigma"], 0.7);
    EXPECT_EQ(j["effective_filter"]["scale"][0], 2.0);
}
