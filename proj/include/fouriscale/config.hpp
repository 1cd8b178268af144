#pragma once

// JSON configuration:
//
//   {
//     "preset"?: "sd15" | "sd21" | "sdxl",
//     "original": [h, w],
//     "target": [H, W],
//     "filter": {"sigma": x, "ramp"?: [R_h, R_w]},
//     "blocks": ["DB2", ...],
//     "steps": n,
//     "anneal": [S_init, S_stop],
//     "sigma_mild": x,
//     "training_shapes"?: [[h, w], ...]
//   }
//
// With a preset only "target" is required; every other field present
// overrides the preset. Without one, all non-optional fields are required.
// Unknown fields are rejected.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fouriscale/error.hpp"
#include "fouriscale/filters.hpp"
#include "fouriscale/pipeline.hpp"

namespace fouriscale {

using json = nlohmann::json;

inline const std::vector<std::string>& sd_blocks() {
    static const std::vector<std::string> b{"DB2", "DB3", "MB", "UB0", "UB1", "UB2"};
    return b;
}

inline const std::vector<std::string>& sdxl_blocks() {
    static const std::vector<std::string> b{"DB2", "MB", "UB0", "UB1"};
    return b;
}

/// Built-in settings for SD 1.5 / SD 2.1 (512px, 64x64 latents) and SDXL
/// (1024px, 128x128 latents) at the given latent target size.
///
/// SD runs anneal over [10, 30] up to 6.25x the training pixel count and over
/// [20, 35] beyond it (the 8x 1:2 and 16x settings); SDXL always uses
/// [20, 35] with a sigma = 0.6 soft filter. sigma_mild defaults to 1
/// (all-pass guidance branch) and should be set explicitly when used.
inline ScaleConfig preset_config(const std::string& name, Extent2 target,
                                 std::optional<Extent2> original = std::nullopt) {
    ScaleConfig cfg;
    cfg.preset = name;
    cfg.target = target;
    cfg.total_steps = 50;
    cfg.sigma_mild = 1.0;
    if (name == "sd15" || name == "sd21") {
        cfg.original = original.value_or(Extent2{64, 64});
        cfg.blocks = sd_blocks();
        cfg.filter = FilterSpec::ideal(1.0);
        // pixel ratio <= 6.25  <=>  4 * H*W <= 25 * h*w
        const bool moderate = 4 * target.area() <= 25 * cfg.original.area();
        cfg.s_init = moderate ? 10 : 20;
        cfg.s_stop = moderate ? 30 : 35;
    } else if (name == "sdxl") {
        cfg.original = original.value_or(Extent2{128, 128});
        cfg.blocks = sdxl_blocks();
        cfg.filter = FilterSpec::ideal(1.0);
        cfg.filter.sigma = 0.6;
        cfg.filter.ramp_rows = std::max(static_cast<double>(target.rows / 16), 1.0);
        cfg.filter.ramp_cols = std::max(static_cast<double>(target.cols / 16), 1.0);
        cfg.s_init = 20;
        cfg.s_stop = 35;
    } else {
        throw ConfigError("preset: unknown preset \"" + name + "\" (expected sd15, sd21, sdxl)");
    }
    return cfg;
}

namespace detail {

inline bool is_count(const json& j) {
    return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

inline Extent2 parse_extent(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !is_count(j[0]) || !is_count(j[1]))
        throw ConfigError(field + ": expected [rows, cols] of positive integers");
    Extent2 e{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
    if (e.rows == 0 || e.cols == 0) throw ConfigError(field + ": extents must be >= 1");
    return e;
}

inline double parse_number(const json& j, const std::string& field) {
    if (!j.is_number()) throw ConfigError(field + ": expected a number");
    return j.get<double>();
}

inline std::size_t parse_count(const json& j, const std::string& field) {
    if (!is_count(j)) throw ConfigError(field + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

inline void reject_unknown(const json& obj, const std::set<std::string>& known,
                           const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.contains(it.key()))
            throw ConfigError(where + it.key() + ": unknown field");
}

}  // namespace detail

inline ScaleConfig load_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    detail::reject_unknown(doc,
                           {"preset", "original", "target", "filter", "blocks", "steps",
                            "anneal", "sigma_mild", "training_shapes"},
                           "");

    const bool has_preset = doc.contains("preset");
    const auto require = [&](const char* field) {
        if (!doc.contains(field)) throw ConfigError(std::string(field) + ": missing required field");
    };
    require("target");
    if (!has_preset)
        for (const char* f : {"original", "filter", "blocks", "steps", "anneal", "sigma_mild"})
            require(f);

    const Extent2 target = detail::parse_extent(doc["target"], "target");
    std::optional<Extent2> original;
    if (doc.contains("original")) original = detail::parse_extent(doc["original"], "original");

    ScaleConfig cfg;
    if (has_preset) {
        if (!doc["preset"].is_string()) throw ConfigError("preset: expected a string");
        cfg = preset_config(doc["preset"].get<std::string>(), target, original);
    } else {
        cfg.target = target;
        cfg.original = *original;
    }

    if (doc.contains("filter")) {
        const auto& f = doc["filter"];
        if (!f.is_object()) throw ConfigError("filter: expected an object");
        detail::reject_unknown(f, {"sigma", "ramp"}, "filter.");
        if (f.contains("sigma")) {
            cfg.filter.sigma = detail::parse_number(f["sigma"], "filter.sigma");
        } else if (!has_preset) {
            throw ConfigError("filter.sigma: missing required field");
        }
        if (f.contains("ramp")) {
            const auto& r = f["ramp"];
            if (!r.is_array() || r.size() != 2)
                throw ConfigError("filter.ramp: expected [R_h, R_w]");
            cfg.filter.ramp_rows = detail::parse_number(r[0], "filter.ramp");
            cfg.filter.ramp_cols = detail::parse_number(r[1], "filter.ramp");
        }
    }
    if (doc.contains("blocks")) {
        const auto& b = doc["blocks"];
        if (!b.is_array()) throw ConfigError("blocks: expected an array of strings");
        cfg.blocks.clear();
        for (const auto& name : b) {
            if (!name.is_string()) throw ConfigError("blocks: expected an array of strings");
            cfg.blocks.push_back(name.get<std::string>());
        }
    }
    if (doc.contains("steps")) cfg.total_steps = detail::parse_count(doc["steps"], "steps");
    if (doc.contains("anneal")) {
        const auto& a = doc["anneal"];
        if (!a.is_array() || a.size() != 2)
            throw ConfigError("anneal: expected [S_init, S_stop]");
        cfg.s_init = detail::parse_count(a[0], "anneal");
        cfg.s_stop = detail::parse_count(a[1], "anneal");
    }
    if (doc.contains("sigma_mild"))
        cfg.sigma_mild = detail::parse_number(doc["sigma_mild"], "sigma_mild");
    if (doc.contains("training_shapes")) {
        const auto& shapes = doc["training_shapes"];
        if (!shapes.is_array()) throw ConfigError("training_shapes: expected an array");
        for (const auto& s : shapes)
            cfg.training_shapes.push_back(detail::parse_extent(s, "training_shapes"));
    }

    validate(cfg);
    return cfg;
}

inline ScaleConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return load_config(doc);
}

inline ScaleConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

inline json to_json(const FilterSpec& f) {
    return json{{"scale", {f.scale_rows, f.scale_cols}},
                {"ramp", {f.ramp_rows, f.ramp_cols}},
                {"sigma", f.sigma},
                {"all_pass", f.is_all_pass()}};
}

inline json to_json(const ScheduleStep& s) {
    return json{{"t", s.t},
                {"dilation", s.dilation},
                {"r", s.r},
                {"filter_active", s.filter_active},
                {"effective_filter", to_json(s.effective_filter)},
                {"guidance_filter", to_json(s.guidance_filter)}};
}

inline json to_json(const ScaleConfig& c) {
    json shapes = json::array();
    for (const auto& s : c.training_shapes) shapes.push_back({s.rows, s.cols});
    json doc{{"original", {c.original.rows, c.original.cols}},
             {"target", {c.target.rows, c.target.cols}},
             {"filter", {{"sigma", c.filter.sigma}, {"ramp", {c.filter.ramp_rows, c.filter.ramp_cols}}}},
             {"blocks", c.blocks},
             {"steps", c.total_steps},
             {"anneal", {c.s_init, c.s_stop}},
             {"sigma_mild", c.sigma_mild}};
    if (!c.preset.empty()) doc["preset"] = c.preset;
    if (!c.training_shapes.empty()) doc["training_shapes"] = shapes;
    return doc;
}

}  // namespace fouriscale
