#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/filters.hpp"
#include "fouriscale/kernels.hpp"
#include "fouriscale/spectral.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

/// r = max(ceil(H/h), ceil(W/w)).
inline std::size_t compute_scale_factor(Extent2 target, Extent2 original) {
    if (target.rows == 0 || target.cols == 0 || original.rows == 0 || original.cols == 0)
        throw ParameterError("extents must be >= 1");
    const auto ceil_div = [](std::size_t a, std::size_t b) { return (a + b - 1) / b; };
    return std::max(ceil_div(target.rows, original.rows), ceil_div(target.cols, original.cols));
}

/// The training shape whose aspect ratio is closest to the target's, by
/// |log(target aspect) - log(shape aspect)|. Ties keep the earlier entry.
inline Extent2 select_training_shape(Extent2 target, const std::vector<Extent2>& shapes) {
    if (shapes.empty()) throw ParameterError("training shape list is empty");
    const auto log_aspect = [](Extent2 e) {
        return std::log(static_cast<double>(e.rows) / static_cast<double>(e.cols));
    };
    const double want = log_aspect(target);
    Extent2 best = shapes.front();
    double best_gap = std::numeric_limits<double>::infinity();
    for (const auto& s : shapes) {
        if (s.rows == 0 || s.cols == 0) throw ParameterError("training shapes must be >= 1");
        const double gap = std::abs(want - log_aspect(s));
        if (gap < best_gap) {
            best_gap = gap;
            best = s;
        }
    }
    return best;
}

/// Per-run parameters. `filter` supplies sigma and ramp widths; its scale
/// fields are resolved per step by the scheduler.
struct ScaleConfig {
    std::string preset;
    Extent2 original{64, 64};
    Extent2 target{64, 64};
    FilterSpec filter = FilterSpec::ideal(1.0);
    std::vector<std::string> blocks;
    std::size_t total_steps = 50;
    std::size_t s_init = 0;
    std::size_t s_stop = 0;
    double sigma_mild = 1.0;
    std::vector<Extent2> training_shapes;

    /// Training resolution the run is measured against: `original`, or the
    /// aspect-closest entry of `training_shapes` when that list is given.
    Extent2 base_shape() const {
        return training_shapes.empty() ? original : select_training_shape(target, training_shapes);
    }

    /// Full-strength dilation and padding factor r for the target size.
    std::size_t full_scale() const { return compute_scale_factor(target, base_shape()); }

    /// Zero-padded extents r*h x r*w used by the filtering stage.
    Extent2 padded_extent() const {
        const auto base = base_shape();
        const auto r = full_scale();
        return {r * base.rows, r * base.cols};
    }
};

/// Throws ConfigError naming the first violated field.
inline void validate(const ScaleConfig& cfg) {
    if (cfg.original.rows == 0 || cfg.original.cols == 0)
        throw ConfigError("original: extents must be >= 1");
    if (cfg.target.rows < cfg.original.rows || cfg.target.cols < cfg.original.cols)
        throw ConfigError("target: must be at least as large as original on both axes");
    if (cfg.total_steps == 0) throw ConfigError("steps: must be >= 1");
    if (cfg.s_init > cfg.s_stop) throw ConfigError("anneal: S_init must not exceed S_stop");
    if (cfg.s_stop > cfg.total_steps) throw ConfigError("anneal: S_stop must not exceed steps");
    if (!(cfg.filter.sigma >= 0.0 && cfg.filter.sigma <= 1.0))
        throw ConfigError("filter.sigma: must lie in [0, 1]");
    if (!(cfg.filter.ramp_rows >= 0.0 && cfg.filter.ramp_cols >= 0.0))
        throw ConfigError("filter.ramp: widths must be >= 0");
    if (!(cfg.sigma_mild > cfg.filter.sigma && cfg.sigma_mild <= 1.0))
        throw ConfigError("sigma_mild: must lie in (filter.sigma, 1]");
    for (const auto& s : cfg.training_shapes)
        if (s.rows == 0 || s.cols == 0) throw ConfigError("training_shapes: extents must be >= 1");
}

/// Parameters in force at one denoising step.
struct ScheduleStep {
    std::size_t t = 0;
    std::size_t dilation = 1;
    std::size_t r = 1;
    bool filter_active = false;
    FilterSpec effective_filter = FilterSpec::all_pass();
    FilterSpec guidance_filter = FilterSpec::all_pass();

    static ScheduleStep identity(std::size_t t = 0) {
        ScheduleStep s;
        s.t = t;
        return s;
    }
};

/// Annealing schedule:
///   t < S_init          full dilation and r, filter at full strength
///   S_init <= t < S_stop  value = ceil(full - (full - 1) * (t - S_init) / (S_stop - S_init)),
///                        filter cutoff widened to match (scale = value)
///   t >= S_stop         dilation = r = 1, all-pass filters
inline ScheduleStep schedule_params(std::size_t t, const ScaleConfig& cfg) {
    if (t >= cfg.total_steps)
        throw ParameterError("timestep " + std::to_string(t) + " out of range [0, "
                             + std::to_string(cfg.total_steps) + ")");
    const std::size_t full = cfg.full_scale();
    std::size_t value = 1;
    if (t < cfg.s_init) {
        value = full;
    } else if (t < cfg.s_stop) {
        // ceil(full - x) == full - floor(x) for the rational x below.
        const std::size_t span = cfg.s_stop - cfg.s_init;
        value = full - ((full - 1) * (t - cfg.s_init)) / span;
    }

    ScheduleStep step;
    step.t = t;
    step.dilation = value;
    step.r = value;
    FilterSpec spec = cfg.filter;
    spec.scale_rows = static_cast<double>(value);
    spec.scale_cols = static_cast<double>(value);
    step.filter_active = !spec.is_all_pass();
    if (step.filter_active) {
        step.effective_filter = spec;
        step.guidance_filter = spec;
        step.guidance_filter.sigma = cfg.sigma_mild;
    }
    return step;
}

inline std::vector<ScheduleStep> schedule(const ScaleConfig& cfg) {
    std::vector<ScheduleStep> steps;
    steps.reserve(cfg.total_steps);
    for (std::size_t t = 0; t < cfg.total_steps; ++t) steps.push_back(schedule_params(t, cfg));
    return steps;
}

struct GuidanceFilters {
    FilterSpec strong;  ///< structure branch
    FilterSpec mild;    ///< detail branch, same cutoffs, sigma = sigma_mild
};

inline GuidanceFilters guidance_filter_pair(const ScaleConfig& cfg, const ScheduleStep& step) {
    if (!(cfg.sigma_mild > cfg.filter.sigma))
        throw ParameterError("sigma_mild must exceed filter sigma");
    if (!step.filter_active) return {FilterSpec::all_pass(), FilterSpec::all_pass()};
    FilterSpec mild = step.effective_filter;
    mild.sigma = cfg.sigma_mild;
    return {step.effective_filter, mild};
}

/// Spectra around the filtering stage of one channel.
struct FilterStage {
    Spectrum before;  ///< dft2 of the zero-padded slice, Origin layout
    Spectrum after;   ///< after the low-pass mask
    Tensor cropped;   ///< idft2(after) cropped back to the input extents
};

/// Zero-pad (bottom/right) to the config's padded extents, low-pass with
/// the step's filter, and crop the top-left input-sized region.
inline FilterStage filter_stage(const Tensor& slice, const ScaleConfig& cfg,
                                const ScheduleStep& step) {
    const Extent2 padded = cfg.padded_extent();
    if (padded.rows < slice.height() || padded.cols < slice.width())
        throw ConfigError("padding target " + to_string(padded) + " smaller than input "
                          + to_string(slice.extent()) + " (check original/target)");
    auto before = dft2(pad_bottom_right(slice, padded));
    auto after = step.filter_active
                     ? apply_filter(before, build_mask_2d(padded, step.effective_filter))
                     : before;
    auto cropped = crop_top_left(idft2(after), slice.extent());
    return {std::move(before), std::move(after), std::move(cropped)};
}

/// The frequency-aware replacement for a per-channel convolution layer:
/// pad, low-pass, crop, then convolve with the kernel dilated by
/// step.dilation. Accepts H x W or C x H x W; returns the same rank.
inline Tensor fouriscale_conv(const Tensor& input, const Kernel& k, const ScaleConfig& cfg,
                              const ScheduleStep& step, ConvMode mode = ConvMode::SameZeroPad) {
    if (step.r < 1 || step.dilation < 1) throw ParameterError("step r and dilation must be >= 1");
    const Extent2 padded = cfg.padded_extent();
    if (padded.rows < input.height() || padded.cols < input.width())
        throw ConfigError("padding target " + to_string(padded) + " smaller than input "
                          + to_string(input.extent()) + " (check original/target)");
    const auto dilated = dilate_kernel(k, step.dilation, step.dilation);

    std::vector<Tensor> out;
    out.reserve(input.channels());
    for (const auto& slice : input.slices()) {
        // With an all-pass filter pad -> DFT -> iDFT -> crop is the identity.
        Tensor filtered = step.filter_active ? filter_stage(slice, cfg, step).cropped : slice;
        out.push_back(conv2(filtered, dilated, mode));
    }
    if (input.rank() == 2) return std::move(out.front());
    return Tensor::stack(out);
}

}  // namespace fouriscale
