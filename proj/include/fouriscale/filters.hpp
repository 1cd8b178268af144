#pragma once

// Low-pass masks for centralized spectra.
//
// Each axis gets a unit ramp r(d) in [0, 1] over the distance d (in bins)
// from DC:
//
//   R > 0:  r(d) = clamp((c + 1 - d) / R + 1, 0, 1)
//   R = 0:  r(d) = 1 if d <= c else 0
//
// The 1D profile with modulation sigma is sigma + (1 - sigma) * r(d), which
// is algebraically the clamped ramp clamp(((1-sigma)/R)(c+1-d) + 1, sigma, 1).
// The 2D mask is sigma + (1 - sigma) * r_h(d_i) * r_w(d_j): the ramps combine
// by outer product and out-of-band bins are scaled by sigma, never sigma^2.
// With sigma = 0 this is exactly the outer product of the two profiles.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/spectral.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

struct FilterSpec {
    double scale_rows = 1.0;  ///< downsampling factor s_h, >= 1
    double scale_cols = 1.0;  ///< s_w
    double ramp_rows = 0.0;   ///< R_h in bins, >= 0
    double ramp_cols = 0.0;   ///< R_w
    double sigma = 0.0;       ///< high-frequency gain in [0, 1]

    static FilterSpec ideal(double scale) { return {scale, scale, 0.0, 0.0, 0.0}; }
    static FilterSpec all_pass() { return {1.0, 1.0, 0.0, 0.0, 1.0}; }

    /// True when every bin of every mask built from this spec is 1.
    bool is_all_pass() const noexcept {
        return sigma == 1.0 || (scale_rows <= 1.0 && scale_cols <= 1.0);
    }

    friend bool operator==(const FilterSpec&, const FilterSpec&) = default;
};

inline void validate(const FilterSpec& spec) {
    if (!(spec.sigma >= 0.0 && spec.sigma <= 1.0))
        throw ParameterError("filter sigma must lie in [0, 1]");
    if (!(spec.scale_rows >= 1.0 && spec.scale_cols >= 1.0))
        throw ParameterError("filter scale factors must be >= 1");
    if (!(spec.ramp_rows >= 0.0 && spec.ramp_cols >= 0.0))
        throw ParameterError("filter ramp widths must be >= 0");
}

/// Unit ramp over distances 0 .. ceil(extent/2).
inline std::vector<double> build_ramp_1d(std::size_t extent, double cutoff, double ramp) {
    if (!(cutoff >= 0.0)) throw ParameterError("cutoff must be >= 0");
    if (!(ramp >= 0.0)) throw ParameterError("ramp width must be >= 0");
    const std::size_t last = (extent + 1) / 2;
    std::vector<double> r(last + 1);
    for (std::size_t d = 0; d <= last; ++d) {
        const double dist = static_cast<double>(d);
        if (ramp > 0.0)
            r[d] = std::clamp((cutoff + 1.0 - dist) / ramp + 1.0, 0.0, 1.0);
        else
            r[d] = dist <= cutoff ? 1.0 : 0.0;
    }
    return r;
}

namespace detail {

// Keeps the endpoints exact: gain 1 stays 1 and gain 0 becomes sigma.
inline double modulate(double sigma, double unit) {
    if (unit == 1.0) return 1.0;
    if (unit == 0.0) return sigma;
    return sigma + (1.0 - sigma) * unit;
}

}  // namespace detail

/// Half-axis gain profile over distances 0 .. ceil(extent/2); mirrored
/// about DC it gives the full 1D filter.
inline std::vector<double> build_mask_1d(std::size_t extent, double cutoff, double ramp,
                                         double sigma) {
    if (!(sigma >= 0.0 && sigma <= 1.0)) throw ParameterError("sigma must lie in [0, 1]");
    auto profile = build_ramp_1d(extent, cutoff, ramp);
    for (auto& v : profile) v = detail::modulate(sigma, v);
    return profile;
}

/// Real gain grid in Centralized layout, values in [sigma, 1], 1 at DC.
class FilterMask {
public:
    FilterMask(Extent2 extent, std::vector<double> values, double sigma)
        : extent_(extent), values_(std::move(values)), sigma_(sigma) {
        if (values_.size() != extent_.area()) throw ShapeError("mask data length mismatch");
    }

    Extent2 extent() const noexcept { return extent_; }
    double sigma() const noexcept { return sigma_; }
    Layout layout() const noexcept { return Layout::Centralized; }
    std::span<const double> values() const& noexcept { return values_; }
    std::vector<double> values() && noexcept { return std::move(values_); }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * extent_.cols + j]; }

    Tensor to_tensor() const { return Tensor(extent_, values_); }

private:
    Extent2 extent_;
    std::vector<double> values_;
    double sigma_;
};

/// Per-axis cutoff radius: half the pass extent H/s of a centralized mask.
inline double mask_cutoff(std::size_t extent, double scale) {
    return static_cast<double>(extent) / (2.0 * scale);
}

inline FilterMask build_mask_2d(Extent2 extent, const FilterSpec& spec) {
    validate(spec);
    const auto ramp_h =
        build_ramp_1d(extent.rows, mask_cutoff(extent.rows, spec.scale_rows), spec.ramp_rows);
    const auto ramp_w =
        build_ramp_1d(extent.cols, mask_cutoff(extent.cols, spec.scale_cols), spec.ramp_cols);
    const std::size_t ch = extent.rows / 2;
    const std::size_t cw = extent.cols / 2;
    std::vector<double> values(extent.area());
    for (std::size_t i = 0; i < extent.rows; ++i) {
        const double gi = ramp_h[i > ch ? i - ch : ch - i];
        for (std::size_t j = 0; j < extent.cols; ++j) {
            const double gj = ramp_w[j > cw ? j - cw : cw - j];
            values[i * extent.cols + j] = detail::modulate(spec.sigma, gi * gj);
        }
    }
    return FilterMask(extent, std::move(values), spec.sigma);
}

/// Pointwise mask * spectrum in Centralized layout; the result comes back in
/// the input's layout.
inline Spectrum apply_filter(const Spectrum& s, const FilterMask& mask) {
    if (s.extent() != mask.extent())
        throw ShapeError("mask " + to_string(mask.extent()) + " does not match spectrum "
                         + to_string(s.extent()));
    const auto central = to_layout(s, Layout::Centralized);
    std::vector<Complex> out(central.values().begin(), central.values().end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask.values()[i];
    return to_layout(Spectrum(s.extent(), std::move(out), Layout::Centralized), s.layout());
}

/// idft2(mask * dft2(t)) for a rank-2 slice.
inline Tensor low_pass(const Tensor& t, const FilterSpec& spec) {
    if (spec.is_all_pass()) return t;
    return idft2(apply_filter(dft2(t), build_mask_2d(t.extent(), spec)));
}

}  // namespace fouriscale
