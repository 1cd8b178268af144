#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/sampling.hpp"
#include "fouriscale/spectral.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

/// M x N convolution taps. Tap (M/2, N/2) is the origin.
class Kernel {
public:
    Kernel() : taps_(Tensor::filled({1, 1}, 1.0)) {}

    explicit Kernel(Tensor taps) : taps_(std::move(taps)) {
        if (taps_.rank() == 3 && taps_.channels() == 1) taps_ = taps_.channel(0);
        if (taps_.rank() != 2) throw ShapeError("kernel taps must be a rank-2 slice");
    }

    static Kernel identity() { return Kernel(); }

    const Tensor& taps() const noexcept { return taps_; }
    Extent2 extent() const noexcept { return taps_.extent(); }
    Extent2 origin() const noexcept { return {taps_.height() / 2, taps_.width() / 2}; }

private:
    Tensor taps_;
};

/// A kernel with d_rows - 1 (d_cols - 1) zeros inserted between taps.
///
/// Materialized for spectrum analysis the grid is (d_rows*M) x (d_cols*N),
/// base tap (m, n) at (d_rows*m, d_cols*n), trailing rows/columns zero. For
/// spatial convolution only the footprint d*(M-1)+1 matters, and the origin
/// is the dilated position of the base origin tap.
class DilatedKernel {
public:
    DilatedKernel(Kernel base, std::size_t d_rows, std::size_t d_cols)
        : base_(std::move(base)), d_rows_(d_rows), d_cols_(d_cols) {}

    const Kernel& base() const noexcept { return base_; }
    std::size_t dilation_rows() const noexcept { return d_rows_; }
    std::size_t dilation_cols() const noexcept { return d_cols_; }

    Extent2 padded_extent() const noexcept {
        return {d_rows_ * base_.extent().rows, d_cols_ * base_.extent().cols};
    }

    Extent2 footprint() const noexcept {
        return {d_rows_ * (base_.extent().rows - 1) + 1, d_cols_ * (base_.extent().cols - 1) + 1};
    }

    Extent2 origin() const noexcept {
        return {d_rows_ * base_.origin().rows, d_cols_ * base_.origin().cols};
    }

    Tensor materialize() const {
        const auto& k = base_.taps();
        return Tensor::generate(padded_extent(), [&](std::size_t m, std::size_t n) {
            return (m % d_rows_ == 0 && n % d_cols_ == 0) ? k(m / d_rows_, n / d_cols_) : 0.0;
        });
    }

private:
    Kernel base_;
    std::size_t d_rows_;
    std::size_t d_cols_;
};

inline DilatedKernel dilate_kernel(const Kernel& k, std::size_t d_rows, std::size_t d_cols) {
    if (d_rows < 1 || d_cols < 1) throw ParameterError("dilation factors must be >= 1");
    return DilatedKernel(k, d_rows, d_cols);
}

/// max over the dilated grid's spectrum of |K_d(p, q) * d_r * d_c - K(p mod M, q mod N)|.
/// The d_r*d_c factor is the ratio of the two 1/(MN) normalizations.
inline double spectrum_tiling_residual(const Kernel& k, std::size_t d_rows, std::size_t d_cols) {
    const auto dilated = dilate_kernel(k, d_rows, d_cols);
    const auto base_spec = dft2(k.taps());
    const auto dilated_spec = dft2(dilated.materialize());
    const double ratio = static_cast<double>(d_rows * d_cols);
    const std::size_t m = k.extent().rows;
    const std::size_t n = k.extent().cols;
    double worst = 0.0;
    for (std::size_t p = 0; p < dilated_spec.rows(); ++p)
        for (std::size_t q = 0; q < dilated_spec.cols(); ++q)
            worst = std::max(worst, std::abs(dilated_spec(p, q) * ratio - base_spec(p % m, q % n)));
    return worst;
}

enum class ConvMode {
    Circular,      ///< indices wrap modulo the input extents
    SameZeroPad,   ///< zero extension, output extents equal input extents
};

namespace detail {

struct Tap {
    std::ptrdiff_t dr;  // offset relative to the kernel origin
    std::ptrdiff_t dc;
    double weight;
};

inline std::vector<Tap> taps_of(const Kernel& k, std::size_t d_rows, std::size_t d_cols) {
    const auto& t = k.taps();
    const auto o = k.origin();
    std::vector<Tap> taps;
    taps.reserve(t.size());
    for (std::size_t m = 0; m < t.height(); ++m)
        for (std::size_t n = 0; n < t.width(); ++n)
            if (t(m, n) != 0.0)
                taps.push_back({static_cast<std::ptrdiff_t>(d_rows) *
                                    (static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(o.rows)),
                                static_cast<std::ptrdiff_t>(d_cols) *
                                    (static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(o.cols)),
                                t(m, n)});
    return taps;
}

// out(i, j) = sum over taps of w * in(i - dr, j - dc)
inline Tensor convolve_taps(const Tensor& t, const std::vector<Tap>& taps, ConvMode mode) {
    const auto h = static_cast<std::ptrdiff_t>(t.height());
    const auto w = static_cast<std::ptrdiff_t>(t.width());
    std::vector<double> out(t.size(), 0.0);
    for (const auto& tap : taps) {
        for (std::ptrdiff_t i = 0; i < h; ++i) {
            std::ptrdiff_t si = i - tap.dr;
            if (mode == ConvMode::Circular) {
                si %= h;
                if (si < 0) si += h;
            } else if (si < 0 || si >= h) {
                continue;
            }
            for (std::ptrdiff_t j = 0; j < w; ++j) {
                std::ptrdiff_t sj = j - tap.dc;
                if (mode == ConvMode::Circular) {
                    sj %= w;
                    if (sj < 0) sj += w;
                } else if (sj < 0 || sj >= w) {
                    continue;
                }
                out[static_cast<std::size_t>(i * w + j)] +=
                    tap.weight * t(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
            }
        }
    }
    return Tensor(t.extent(), std::move(out));
}

inline void require_fits(Extent2 footprint, Extent2 input) {
    if (footprint.rows > input.rows || footprint.cols > input.cols)
        throw ShapeError("kernel footprint " + to_string(footprint)
                         + " larger than input " + to_string(input) + " in circular mode");
}

}  // namespace detail

/// 2D convolution of a rank-2 slice, centred on the kernel origin:
///   out(i, j) = sum_{m,n} k(m, n) * in(i - (m - o_r), j - (n - o_c))
/// In circular mode dft2(out) = H*W * dft2(in) * dft2(k wrapped so that its
/// origin sits at (0, 0)).
inline Tensor conv2(const Tensor& t, const Kernel& k, ConvMode mode) {
    if (t.rank() != 2) throw ShapeError("conv2 expects a rank-2 slice");
    if (mode == ConvMode::Circular) detail::require_fits(k.extent(), t.extent());
    return detail::convolve_taps(t, detail::taps_of(k, 1, 1), mode);
}

inline Tensor conv2(const Tensor& t, const DilatedKernel& k, ConvMode mode) {
    if (t.rank() != 2) throw ShapeError("conv2 expects a rank-2 slice");
    if (mode == ConvMode::Circular) detail::require_fits(k.footprint(), t.extent());
    return detail::convolve_taps(
        t, detail::taps_of(k.base(), k.dilation_rows(), k.dilation_cols()), mode);
}

/// || Down_s(t (*) dilate(k, s)) - Down_s(t) (*) k ||_inf with circular
/// convolutions and phase-0 decimation. Exact up to rounding for any t.
inline double structural_consistency_residual(const Tensor& t, const Kernel& k,
                                              std::size_t stride) {
    if (t.rank() != 2) throw ShapeError("structural_consistency_residual expects a rank-2 slice");
    detail::require_dividing_strides(t.extent(), stride, stride);
    const auto high = downsample(conv2(t, dilate_kernel(k, stride, stride), ConvMode::Circular),
                                 stride);
    const auto low = conv2(downsample(t, stride), k, ConvMode::Circular);
    return max_abs_diff(high, low);
}

}  // namespace fouriscale
