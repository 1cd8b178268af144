#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/spectral.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

/// Per-axis decimation strides and the sampling phase.
struct DownsampleSpec {
    std::size_t stride_rows = 1;
    std::size_t stride_cols = 1;
    std::size_t phase_row = 0;
    std::size_t phase_col = 0;

    static DownsampleSpec uniform(std::size_t s) { return {s, s, 0, 0}; }
};

namespace detail {

inline void require_dividing_strides(Extent2 e, std::size_t sr, std::size_t sc) {
    if (sr == 0 || sc == 0) throw ShapeError("strides must be >= 1");
    if (e.rows % sr != 0 || e.cols % sc != 0)
        throw ShapeError("strides " + std::to_string(sr) + "x" + std::to_string(sc)
                         + " do not divide extents " + to_string(e));
}

}  // namespace detail

/// out(i, j) = in(phase_row + i*stride_rows, phase_col + j*stride_cols).
inline Tensor downsample(const Tensor& t, const DownsampleSpec& spec) {
    if (t.rank() != 2) throw ShapeError("downsample expects a rank-2 slice");
    detail::require_dividing_strides(t.extent(), spec.stride_rows, spec.stride_cols);
    if (spec.phase_row >= spec.stride_rows || spec.phase_col >= spec.stride_cols)
        throw ParameterError("downsample phase must lie in [0, stride)");
    const Extent2 out{t.height() / spec.stride_rows, t.width() / spec.stride_cols};
    return Tensor::generate(out, [&](std::size_t i, std::size_t j) {
        return t(spec.phase_row + i * spec.stride_rows, spec.phase_col + j * spec.stride_cols);
    });
}

inline Tensor downsample(const Tensor& t, std::size_t stride) {
    return downsample(t, DownsampleSpec::uniform(stride));
}

/// Splits an Origin-layout spectrum into stride_rows x stride_cols equal
/// blocks and sums them. Under the 1/(MN) forward normalization this plain
/// sum equals the spectrum of the phase-0 decimated signal.
inline Spectrum superpose_patches(const Spectrum& s, std::size_t stride_rows,
                                  std::size_t stride_cols) {
    if (s.layout() != Layout::Origin)
        throw LayoutError("superpose_patches expects Origin layout");
    detail::require_dividing_strides(s.extent(), stride_rows, stride_cols);
    const Extent2 block{s.rows() / stride_rows, s.cols() / stride_cols};
    auto out = Spectrum::zeros(block);
    for (std::size_t bi = 0; bi < stride_rows; ++bi)
        for (std::size_t bj = 0; bj < stride_cols; ++bj)
            for (std::size_t u = 0; u < block.rows; ++u)
                for (std::size_t v = 0; v < block.cols; ++v)
                    out(u, v) += s(bi * block.rows + u, bj * block.cols + v);
    return out;
}

/// max |dft2(downsample(t)) - superpose_patches(dft2(t))| with phase 0.
inline double verify_downsample_superposition(const Tensor& t, std::size_t stride_rows,
                                              std::size_t stride_cols) {
    const auto direct = dft2(downsample(t, DownsampleSpec{stride_rows, stride_cols, 0, 0}));
    const auto folded = superpose_patches(dft2(t), stride_rows, stride_cols);
    return max_abs_diff(direct, folded);
}

/// Apparent frequency (cycles per new sample, in [0, 0.5]) of a tone at
/// `frequency` cycles per sample after keeping every `stride`-th sample.
inline double predict_folded_frequency(double frequency, std::size_t stride) {
    if (!(frequency >= 0.0 && frequency < 0.5))
        throw ParameterError("signal frequency must lie in [0, 0.5) cycles/sample");
    if (stride == 0) throw ParameterError("stride must be >= 1");
    const double scaled = frequency * static_cast<double>(stride);
    const double wrapped = scaled - std::floor(scaled);
    return wrapped > 0.5 ? 1.0 - wrapped : wrapped;
}

/// Folded frequency as a bin index on an `n`-sample grid, for tones that sit
/// exactly on a bin of the original grid (`bin` / `length` cycles/sample).
/// Integer arithmetic, so no rounding is involved.
inline std::size_t predict_folded_bin(std::size_t bin, std::size_t length, std::size_t stride) {
    if (length == 0 || stride == 0 || length % stride != 0)
        throw ShapeError("stride must divide the signal length");
    if (2 * bin >= length) throw ParameterError("bin must lie below the original Nyquist");
    const std::size_t n = length / stride;
    const std::size_t wrapped = bin % n;  // bin*stride/length cycles per new sample
    return 2 * wrapped > n ? n - wrapped : wrapped;
}

}  // namespace fouriscale
