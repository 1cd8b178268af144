#pragma once

// Randomized self-checks of the identities the library rests on. Each suite
// returns the worst residual it saw; callers compare against a tolerance.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "fouriscale/filters.hpp"
#include "fouriscale/kernels.hpp"
#include "fouriscale/random.hpp"
#include "fouriscale/sampling.hpp"
#include "fouriscale/spectral.hpp"

namespace fouriscale {

struct SuiteResult {
    std::string name;
    std::size_t cases = 0;
    double max_residual = 0.0;

    bool passed(double tolerance) const { return max_residual <= tolerance; }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"lemma", "theorem", "tiling", "consistency"};
    return names;
}

namespace detail {

inline std::vector<std::size_t> dividing(const std::vector<std::size_t>& strides, std::size_t n) {
    std::vector<std::size_t> out;
    for (auto s : strides)
        if (n % s == 0) out.push_back(s);
    return out;
}

}  // namespace detail

/// Decimation in space equals patch superposition in frequency, over random
/// sizes {4,6,8,12,16} per axis and dividing strides {2,3,4}.
inline SuiteResult run_lemma_suite(std::size_t trials, std::uint64_t seed) {
    Rng rng(seed, 1);
    const std::vector<std::size_t> sizes{4, 6, 8, 12, 16};
    const std::vector<std::size_t> strides{2, 3, 4};
    SuiteResult res{"lemma"};
    for (std::size_t i = 0; i < trials; ++i) {
        const Extent2 e{rng.pick(sizes), rng.pick(sizes)};
        const auto sr = rng.pick(detail::dividing(strides, e.rows));
        const auto sc = rng.pick(detail::dividing(strides, e.cols));
        const auto t = rng.uniform_tensor(e);
        res.max_residual = std::max(res.max_residual, verify_downsample_superposition(t, sr, sc));
        ++res.cases;
    }
    return res;
}

/// Peak location of a decimated on-bin cosine.
struct FoldedPeak {
    std::size_t predicted = 0;
    std::size_t measured = 0;
    bool unique = false;
    double peak = 0.0;        ///< |S| at the measured bin
};

/// Cosine at `bin`/`base` cycles per sample, sampled over lcm(base, stride)
/// points so both grids are periodic, optionally low-passed for the new
/// rate, then decimated. Peak search runs over bins 0 .. n/2 of the
/// decimated spectrum (the conjugate mirror is excluded).
inline FoldedPeak measure_folded_peak(std::size_t bin, std::size_t base, std::size_t stride,
                                      bool anti_alias = false) {
    const std::size_t length = std::lcm(base, stride);
    const double freq = static_cast<double>(bin) / static_cast<double>(base);
    auto signal = Tensor::generate({1, length}, [&](std::size_t, std::size_t x) {
        return std::cos(2.0 * std::numbers::pi * freq * static_cast<double>(x));
    });
    if (anti_alias)
        signal = low_pass(signal, FilterSpec{1.0, static_cast<double>(stride), 0.0, 0.0, 0.0});
    const auto spec = dft2(downsample(signal, DownsampleSpec{1, stride, 0, 0}));
    const std::size_t n = spec.cols();

    FoldedPeak out;
    out.predicted = static_cast<std::size_t>(
        std::lround(predict_folded_frequency(freq, stride) * static_cast<double>(n)));
    double best = -1.0;
    double second = -1.0;
    for (std::size_t q = 0; q <= n / 2; ++q) {
        const double mag = std::abs(spec(0, q));
        if (mag > best) {
            second = best;
            best = mag;
            out.measured = q;
        } else if (mag > second) {
            second = mag;
        }
    }
    out.peak = best;
    out.unique = second < 0.5 * best;
    return out;
}

/// Every on-bin cosine below Nyquist on a 64-point base grid, strides 2..4:
/// the decimated spectrum peaks exactly where the folding rule predicts.
/// Residual is the largest bin error (a non-unique peak counts as the
/// whole half-spectrum).
inline SuiteResult run_theorem_suite() {
    SuiteResult res{"theorem"};
    constexpr std::size_t base = 64;
    for (std::size_t stride : {2, 3, 4}) {
        const std::size_t n = std::lcm(base, stride) / stride;
        for (std::size_t bin = 0; bin < base / 2; ++bin) {
            const auto peak = measure_folded_peak(bin, base, stride);
            double err = peak.unique ? std::abs(static_cast<double>(peak.measured) -
                                                static_cast<double>(peak.predicted))
                                     : static_cast<double>(n / 2 + 1);
            res.max_residual = std::max(res.max_residual, err);
            ++res.cases;
        }
    }
    return res;
}

/// Dilated-kernel spectra tile the base spectrum; random kernels 1..5 per
/// axis, dilation 1..4 per axis.
inline SuiteResult run_tiling_suite(std::size_t trials, std::uint64_t seed) {
    Rng rng(seed, 3);
    const std::vector<std::size_t> sizes{1, 2, 3, 4, 5};
    const std::vector<std::size_t> factors{1, 2, 3, 4};
    SuiteResult res{"tiling"};
    for (std::size_t i = 0; i < trials; ++i) {
        const Kernel k(rng.uniform_tensor({rng.pick(sizes), rng.pick(sizes)}));
        const auto dr = rng.pick(factors);
        const auto dc = rng.pick(factors);
        res.max_residual = std::max(res.max_residual, spectrum_tiling_residual(k, dr, dc));
        ++res.cases;
    }
    return res;
}

struct ConsistencyCase {
    Extent2 extent;
    std::size_t stride;
    std::size_t kernel;
};

/// Valid (size, stride, kernel) combinations over sizes {8,12,16}, strides
/// {2,3,4} and square kernels {1,3,5}: the stride divides both extents and
/// the kernel fits the decimated grid.
inline std::vector<ConsistencyCase> consistency_grid() {
    std::vector<ConsistencyCase> grid;
    for (std::size_t rows : {8, 12, 16})
        for (std::size_t cols : {8, 12, 16})
            for (std::size_t s : {2, 3, 4})
                for (std::size_t k : {1, 3, 5})
                    if (rows % s == 0 && cols % s == 0 && k <= rows / s && k <= cols / s)
                        grid.push_back({{rows, cols}, s, k});
    return grid;
}

/// Down_s(t (*) dilate(k, s)) == Down_s(t) (*) k under circular convolution.
inline SuiteResult run_consistency_suite(std::size_t trials, std::uint64_t seed) {
    Rng rng(seed, 4);
    const auto grid = consistency_grid();
    SuiteResult res{"consistency"};
    for (std::size_t i = 0; i < trials; ++i) {
        const auto& c = rng.pick(grid);
        const auto t = rng.uniform_tensor(c.extent);
        const Kernel k(rng.uniform_tensor({c.kernel, c.kernel}));
        res.max_residual = std::max(res.max_residual, structural_consistency_residual(t, k, c.stride));
        ++res.cases;
    }
    return res;
}

/// Runs one named suite; throws ParameterError for an unknown name.
inline SuiteResult run_suite(const std::string& name, std::size_t trials, std::uint64_t seed) {
    if (name == "lemma") return run_lemma_suite(trials, seed);
    if (name == "theorem") return run_theorem_suite();
    if (name == "tiling") return run_tiling_suite(trials, seed);
    if (name == "consistency") return run_consistency_suite(trials, seed);
    throw ParameterError("unknown verification suite \"" + name + "\"");
}

}  // namespace fouriscale
