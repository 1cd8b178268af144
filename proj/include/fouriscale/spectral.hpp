#pragma once

// 2D DFT with forward normalization 1/(MN) and an unnormalized inverse:
//
//   S(p, q) = 1/(MN) * sum_{m,n} f(m, n) * exp(-2*pi*i*(p*m/M + q*n/N))
//
// so idft2(dft2(f)) == f. FFTW does the work; correctness is pinned by a
// brute-force evaluation of the sum in the tests.

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

#include "fouriscale/error.hpp"
#include "fouriscale/tensor.hpp"

namespace fouriscale {

using Complex = std::complex<double>;

enum class Layout {
    Origin,       ///< DC at (0, 0)
    Centralized,  ///< DC at (H/2, W/2), integer division
};

inline const char* to_string(Layout l) {
    return l == Layout::Origin ? "origin" : "centralized";
}

/// Dense complex H x W grid plus the position of its DC bin.
class Spectrum {
public:
    Spectrum() = default;

    Spectrum(Extent2 extent, std::vector<Complex> data, Layout layout = Layout::Origin)
        : extent_(extent), data_(std::move(data)), layout_(layout) {
        if (extent_.rows == 0 || extent_.cols == 0)
            throw ShapeError("spectrum extents must be >= 1");
        if (data_.size() != extent_.area())
            throw ShapeError("spectrum data length does not match " + to_string(extent_));
    }

    static Spectrum zeros(Extent2 extent, Layout layout = Layout::Origin) {
        return Spectrum(extent, std::vector<Complex>(extent.area()), layout);
    }

    Extent2 extent() const noexcept { return extent_; }
    std::size_t rows() const noexcept { return extent_.rows; }
    std::size_t cols() const noexcept { return extent_.cols; }
    Layout layout() const noexcept { return layout_; }
    std::span<const Complex> values() const& noexcept { return data_; }
    std::vector<Complex> values() && noexcept { return std::move(data_); }

    const Complex& operator()(std::size_t p, std::size_t q) const {
        return data_[p * extent_.cols + q];
    }
    Complex& operator()(std::size_t p, std::size_t q) { return data_[p * extent_.cols + q]; }

    /// Index of the DC bin under the current layout.
    Extent2 dc() const noexcept {
        return layout_ == Layout::Origin ? Extent2{0, 0}
                                         : Extent2{extent_.rows / 2, extent_.cols / 2};
    }

    friend bool operator==(const Spectrum&, const Spectrum&) = default;

private:
    Extent2 extent_;
    std::vector<Complex> data_;
    Layout layout_ = Layout::Origin;
};

/// Max |a - b| over two spectra of equal extent (layouts must agree).
inline double max_abs_diff(const Spectrum& a, const Spectrum& b) {
    if (a.extent() != b.extent() || a.layout() != b.layout())
        throw ShapeError("max_abs_diff: spectra differ in extent or layout");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i)
        worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

namespace detail {

// The FFTW planner is not reentrant; execution on distinct arrays is.
inline std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

inline void fft2_inplace(Extent2 e, std::vector<Complex>& buf, int sign) {
    auto* data = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_2d(static_cast<int>(e.rows), static_cast<int>(e.cols), data, data,
                                sign, FFTW_ESTIMATE);
    }
    if (!plan) throw Error("FFTW could not plan a " + to_string(e) + " transform");
    fftw_execute(plan);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
}

}  // namespace detail

/// Forward transform of a rank-2 slice; result is in Origin layout.
inline Spectrum dft2(const Tensor& t) {
    if (t.empty()) throw ShapeError("dft2 of an empty tensor");
    if (t.rank() != 2) throw ShapeError("dft2 expects a rank-2 slice");
    const Extent2 e = t.extent();
    std::vector<Complex> buf(t.values().begin(), t.values().end());
    detail::fft2_inplace(e, buf, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(e.area());
    for (auto& z : buf) z *= scale;
    return Spectrum(e, std::move(buf), Layout::Origin);
}

inline constexpr double kImagErrorTolerance = 1e-6;

/// Inverse transform of an Origin-layout spectrum. The imaginary part is
/// dropped after checking it stays within 1e-6; larger residues mean the
/// spectrum lost conjugate symmetry and raise NonRealError.
inline Tensor idft2(const Spectrum& s) {
    if (s.layout() != Layout::Origin) throw LayoutError("idft2 expects Origin layout");
    std::vector<Complex> buf(s.values().begin(), s.values().end());
    detail::fft2_inplace(s.extent(), buf, FFTW_BACKWARD);
    double residue = 0.0;
    std::vector<double> out(buf.size());
    for (std::size_t i = 0; i < buf.size(); ++i) {
        residue = std::max(residue, std::abs(buf[i].imag()));
        out[i] = buf[i].real();
    }
    if (!(residue <= kImagErrorTolerance)) throw NonRealError(residue);
    return Tensor(s.extent(), std::move(out));
}

/// Largest |imag| produced by the inverse transform, before it is dropped.
inline double inverse_imag_residue(const Spectrum& s) {
    if (s.layout() != Layout::Origin) throw LayoutError("expects Origin layout");
    std::vector<Complex> buf(s.values().begin(), s.values().end());
    detail::fft2_inplace(s.extent(), buf, FFTW_BACKWARD);
    double residue = 0.0;
    for (const auto& z : buf) residue = std::max(residue, std::abs(z.imag()));
    return residue;
}

namespace detail {

inline Spectrum cyclic_shift(const Spectrum& s, std::size_t dr, std::size_t dc, Layout to) {
    const std::size_t h = s.rows();
    const std::size_t w = s.cols();
    std::vector<Complex> out(h * w);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            out[((i + dr) % h) * w + (j + dc) % w] = s(i, j);
    return Spectrum(s.extent(), std::move(out), to);
}

}  // namespace detail

/// Moves DC from (0, 0) to (H/2, W/2).
inline Spectrum centralize(const Spectrum& s) {
    if (s.layout() != Layout::Origin) throw LayoutError("centralize expects Origin layout");
    return detail::cyclic_shift(s, s.rows() / 2, s.cols() / 2, Layout::Centralized);
}

/// Inverse of centralize, exact for odd and even extents.
inline Spectrum decentralize(const Spectrum& s) {
    if (s.layout() != Layout::Centralized)
        throw LayoutError("decentralize expects Centralized layout");
    return detail::cyclic_shift(s, s.rows() - s.rows() / 2, s.cols() - s.cols() / 2,
                                Layout::Origin);
}

inline Spectrum to_layout(const Spectrum& s, Layout layout) {
    if (s.layout() == layout) return s;
    return layout == Layout::Centralized ? centralize(s) : decentralize(s);
}

/// Mean of log(1 + |S|) over each square ring at Chebyshev distance
/// d = 0 .. min(H, W)/2 from DC, minus the d = 0 value.
inline std::vector<double> log_amplitude_profile(const Spectrum& s) {
    if (s.layout() != Layout::Centralized)
        throw LayoutError("log_amplitude_profile expects Centralized layout");
    const std::size_t rings = std::min(s.rows(), s.cols()) / 2 + 1;
    const auto [ch, cw] = s.dc();
    std::vector<double> sum(rings, 0.0);
    std::vector<std::size_t> count(rings, 0);
    for (std::size_t i = 0; i < s.rows(); ++i) {
        const std::size_t di = i > ch ? i - ch : ch - i;
        for (std::size_t j = 0; j < s.cols(); ++j) {
            const std::size_t dj = j > cw ? j - cw : cw - j;
            const std::size_t d = std::max(di, dj);
            if (d >= rings) continue;
            sum[d] += std::log1p(std::abs(s(i, j)));
            ++count[d];
        }
    }
    std::vector<double> profile(rings);
    for (std::size_t d = 0; d < rings; ++d) profile[d] = sum[d] / static_cast<double>(count[d]);
    const double base = profile[0];
    for (auto& v : profile) v -= base;
    return profile;
}

/// log(1 + |S|) normalized by its maximum into [0, 1] (all zeros if the
/// spectrum is identically zero). Suitable for image_export.
inline Tensor log_magnitude_image(const Spectrum& s) {
    std::vector<double> out(s.values().size());
    double peak = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::log1p(std::abs(s.values()[i]));
        peak = std::max(peak, out[i]);
    }
    if (peak > 0.0)
        for (auto& v : out) v /= peak;
    return Tensor(s.extent(), std::move(out));
}

/// Spectrum as a 2 x H x W tensor: channel 0 real, channel 1 imaginary.
/// The layout travels separately (the CLI writes it to a JSON manifest).
inline Tensor spectrum_to_tensor(const Spectrum& s) {
    const std::size_t n = s.values().size();
    std::vector<double> data(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        data[i] = s.values()[i].real();
        data[n + i] = s.values()[i].imag();
    }
    return Tensor({2, s.rows(), s.cols()}, std::move(data));
}

inline Spectrum tensor_to_spectrum(const Tensor& t, Layout layout) {
    if (t.rank() != 3 || t.channels() != 2)
        throw ShapeError("spectrum tensor must be 2 x H x W");
    const std::size_t n = t.height() * t.width();
    std::vector<Complex> data(n);
    for (std::size_t i = 0; i < n; ++i) data[i] = {t.values()[i], t.values()[n + i]};
    return Spectrum(t.extent(), std::move(data), layout);
}

}  // namespace fouriscale
