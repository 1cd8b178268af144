#pragma once

// Slow, direct reference computations. Nothing here calls into the FFT path
// or the tap-list convolution of the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "fouriscale/tensor.hpp"

namespace oracle {

using fouriscale::Extent2;
using fouriscale::Tensor;
using cplx = std::complex<double>;

struct Grid {
    Extent2 extent;
    std::vector<cplx> data;

    cplx operator()(std::size_t p, std::size_t q) const { return data[p * extent.cols + q]; }
};

// exp(-2 pi i k / n) with k reduced mod n first, which keeps the argument small.
inline cplx twiddle(std::size_t k, std::size_t n, double sign) {
    const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(k % n) / static_cast<double>(n);
    return {std::cos(a), std::sin(a)};
}

/// F(p,q) = 1/(MN) sum_{m,n} f(m,n) exp(-2 pi i (pm/M + qn/N))
inline Grid dft2(const Tensor& t) {
    const std::size_t M = t.height(), N = t.width();
    Grid g{{M, N}, std::vector<cplx>(M * N)};
    for (std::size_t p = 0; p < M; ++p)
        for (std::size_t q = 0; q < N; ++q) {
            cplx acc = 0.0;
            for (std::size_t m = 0; m < M; ++m)
                for (std::size_t n = 0; n < N; ++n)
                    acc += t(m, n) * twiddle(p * m, M, -1.0) * twiddle(q * n, N, -1.0);
            g.data[p * N + q] = acc / static_cast<double>(M * N);
        }
    return g;
}

/// f(m,n) = sum_{p,q} F(p,q) exp(+2 pi i (pm/M + qn/N))
inline Grid idft2(const Grid& s) {
    const std::size_t M = s.extent.rows, N = s.extent.cols;
    Grid g{{M, N}, std::vector<cplx>(M * N)};
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) {
            cplx acc = 0.0;
            for (std::size_t p = 0; p < M; ++p)
                for (std::size_t q = 0; q < N; ++q)
                    acc += s(p, q) * twiddle(p * m, M, 1.0) * twiddle(q * n, N, 1.0);
            g.data[m * N + n] = acc;
        }
    return g;
}

inline std::ptrdiff_t wrap(std::ptrdiff_t i, std::ptrdiff_t n) { return ((i % n) + n) % n; }

/// out(i,j) = sum_{m,n} k(m,n) in(i - d_r (m - M/2), j - d_c (n - N/2)),
/// either wrapping or treating out-of-range samples as zero.
inline Tensor convolve(const Tensor& in, const Tensor& k, std::size_t d_r, std::size_t d_c,
                       bool circular) {
    const auto H = static_cast<std::ptrdiff_t>(in.height());
    const auto W = static_cast<std::ptrdiff_t>(in.width());
    const auto M = static_cast<std::ptrdiff_t>(k.height());
    const auto N = static_cast<std::ptrdiff_t>(k.width());
    const auto dr = static_cast<std::ptrdiff_t>(d_r);
    const auto dc = static_cast<std::ptrdiff_t>(d_c);
    std::vector<double> out(in.size(), 0.0);
    for (std::ptrdiff_t i = 0; i < H; ++i)
        for (std::ptrdiff_t j = 0; j < W; ++j) {
            double acc = 0.0;
            for (std::ptrdiff_t m = 0; m < M; ++m)
                for (std::ptrdiff_t n = 0; n < N; ++n) {
                    std::ptrdiff_t si = i - dr * (m - M / 2);
                    std::ptrdiff_t sj = j - dc * (n - N / 2);
                    if (circular) {
                        si = wrap(si, H);
                        sj = wrap(sj, W);
                    } else if (si < 0 || si >= H || sj < 0 || sj >= W) {
                        continue;
                    }
                    acc += k(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) *
                           in(static_cast<std::size_t>(si), static_cast<std::size_t>(sj));
                }
            out[static_cast<std::size_t>(i * W + j)] = acc;
        }
    return Tensor(in.extent(), std::move(out));
}

/// Circular convolution through the frequency domain: the kernel is placed
/// on an input-sized grid with its origin tap at (0,0), then
/// out = idft(H W * F(in) * F(k)).
inline Tensor convolve_spectral(const Tensor& in, const Tensor& k) {
    const std::size_t H = in.height(), W = in.width();
    const std::size_t M = k.height(), N = k.width();
    std::vector<double> grid(H * W, 0.0);
    for (std::size_t m = 0; m < M; ++m)
        for (std::size_t n = 0; n < N; ++n) {
            const auto r = static_cast<std::size_t>(wrap(static_cast<std::ptrdiff_t>(m) -
                                                             static_cast<std::ptrdiff_t>(M / 2),
                                                         static_cast<std::ptrdiff_t>(H)));
            const auto c = static_cast<std::size_t>(wrap(static_cast<std::ptrdiff_t>(n) -
                                                             static_cast<std::ptrdiff_t>(N / 2),
                                                         static_cast<std::ptrdiff_t>(W)));
            grid[r * W + c] += k(m, n);
        }
    const auto fi = oracle::dft2(in);
    const auto fk = oracle::dft2(Tensor(Extent2{H, W}, grid));
    Grid prod{{H, W}, std::vector<cplx>(H * W)};
    for (std::size_t i = 0; i < H * W; ++i)
        prod.data[i] = static_cast<double>(H * W) * fi.data[i] * fk.data[i];
    const auto back = oracle::idft2(prod);
    std::vector<double> out(H * W);
    for (std::size_t i = 0; i < H * W; ++i) out[i] = back.data[i].real();
    return Tensor(Extent2{H, W}, std::move(out));
}

/// Keep every s-th sample starting at the given phase.
inline Tensor decimate(const Tensor& t, std::size_t s_r, std::size_t s_c, std::size_t p_r = 0,
                       std::size_t p_c = 0) {
    const Extent2 e{t.height() / s_r, t.width() / s_c};
    return Tensor::generate(e, [&](std::size_t i, std::size_t j) {
        return t(p_r + i * s_r, p_c + j * s_c);
    });
}

}  // namespace oracle
