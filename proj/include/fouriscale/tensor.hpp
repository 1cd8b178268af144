#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fouriscale/error.hpp"

namespace fouriscale {

/// Rows x columns of a 2D grid.
struct Extent2 {
    std::size_t rows = 0;
    std::size_t cols = 0;

    std::size_t area() const noexcept { return rows * cols; }
    friend bool operator==(const Extent2&, const Extent2&) = default;
};

inline std::string to_string(Extent2 e) {
    return std::to_string(e.rows) + "x" + std::to_string(e.cols);
}

/// Dense real array of rank 2 (H x W) or rank 3 (C x H x W), stored
/// channel-major then row-major in double precision.
///
/// Values are fixed at construction. Every constructor rejects non-finite
/// values, so a Tensor in hand is always finite.
class Tensor {
public:
    Tensor() = default;

    Tensor(std::vector<std::size_t> dims, std::vector<double> data)
        : dims_(std::move(dims)), data_(std::move(data)) {
        validate();
    }

    /// Rank-2 tensor from a row-major buffer.
    Tensor(Extent2 extent, std::vector<double> data)
        : Tensor(std::vector<std::size_t>{extent.rows, extent.cols}, std::move(data)) {}

    static Tensor zeros(std::vector<std::size_t> dims) {
        const auto n = count(dims);
        return Tensor(std::move(dims), std::vector<double>(n, 0.0));
    }

    static Tensor filled(Extent2 extent, double value) {
        return Tensor(extent, std::vector<double>(extent.area(), value));
    }

    /// Rank-2 tensor whose (i, j) entry is fn(i, j).
    static Tensor generate(Extent2 extent,
                           const std::function<double(std::size_t, std::size_t)>& fn) {
        std::vector<double> data(extent.area());
        for (std::size_t i = 0; i < extent.rows; ++i)
            for (std::size_t j = 0; j < extent.cols; ++j)
                data[i * extent.cols + j] = fn(i, j);
        return Tensor(extent, std::move(data));
    }

    /// Stacks equally sized rank-2 slices into a C x H x W tensor.
    static Tensor stack(std::span<const Tensor> slices) {
        if (slices.empty()) throw ShapeError("cannot stack zero slices");
        const Extent2 e = slices.front().extent();
        std::vector<double> data;
        data.reserve(slices.size() * e.area());
        for (const auto& s : slices) {
            if (s.rank() != 2 || s.extent() != e)
                throw ShapeError("stack: slices must all be rank-2 " + to_string(e));
            data.insert(data.end(), s.data_.begin(), s.data_.end());
        }
        return Tensor({slices.size(), e.rows, e.cols}, std::move(data));
    }

    std::size_t rank() const noexcept { return dims_.size(); }
    const std::vector<std::size_t>& dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    std::size_t channels() const noexcept { return rank() == 3 ? dims_[0] : 1; }
    std::size_t height() const noexcept { return dims_[rank() - 2]; }
    std::size_t width() const noexcept { return dims_[rank() - 1]; }
    Extent2 extent() const noexcept { return {height(), width()}; }

    std::span<const double> values() const& noexcept { return data_; }
    std::vector<double> values() && noexcept { return std::move(data_); }

    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * width() + j];
    }
    double operator()(std::size_t c, std::size_t i, std::size_t j) const {
        return data_[(c * height() + i) * width() + j];
    }

    /// Channel c as a rank-2 slice. A rank-2 tensor is its own channel 0.
    Tensor channel(std::size_t c) const {
        if (c >= channels())
            throw ShapeError("channel " + std::to_string(c) + " out of range");
        const auto plane = height() * width();
        std::vector<double> out(data_.begin() + static_cast<std::ptrdiff_t>(c * plane),
                                data_.begin() + static_cast<std::ptrdiff_t>((c + 1) * plane));
        return Tensor(extent(), std::move(out));
    }

    /// Every channel as a rank-2 slice.
    std::vector<Tensor> slices() const {
        std::vector<Tensor> out;
        out.reserve(channels());
        for (std::size_t c = 0; c < channels(); ++c) out.push_back(channel(c));
        return out;
    }

    /// Same values viewed as C x H x W.
    Tensor as_rank3() const {
        if (rank() == 3) return *this;
        return Tensor({1, height(), width()}, data_);
    }

    friend bool operator==(const Tensor&, const Tensor&) = default;

private:
    static std::size_t count(const std::vector<std::size_t>& dims) {
        return std::accumulate(dims.begin(), dims.end(), std::size_t{1},
                               std::multiplies<>());
    }

    void validate() const {
        if (dims_.size() != 2 && dims_.size() != 3)
            throw ShapeError("tensor rank must be 2 or 3, got "
                             + std::to_string(dims_.size()));
        for (auto d : dims_)
            if (d == 0) throw ShapeError("tensor extents must be >= 1");
        if (count(dims_) != data_.size())
            throw ShapeError("tensor data length " + std::to_string(data_.size())
                             + " does not match extents product "
                             + std::to_string(count(dims_)));
        for (double v : data_)
            if (!std::isfinite(v)) throw ParameterError("tensor values must be finite");
    }

    std::vector<std::size_t> dims_;
    std::vector<double> data_;
};

/// Max |a - b| over two tensors of identical shape.
inline double max_abs_diff(const Tensor& a, const Tensor& b) {
    if (a.dims() != b.dims()) throw ShapeError("max_abs_diff: shape mismatch");
    double worst = 0.0;
    auto va = a.values();
    auto vb = b.values();
    for (std::size_t i = 0; i < va.size(); ++i)
        worst = std::max(worst, std::abs(va[i] - vb[i]));
    return worst;
}

/// Rank-2 slice zero-extended on the bottom and right to `target`.
inline Tensor pad_bottom_right(const Tensor& t, Extent2 target) {
    if (t.rank() != 2) throw ShapeError("pad_bottom_right expects a rank-2 slice");
    if (target.rows < t.height() || target.cols < t.width())
        throw ShapeError("padding target " + to_string(target)
                         + " smaller than input " + to_string(t.extent()));
    return Tensor::generate(target, [&](std::size_t i, std::size_t j) {
        return (i < t.height() && j < t.width()) ? t(i, j) : 0.0;
    });
}

/// Top-left `target` region of a rank-2 slice.
inline Tensor crop_top_left(const Tensor& t, Extent2 target) {
    if (t.rank() != 2) throw ShapeError("crop_top_left expects a rank-2 slice");
    if (target.rows > t.height() || target.cols > t.width())
        throw ShapeError("crop target " + to_string(target) + " larger than input "
                         + to_string(t.extent()));
    return Tensor::generate(target, [&](std::size_t i, std::size_t j) { return t(i, j); });
}

}  // namespace fouriscale
