#pragma once

// Seeded generator with a fixed, platform-independent mapping from engine
// output to values. std::*_distribution is avoided because its output is
// implementation-defined.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "fouriscale/tensor.hpp"

namespace fouriscale {

class Rng {
public:
    static constexpr const char* kGenerator = "mt19937_64";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Seeded from (seed, stream) through std::seed_seq, so independent
    /// streams can share one user-visible seed.
    Rng(std::uint64_t seed, std::uint32_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          stream};
        engine_.seed(seq);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[index(items.size())];
    }

    /// Standard normal via Box-Muller.
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Tensor uniform_tensor(Extent2 e, double lo = -1.0, double hi = 1.0) {
        std::vector<double> v(e.area());
        for (auto& x : v) x = uniform(lo, hi);
        return Tensor(e, std::move(v));
    }

    Tensor normal_tensor(Extent2 e) {
        std::vector<double> v(e.area());
        for (auto& x : v) x = normal();
        return Tensor(e, std::move(v));
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace fouriscale
