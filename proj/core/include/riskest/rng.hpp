#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "riskest/error.hpp"

namespace riskest::rng {

// Seeded random source with pinned sampling algorithms. std::mt19937_64 output
// is fixed by the standard, but std::shuffle and the std distributions are
// not, so everything that must reproduce byte-identically across toolchains
// is derived here from raw engine output.
class Engine {
public:
    explicit Engine(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::size_t uniform_index(std::size_t bound) {
        if (bound == 0)
            throw ValidationError("uniform_index: bound must be positive");
        return static_cast<std::size_t>(engine_() % bound);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long uniform_int(long lo, long hi) {
        if (lo > hi)
            throw ValidationError("uniform_int: empty range");
        return lo + static_cast<long>(uniform_index(static_cast<std::size_t>(hi - lo) + 1));
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; one spare value is cached.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        if (u1 < 0x1.0p-53)
            u1 = 0x1.0p-53;
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    double lognormal(double log_mean, double log_sd) {
        return std::exp(normal(log_mean, log_sd));
    }

    /// Index drawn proportionally to the given nonnegative weights.
    std::size_t pick_weighted(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0 || !std::isfinite(w))
                throw ValidationError("pick_weighted: weights must be finite and nonnegative");
            total += w;
        }
        if (total <= 0.0)
            throw ValidationError("pick_weighted: weights sum to zero");
        double u = uniform01() * total;
        for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
            u -= weights[i];
            if (u < 0.0)
                return i;
        }
        return weights.empty() ? 0 : weights.size() - 1;
    }

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::span<T> values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const std::size_t j = uniform_index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace riskest::rng
