#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

#include "assoc/errors.hpp"

namespace assoc {

/// Philox4x32-10 counter-based generator. Every output block is a pure
/// function of (counter, key), so draws are reproducible regardless of
/// evaluation order across trials and threads.
struct Philox4x32 {
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
            const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }
};

/// Purpose of a draw stream; part of the counter-based key so that adding
/// draws to one stage never perturbs another.
enum class DrawPurpose : std::uint32_t {
    PreinitDetect = 1,
    PriorPerturb = 2,
    DetectionDraw = 3,
    MeasurementNoise = 4,
    FalseAlarmCount = 5,
    FalseAlarmPosition = 6,
    Generic = 7,
};

/// A deterministic stream of variates: every draw is a pure function of
/// (master seed, trial index, purpose, draw counter).
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t trial, DrawPurpose purpose)
        : seed_(seed), trial_(trial), purpose_(static_cast<std::uint32_t>(purpose)) {}

    /// Uniform in [0, 1) with 53-bit resolution.
    double uniform() {
        const std::uint64_t bits = next64();
        return static_cast<double>(bits >> 11) * 0x1.0p-53;
    }

    /// Uniform in (0, 1]; never returns exactly 0.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller; draws are consumed in pairs.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

    /// Poisson by inversion of the exponential-gap product; large means are
    /// split into chunks so exp() never underflows.
    std::uint64_t poisson(double mean) {
        if (mean < 0.0) throw DomainError("poisson: require mean >= 0");
        std::uint64_t total = 0;
        while (mean > 500.0) {
            total += poisson_small(500.0);
            mean -= 500.0;
        }
        return total + poisson_small(mean);
    }

private:
    std::uint64_t poisson_small(double mean) {
        const double limit = std::exp(-mean);
        double prod = 1.0;
        std::uint64_t k = 0;
        while (true) {
            prod *= uniform_pos();
            if (prod <= limit) return k;
            ++k;
        }
    }

    std::uint64_t next64() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const std::array<std::uint32_t, 4> ctr = {
            static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(trial_),
            purpose_ ^ static_cast<std::uint32_t>(counter_ >> 32),
            static_cast<std::uint32_t>(trial_ >> 32)};
        const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                                  static_cast<std::uint32_t>(seed_ >> 32)};
        const auto out = Philox4x32::block(ctr, key);
        ++counter_;
        spare_ = static_cast<std::uint64_t>(out[2]) << 32 | out[3];
        have_spare_ = true;
        return static_cast<std::uint64_t>(out[0]) << 32 | out[1];
    }

    std::uint64_t seed_;
    std::uint64_t trial_;
    std::uint32_t purpose_;
    std::uint64_t counter_ = 0;
    std::uint64_t spare_ = 0;
    bool have_spare_ = false;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

}  // namespace assoc
