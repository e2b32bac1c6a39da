#pragma once

#include <cstdint>

namespace mmtok {

// Source of the Bernoulli draws consumed by the stochastic tokenizers.
// Callers own a source exclusively for the duration of a tokenization call.
class RandomSource {
public:
    virtual ~RandomSource() = default;
    // True with probability p.
    virtual bool bernoulli(double p) = 0;
};

// splitmix64 (Vigna, 2015). The generator is pinned here so that seeded runs
// reproduce bit-for-bit across platforms and compilers.
class SplitMix64 final : public RandomSource {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1) with 53-bit resolution.
    double next_unit() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) override { return next_unit() < p; }

private:
    std::uint64_t state_;
};

// Seed for the index-th derived stream (per line, per trial, per epoch).
// This is the splitmix64 output sequence itself, so streams from distinct
// indices are independent. Output does not depend on how work is split
// across threads.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
    std::uint64_t z = base + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace mmtok
