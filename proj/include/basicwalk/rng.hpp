#pragma once

#include <cstdint>

namespace basicwalk {

// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// SplitMix64 stream. The algorithm is pinned so that every seeded result in
// this project is bit-reproducible across platforms and standard libraries;
// std::uniform_int_distribution is deliberately not used anywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept : state_(seed) {}

    // Independent substream for one trial of a batch.
    static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial) noexcept {
        return Rng(mix64(master_seed ^ mix64(trial + 0x9e3779b97f4a7c15ULL)));
    }

    // Substream keyed by an arbitrary tag (e.g. policy draws vs walk draws).
    Rng derive(std::uint64_t tag) const noexcept {
        return Rng(mix64(state_ ^ mix64(tag ^ 0xd1b54a32d192ed03ULL)));
    }

    std::uint64_t next_u64() noexcept {
        ++draws_;
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        return mix64(z);
    }

    // Uniform integer in [0, n). Unbiased (Lemire's multiply-and-reject).
    // n == 1 returns 0 without consuming randomness. Requires n >= 1.
    std::uint64_t uniform_below(std::uint64_t n) noexcept {
        if (n <= 1) return 0;
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Number of 64-bit words drawn so far.
    std::uint64_t draws() const noexcept { return draws_; }

private:
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

}  // namespace basicwalk
