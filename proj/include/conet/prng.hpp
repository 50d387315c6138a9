#pragma once

// Portable, platform-stable pseudo-random generation.
//
// Standard library engines are stable but the distributions layered on top of
// them (std::uniform_int_distribution, std::shuffle) are implementation
// defined, so shuffles and synthetic vectors use the primitives below instead.
//
// Key derivation for a stream identified by (seed, label, index):
//
//   h     = fnv1a64(label)                      // UTF-8 bytes of the label
//   state = splitmix64(seed ^ splitmix64(h ^ splitmix64(index)))
//   Xoshiro256ss gen(state)                     // 4 words drawn from SplitMix64(state)

#include <array>
#include <cstdint>
#include <string_view>

namespace conet {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : bytes) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::string_view label,
                                   std::uint64_t index) noexcept {
    return splitmix64(seed ^ splitmix64(fnv1a64(label) ^ splitmix64(index)));
}

// xoshiro256** 1.0 (Blackman & Vigna), seeded through SplitMix64.
class Xoshiro256ss {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256ss(std::uint64_t seed) noexcept {
        std::uint64_t x = seed;
        for (auto& word : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            word = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
    __extension__ typedef unsigned __int128 u128;

    std::uint64_t below(std::uint64_t bound) noexcept {
        if (bound <= 1) return 0;
        u128 m = static_cast<u128>((*this)()) * bound;
        auto low = static_cast<std::uint64_t>(m);
        if (low < bound) {
            const std::uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                m = static_cast<u128>((*this)()) * bound;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
};

}  // namespace conet
