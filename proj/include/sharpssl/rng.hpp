#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sharpssl {

// Keyed, reproducible random stream: xoshiro256++ seeded through splitmix64
// from (seed, key1, key2). Identical (seed, keys) give identical draw
// sequences on every run and under any thread schedule, which is what makes
// the projection sweep and the Monte Carlo harness bitwise reproducible.
// Substreams are derived from the seed material, not the stream position, so
// they can be handed to concurrent workers in any order.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t key1 = 0, std::uint64_t key2 = 0) {
        origin_ = mix(mix(mix(seed) ^ (key1 * 0x9e3779b97f4a7c15ULL)) ^ (key2 * 0xbf58476d1ce4e5b9ULL));
        std::uint64_t s = origin_;
        for (auto& word : state_) {
            s += 0x9e3779b97f4a7c15ULL;
            word = mix(s);
        }
    }

    SeededRng substream(std::uint64_t key1, std::uint64_t key2) const { return SeededRng(origin_, key1, key2); }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on {0, ..., bound-1}, unbiased (Lemire with rejection).
    std::uint64_t next_below(std::uint64_t bound) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * bound;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < bound) {
            const std::uint64_t cutoff = (0 - bound) % bound;
            while (lo < cutoff) {
                m = static_cast<unsigned __int128>(next_u64()) * bound;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    // Standard normal via Box-Muller; the paired value is cached.
    double next_gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925286766559 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::array<std::uint64_t, 4> state_{};
    std::uint64_t origin_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace sharpssl
