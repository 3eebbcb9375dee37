#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace hefs {

// splitmix64 finalizer. Used to expand seeds and to derive Monte-Carlo
// substream seeds: substream(seed, i) = splitmix64(seed + (i+1)*GOLDEN).
inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t campaign_seed, std::uint64_t run_index) noexcept {
    return splitmix64(campaign_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
class xoshiro256pp {
public:
    explicit xoshiro256pp(std::uint64_t seed) noexcept {
        std::uint64_t z = seed;
        for (auto& s : state_) {
            z = splitmix64(z);
            s = z;
        }
    }

    std::uint64_t next() noexcept {
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

    // Uniform double in (0, 1]: 53 high bits, shifted off zero so log() is safe.
    double uniform01() noexcept { return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53; }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_{};
};

// Standard-normal draws via Box-Muller on a xoshiro256++ stream.
class gaussian_sampler {
public:
    explicit gaussian_sampler(std::uint64_t seed) noexcept : rng_(seed) {}

    double next() noexcept {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = rng_.uniform01();
        const double u2 = rng_.uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    xoshiro256pp& uniform_stream() noexcept { return rng_; }

private:
    xoshiro256pp rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace hefs
