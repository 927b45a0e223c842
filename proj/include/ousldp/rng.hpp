#pragma once

#include <cstdint>

namespace ousldp {

// SplitMix64, used to expand seeds into generator state.
struct SplitMix64 {
    std::uint64_t state;

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }
};

// xoshiro256++ with hand-rolled uniform/normal transforms so results are
// bit-identical across platforms (std::normal_distribution is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        SplitMix64 sm{seed};
        for (auto& w : s_) w = sm.next();
        have_cached_ = false;
    }

    // Independent stream for one path, derived from the root seed and the
    // path index; order-independent parallelism with reproducibility.
    static Rng for_path(std::uint64_t root_seed, std::uint64_t path_index) {
        SplitMix64 sm{root_seed ^ (0x9E3779B97F4A7C15ULL * (path_index + 1))};
        return Rng(sm.next());
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on (0, 1), never returning an endpoint
    double uniform01() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // standard normal via Box-Muller (deterministic given the stream)
    double normal();

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
    bool have_cached_;
    double cached_ = 0.0;
};

}  // namespace ousldp
