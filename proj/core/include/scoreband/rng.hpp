#ifndef SCOREBAND_RNG_HPP
#define SCOREBAND_RNG_HPP

#include <cstdint>

namespace scoreband {

// Counter-based pseudo-random generator (SplitMix64 over a strided counter).
// Every (key, counter) pair maps to a fixed output, so independent streams are
// derived by key-splitting rather than by sequential state hand-off: results
// do not depend on scheduling order when reps run in parallel.
class Rng {
public:
    explicit Rng(std::uint64_t key, std::uint64_t counter = 0)
        : key_(key), ctr_(counter) {}

    // Derives a child key for stream `index` of a master seed.
    static Rng stream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(mix(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1)));
    }

    std::uint64_t next_u64() {
        ctr_ += 0x9E3779B97F4A7C15ULL;
        return mix(key_ ^ ctr_);
    }

    // Uniform on the open interval (0,1); never returns 0 or 1, so inverse-CDF
    // sampling stays inside the support.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound) by rejection-free multiply-shift.
    std::uint64_t next_below(std::uint64_t bound) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
    }

    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

}  // namespace scoreband

#endif
