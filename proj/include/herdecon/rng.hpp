#ifndef HERDECON_RNG_HPP
#define HERDECON_RNG_HPP

#include <cstdint>

namespace herdecon {

// Counter-based pseudo-random stream: the n-th output is a pure function
// of (seed, stream, n), so any partition of work across sub-streams yields
// the same draws. The generator is the splitmix64 sequence with a
// per-(seed, stream) starting point; one stream has period 2^64.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : base_(mix(seed ^ mix(stream + kGamma))) {}

    std::uint64_t next_u64() { return mix(base_ + (++counter_) * kGamma); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_uniform() < p; }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace herdecon

#endif
