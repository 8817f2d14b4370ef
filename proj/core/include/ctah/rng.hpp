#ifndef CTAH_RNG_HPP
#define CTAH_RNG_HPP

#include <cstdint>

namespace ctah {

// splitmix64: counter-based 64-bit generator (Steele, Lea, Flood; constants as
// published by Vigna). The output for a given (seed, call index) is fixed, so
// identically seeded runs are reproducible across platforms and languages.
class SplitMix64 {
public:
    static constexpr const char* kName = "splitmix64";

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool next_bernoulli(double p) { return next_unit() < p; }

    int next_bit() { return next_bernoulli(0.5) ? 1 : 0; }

private:
    std::uint64_t state_;
};

} // namespace ctah

#endif // CTAH_RNG_HPP
