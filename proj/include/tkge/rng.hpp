#pragma once

#include <cstdint>
#include <random>

namespace tkge {

// Seeded random stream. mt19937_64 is fully specified by the standard; the
// distribution code lives here so results do not depend on the standard
// library's (implementation-defined) distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in {0, ..., n-1}, unbiased via rejection.
    int uniform_int(int n) {
        const std::uint64_t bound = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return static_cast<int>(x % bound);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tkge
