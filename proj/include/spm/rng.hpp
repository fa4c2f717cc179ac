#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace spm {

// Seeded RNG with hand-rolled distribution mappings. std::mt19937_64 output
// is pinned by the standard, but the standard *distributions* are not, so the
// mappings below are written out explicitly to keep generated instances
// bit-identical across standard libraries.
class rng {
public:
    explicit rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // uniform integer in [0, bound); bound > 0
    std::uint64_t uniform_index(std::uint64_t bound) {
        // modulo bias is irrelevant for bound << 2^64; determinism is what matters
        return eng_() % bound;
    }

    // standard normal via Box-Muller, one spare cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64; used to derive per-trial seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return mix_seed(mix_seed(base + a) + b);
}

} // namespace spm
