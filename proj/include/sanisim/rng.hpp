#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sanisim {

// Deterministic RNG used by the device model. All derived draws go through
// explicit integer/float arithmetic on mt19937_64 output, so a given seed
// reproduces the same stream on any platform with the same binary.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    void reseed(std::uint64_t seed) { engine_.seed(seed); }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double next_double() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    // Uniform integer in [lo, hi] inclusive. Ranges here are tiny (cell
    // levels), so modulo bias is irrelevant; determinism is what matters.
    std::uint32_t uniform_int(std::uint32_t lo, std::uint32_t hi) {
        if (hi <= lo) return lo;
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::uint32_t>(engine_() % span);
    }

    // Visits the indices of successes among `trials` independent Bernoulli(p)
    // draws, in increasing order, via geometric gap sampling. Expected cost is
    // O(trials * p) uniform draws instead of O(trials).
    template <typename Fn>
    void sample_bernoulli_positions(std::uint64_t trials, double p, Fn&& on_hit) {
        if (trials == 0 || p <= 0.0) return;
        if (p >= 1.0) {
            for (std::uint64_t i = 0; i < trials; ++i) on_hit(i);
            return;
        }
        const double denom = std::log1p(-p);
        std::uint64_t i = 0;
        while (true) {
            const double u = next_double();
            const double gap = std::floor(std::log1p(-u) / denom);
            if (gap >= static_cast<double>(trials)) return; // no further hit
            i += static_cast<std::uint64_t>(gap);
            if (i >= trials) return;
            on_hit(i);
            ++i;
            if (i >= trials) return;
        }
    }

    bool operator==(const Rng& other) const { return engine_ == other.engine_; }

private:
    std::mt19937_64 engine_;
};

// splitmix64; used to derive independent sub-seeds (trial reseeds, payload
// generation) from a base seed without touching the device stream.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return mix_seed(a ^ mix_seed(b));
}

} // namespace sanisim
