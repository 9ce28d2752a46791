#pragma once

#include <cstdint>
#include <vector>

namespace laryngen {

// splitmix64 finalizer. Pure uint64 arithmetic, identical on every platform.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Per-task seed from a master seed: reproducible independently of sibling
// tasks (task 3 draws the same numbers whether or not task 2 ran).
constexpr uint64_t sub_seed(uint64_t master, uint64_t index) {
    return mix64(master ^ mix64(index + 1));
}

// Small deterministic generator (splitmix64 stream). Not crypto; plenty for
// sampling guesses, and it keeps output byte-stable across compilers, which
// std::uniform_int_distribution does not promise.
class Rng {
public:
    explicit Rng(uint64_t seed = 0) : state_(seed) {}

    uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Lemire rejection, unbiased.
    uint64_t bounded(uint64_t n) {
        if (n <= 1) return 0;
        while (true) {
            uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * n;
            uint64_t lo = static_cast<uint64_t>(m);
            if (lo >= n || lo >= (0 - n) % n) return static_cast<uint64_t>(m >> 64);
        }
    }

    // Uniform in [lo, hi] inclusive.
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(bounded(static_cast<uint64_t>(hi - lo + 1)));
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[bounded(v.size())];
    }

private:
    uint64_t state_;
};

} // namespace laryngen
