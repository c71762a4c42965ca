#pragma once
#include <cstdint>

// Counter-based randomness: every draw is a pure hash of
// (seed, stream, counters...), so replicas, edges and particles get
// independent reproducible values with no sequential state shared
// between threads.  The mixer is the splitmix64 finalizer
// (Steele-Lea-Vigna constants).

namespace percolab {

constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t hash_key(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = mix64(seed);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    h = mix64(h ^ c);
    return h;
}

// 53-bit mantissa, uniform on [0,1).
constexpr double to_unit(uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

constexpr double unit_draw(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    return to_unit(hash_key(seed, a, b, c));
}

constexpr bool bernoulli_draw(double p, uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    return unit_draw(seed, a, b, c) < p;
}

// Sequential stream for consumers that burn many draws in order
// (random walks, Galton-Watson populations).  Seed it from hash_key so
// streams stay keyed to (seed, replica).
struct SplitMix64 {
    uint64_t state;
    explicit SplitMix64(uint64_t s) : state(s) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double next_unit() { return to_unit(next()); }
};

// Domain separation tags; one per kind of consumer.
namespace stream {
constexpr uint64_t Bonds    = 0x426f6e6473ULL;
constexpr uint64_t Uniforms = 0x556e69666fULL;
constexpr uint64_t Brw      = 0x427277ULL;
constexpr uint64_t Gw       = 0x4777ULL;
constexpr uint64_t Walk     = 0x57616c6bULL;
constexpr uint64_t Lazy     = 0x4c617a79ULL;
} // namespace stream

} // namespace percolab
