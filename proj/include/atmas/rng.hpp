#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "atmas/bytes.hpp"

namespace atmas {

// splitmix64 step, used both as a stream-seed mixer and inside Rng helpers.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Derives an independent stream seed from a master seed and a label. Every
// subsystem (per MU, per tree, per channel link) draws from its own stream so
// results do not depend on scheduling or evaluation order.
inline uint64_t derive_seed(uint64_t master, std::string_view label, uint64_t index = 0) {
    uint64_t h = master ^ 0x51ed2701a1b2c3d4ULL;
    for (char c : label) {
        h ^= static_cast<uint8_t>(c);
        h *= 0x100000001b3ULL;
    }
    h ^= index + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    uint64_t s = h;
    return splitmix64(s);
}

// mt19937_64 with fixed draw algorithms on top. The standard <random>
// distributions are implementation defined, so sampling is done with explicit
// formulas to keep streams stable across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    // Uniform integer in [lo, hi] inclusive, rejection sampled.
    int64_t uniform_int(int64_t lo, int64_t hi) {
        uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
        if (range == 0) return static_cast<int64_t>(next_u64());  // full 64-bit range
        uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return lo + static_cast<int64_t>(v % range);
    }

    // Uniform double in [0, 1) with 53-bit resolution.
    double uniform01() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Box-Muller without spare caching so the stream is position independent.
    double normal(double mean, double stddev) {
        double u1 = uniform01();
        double u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + stddev * r * std::cos(2.0 * M_PI * u2);
    }

    double exponential(double mean) {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return -mean * std::log(u);
    }

    // Pareto with given shape and scale (minimum value = scale).
    double pareto(double shape, double scale) {
        double u = uniform01();
        while (u <= 0.0) u = uniform01();
        return scale / std::pow(u, 1.0 / shape);
    }

    // Knuth's product method; fine for the small means used here.
    int poisson(double mean) {
        double limit = std::exp(-mean);
        double prod = uniform01();
        int n = 0;
        while (prod > limit) {
            prod *= uniform01();
            ++n;
        }
        return n;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    Bytes bytes(size_t n) {
        Bytes out(n);
        for (size_t i = 0; i < n; ++i) out[i] = static_cast<uint8_t>(next_u64() & 0xff);
        return out;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace atmas
