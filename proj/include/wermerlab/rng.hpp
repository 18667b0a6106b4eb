#pragma once

// Deterministic random streams (xoshiro256** seeded through splitmix64).
// Hand-rolled so that results are bit-identical across platforms and
// standard-library versions; every stochastic operation takes a root seed
// and derives independent per-task streams from it.

#include <cmath>
#include <cstdint>

#include "wermerlab/complex_util.hpp"

namespace wermerlab {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class Rng {
  public:
    explicit Rng(std::uint64_t seed = 1) {
        std::uint64_t x = seed;
        for (auto& w : s_) w = detail::splitmix64(x);
    }

    /// Independent stream derived from (seed, stream_id); used to make
    /// per-walker / per-trial randomness order-independent.
    static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
        std::uint64_t x = seed ^ (0x6a09e667f3bcc909ULL + stream_id * 0x9e3779b97f4a7c15ULL);
        return Rng(detail::splitmix64(x) ^ stream_id);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// Standard normal via Box-Muller.
    double gauss() {
        double u1 = uniform01();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    cplx gauss_c() { return cplx(gauss(), gauss()); }

    /// Uniform point on the unit circle.
    cplx unit() {
        const double t = uniform(0.0, 6.283185307179586);
        return cplx(std::cos(t), std::sin(t));
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace wermerlab
