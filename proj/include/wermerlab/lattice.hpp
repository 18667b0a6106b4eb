#pragma once

// Anticlockwise spiral enumeration a_1, a_2, ... of the Gaussian lattice
// (a_1 = 0, a_2 = 1, a_3 = 1+i, ...) and the square frames S_n, T_n, S~_n.
// The first (2n+1)^2 spiral points fill the lattice square [-n, n]^2.

#include <cstdint>
#include <stdexcept>
#include <utility>

#include "wermerlab/complex_util.hpp"

namespace wermerlab {

using lattice_coord = std::pair<std::int64_t, std::int64_t>;

/// Lattice coordinates of the n-th spiral point (n >= 1, 1-based).
inline lattice_coord spiral_coords(std::int64_t n) {
    if (n <= 0) throw std::invalid_argument("spiral_coords: index must be >= 1");
    if (n == 1) return {0, 0};
    // Ring k holds indices (2k-1)^2 + 1 .. (2k+1)^2 and starts at (k, -k+1),
    // then runs up the right edge, left along the top, down the left edge and
    // right along the bottom.
    std::int64_t k = 1;
    while ((2 * k + 1) * (2 * k + 1) < n) ++k;
    const std::int64_t base = (2 * k - 1) * (2 * k - 1);
    std::int64_t off = n - base - 1;  // 0-based offset along the ring, length 8k
    if (off < 2 * k) return {k, -k + 1 + off};
    off -= 2 * k;
    if (off < 2 * k) return {k - 1 - off, k};
    off -= 2 * k;
    if (off < 2 * k) return {-k, k - 1 - off};
    off -= 2 * k;
    return {-k + 1 + off, -k};
}

inline cplx spiral_point(std::int64_t n) {
    const auto [x, y] = spiral_coords(n);
    return cplx(static_cast<double>(x), static_cast<double>(y));
}

/// Inverse of spiral_coords.
inline std::int64_t spiral_index(std::int64_t x, std::int64_t y) {
    const std::int64_t k = std::max(std::llabs(x), std::llabs(y));
    if (k == 0) return 1;
    const std::int64_t base = (2 * k - 1) * (2 * k - 1);
    if (x == k && y > -k) return base + (y + k);            // right edge
    if (y == k && x < k) return base + 2 * k + (k - x);     // top edge
    if (x == -k && y < k) return base + 4 * k + (k - y);    // left edge
    return base + 6 * k + (x + k);                          // bottom edge
}

inline std::int64_t spiral_index(cplx p) {
    if (!is_lattice_point(p))
        throw std::invalid_argument("spiral_index: point must have integer coordinates");
    return spiral_index(static_cast<std::int64_t>(p.real()), static_cast<std::int64_t>(p.imag()));
}

enum class RegionKind { S, T, STilde };

struct RegionId {
    RegionKind kind;
    int index;  // n >= 1
};

/// S_n: closed square of half-side n + 3/4 minus the open square of
/// half-side n + 1/4. Contains no lattice point.
inline bool s_frame_contains(int n, cplx z) {
    const double outer = n + 0.75, inner = n + 0.25;
    const bool in_outer = std::abs(z.real()) <= outer && std::abs(z.imag()) <= outer;
    const bool in_inner = std::abs(z.real()) < inner && std::abs(z.imag()) < inner;
    return in_outer && !in_inner;
}

/// T_n: boundary of the square of half-side n + 1/2.
inline bool t_frame_contains(int n, cplx z) {
    const double s = n + 0.5;
    const bool vert = (z.real() == s || z.real() == -s) && std::abs(z.imag()) <= s;
    const bool horiz = (z.imag() == s || z.imag() == -s) && std::abs(z.real()) <= s;
    return vert || horiz;
}

/// S~_n: closed square of half-side n + 2 minus the open square of
/// half-side n - 1 (empty inner square for n = 1).
inline bool s_tilde_contains(int n, cplx z) {
    const double outer = n + 2.0, inner = n - 1.0;
    const bool in_outer = std::abs(z.real()) <= outer && std::abs(z.imag()) <= outer;
    const bool in_inner = std::abs(z.real()) < inner && std::abs(z.imag()) < inner;
    return in_outer && !in_inner;
}

inline bool region_contains(RegionId r, cplx z) {
    if (r.index < 1) throw std::invalid_argument("region_contains: index must be >= 1");
    switch (r.kind) {
        case RegionKind::S: return s_frame_contains(r.index, z);
        case RegionKind::T: return t_frame_contains(r.index, z);
        case RegionKind::STilde: return s_tilde_contains(r.index, z);
    }
    return false;
}

/// Smallest n such that the closed unit disk around z lies in S~_n.
/// Every unit disk is contained in some S~_n: points of the disk have
/// sup-norm within 1 of sup_norm(z), so n with n - 1 <= s - 1 and
/// s + 1 <= n + 2 works (for n = 1 the removed inner square is empty).
inline int covering_index(cplx z) {
    const double s = sup_norm(z);
    if (s + 1.0 <= 3.0) return 1;
    for (int n = 2; n <= static_cast<int>(std::floor(s)) + 1; ++n) {
        if (s - 1.0 >= n - 1.0 && s + 1.0 <= n + 2.0) return n;
    }
    throw numeric_error("covering_index: no covering frame found");
}

/// Euclidean distance from z to T_n measured in the sup metric
/// (|sup_norm(z) - (n + 1/2)|); zero exactly on T_n.
inline double t_frame_sup_distance(int n, cplx z) {
    return std::abs(sup_norm(z) - (n + 0.5));
}

}  // namespace wermerlab
