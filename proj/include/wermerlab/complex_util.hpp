#pragma once

// Small shared helpers for working with points of the complex plane and
// with the Gaussian lattice Z + iZ.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace wermerlab {

using cplx = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A persisted artifact or audited inequality failed verification.
struct audit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool is_finite(cplx z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// sup-norm max(|Re z|, |Im z|); the natural norm for the square frames.
inline double sup_norm(cplx z) {
    return std::max(std::abs(z.real()), std::abs(z.imag()));
}

inline bool is_integer(double x) {
    return std::isfinite(x) && x == std::floor(x);
}

inline bool is_lattice_point(cplx z) {
    return is_integer(z.real()) && is_integer(z.imag());
}

/// Principal square root (branch cut along the negative real axis).
inline cplx principal_sqrt(cplx z) { return std::sqrt(z); }

inline double sqr(double x) { return x * x; }

/// Euclidean distance from p to the segment [a, b].
inline double segment_distance(cplx p, cplx a, cplx b) {
    const cplx d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * d.real() + (p - a).imag() * d.imag()) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

}  // namespace wermerlab
