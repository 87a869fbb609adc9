#pragma once

// Shape function of the axisymmetric ring kernel.
//
// With s = (r_x + r_y)^2 + dz^2 + delta^2 and m = 4 r_x r_y / s, the angular
// integral of cos(t) / |X - Y| equals 16 r_x r_y s^{-3/2} T(m) where
//     T(m) = ((2 - m) K(m) - 2 E(m)) / m^2,   T(0) = pi/16.
// Callers pass m1 = 1 - m as well, computed without cancellation.

#include <bit>
#include <cmath>
#include <cstdint>

namespace axisym {

struct EllipticKE {
    double K;
    double E;
};

// Complete elliptic integrals of the first and second kind, parameter m = k^2,
// by the arithmetic-geometric mean.  m1 = 1 - m.
EllipticKE elliptic_ke(double m, double m1);

struct Shape {
    double T = 0, T1 = 0, T2 = 0;  // T and its first two m-derivatives
};

// Serial reference: power series for small m, AGM closed forms otherwise.
Shape shape_reference(double m, double m1, bool second = true);

namespace detail {
#include "kernel_coeffs.inc"

template <int N>
inline double horner(const double (&c)[N], double x)
{
    double p = c[N - 1];
#pragma GCC unroll 64
    for (int k = N - 2; k >= 0; --k)
        p = std::fma(p, x, c[k]);
    return p;
}

// Natural log for positive normal doubles; branch-free so it vectorizes.
inline double fast_log(double x)
{
    std::uint64_t bits = std::bit_cast<std::uint64_t>(x);
    // split x = 2^e f with f in [sqrt(1/2), sqrt(2))
    std::uint64_t shifted = bits - 0x3fe6a09e667f3bcdull;
    std::int64_t e = std::int64_t(shifted) >> 52;
    std::uint64_t fbits = bits - (std::uint64_t(e) << 52);
    double f = std::bit_cast<double>(fbits);
    double t = (f - 1.0) / (f + 1.0);
    double t2 = t * t;
    double p = 1.0 / 23;
    p = std::fma(p, t2, 1.0 / 21);
    p = std::fma(p, t2, 1.0 / 19);
    p = std::fma(p, t2, 1.0 / 17);
    p = std::fma(p, t2, 1.0 / 15);
    p = std::fma(p, t2, 1.0 / 13);
    p = std::fma(p, t2, 1.0 / 11);
    p = std::fma(p, t2, 1.0 / 9);
    p = std::fma(p, t2, 1.0 / 7);
    p = std::fma(p, t2, 1.0 / 5);
    p = std::fma(p, t2, 1.0 / 3);
    double lf = 2.0 * t * std::fma(p, t2, 1.0);
    constexpr double ln2_hi = 6.93147180369123816490e-01;
    constexpr double ln2_lo = 1.90821492927058770002e-10;
    double de = double(e);
    return std::fma(de, ln2_hi, std::fma(de, ln2_lo, lf));
}
}  // namespace detail

// Tabulated evaluation (polynomial tables generated offline).  Branch-free.
template <bool Second>
inline Shape shape_tabulated(double m, double m1)
{
    using namespace detail;
    constexpr double a = 2.0 / kSplit;
    constexpr double b = 2.0 / (1.0 - kSplit);
    double x = std::fma(a, m, -1.0);
    double y = std::fma(b, m1, -1.0);
    x = x < 1.0 ? x : 1.0;
    y = y < 1.0 ? y : 1.0;
    double lo0 = horner(kT0, x);
    double lo1 = horner(kT1, x);
    double L = fast_log(m1);
    double A0 = horner(kA0, y), B0 = horner(kB0, y);
    double A1 = horner(kA1, y), B1 = horner(kB1, y);
    double im1 = 1.0 / m1;
    double hi0 = A0 - L * B0;
    double hi1 = -A1 + B0 * im1 + L * B1;
    bool low = m < kSplit;
    Shape s;
    s.T = low ? lo0 : hi0;
    s.T1 = low ? lo1 : hi1;
    if constexpr (Second) {
        double lo2 = horner(kT2, x);
        double A2 = horner(kA2, y), B2 = horner(kB2, y);
        double hi2 = A2 - 2.0 * B1 * im1 + B0 * im1 * im1 - L * B2;
        s.T2 = low ? lo2 : hi2;
    }
    return s;
}

}  // namespace axisym
