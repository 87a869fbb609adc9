#include "axisym/ring_shape.hpp"

#include <array>
#include <numbers>

namespace axisym {

namespace {

constexpr int kSeriesTerms = 96;
constexpr double kSeriesMax = 0.6;

// T(m) = (pi/2) sum_{n>=2} d_n m^{n-2},  d_n = 4n c_n/(2n-1) - c_{n-1},
// c_n = ((2n-1)!!/(2n)!!)^2.
const std::array<double, kSeriesTerms>& series_coeffs()
{
    static const std::array<double, kSeriesTerms> d = [] {
        std::array<double, kSeriesTerms> out{};
        std::array<double, kSeriesTerms + 2> c{};
        c[0] = 1.0;
        for (int n = 1; n < kSeriesTerms + 2; ++n) {
            double ratio = double(2 * n - 1) / double(2 * n);
            c[n] = c[n - 1] * ratio * ratio;
        }
        for (int k = 0; k < kSeriesTerms; ++k) {
            int n = k + 2;
            out[k] = 0.5 * std::numbers::pi * (4.0 * n * c[n] / (2.0 * n - 1.0) - c[n - 1]);
        }
        return out;
    }();
    return d;
}

}  // namespace

EllipticKE elliptic_ke(double m, double m1)
{
    double a = 1.0, g = std::sqrt(m1);
    double sum = 0.5 * m;  // 2^{-1} c_0^2
    double pow2 = 0.5;
    for (int it = 0; it < 64; ++it) {
        double c = 0.5 * (a - g);
        pow2 *= 2.0;
        sum += pow2 * c * c;
        double an = 0.5 * (a + g);
        g = std::sqrt(a * g);
        a = an;
        // convergence is quadratic: the next c is ~c^2/4, below rounding
        if (std::abs(c) <= 1e-9 * a)
            break;
    }
    double K = 0.5 * std::numbers::pi / a;
    return {K, K * (1.0 - sum)};
}

Shape shape_reference(double m, double m1, bool second)
{
    Shape s;
    if (m < kSeriesMax) {
        const auto& d = series_coeffs();
        // Horner for the series and its derivatives
        double t0 = 0, t1 = 0, t2 = 0;
        for (int k = kSeriesTerms - 1; k >= 0; --k) {
            t0 = t0 * m + d[k];
            if (k >= 1)
                t1 = t1 * m + k * d[k];
            if (k >= 2)
                t2 = t2 * m + double(k) * (k - 1) * d[k];
        }
        s.T = t0;
        s.T1 = t1;
        s.T2 = second ? t2 : 0.0;
        return s;
    }
    EllipticKE ke = elliptic_ke(m, m1);
    double K = ke.K, E = ke.E;
    double Kp = (E - m1 * K) / (2.0 * m * m1);
    double Ep = (E - K) / (2.0 * m);
    double N = (2.0 - m) * K - 2.0 * E;
    double Np = -K + (2.0 - m) * Kp - 2.0 * Ep;
    double m2 = m * m, m3 = m2 * m;
    s.T = N / m2;
    s.T1 = Np / m2 - 2.0 * N / m3;
    if (second) {
        double Epp = (Ep - Kp) / (2.0 * m) - (E - K) / (2.0 * m2);
        // K' = (E - m1 K) / (2 m m1), differentiated as a quotient
        double n1p = Ep + K - m1 * Kp;
        double d1p = 2.0 * (m1 - m);
        double Kpp = (n1p - Kp * d1p) / (2.0 * m * m1);
        double Npp = -2.0 * Kp + (2.0 - m) * Kpp - 2.0 * Epp;
        s.T2 = Npp / m2 - 4.0 * Np / m3 + 6.0 * N / (m2 * m2);
    }
    return s;
}

}  // namespace axisym
