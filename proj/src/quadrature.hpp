#pragma once

// Globally adaptive Gauss-Kronrod 7/15 for small vector-valued integrands.

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "axisym/fields.hpp"

namespace axisym::quad {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851, 0.864864423359769072789712788640926,
    0.741531185599394439863864773280788, 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204, 0.104790010322250183839876322541518,
    0.140653259715525918745189590510238, 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                              0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <std::size_t K>
struct Segment {
    double a, b;
    std::array<double, K> val, err;
    double worst() const { return *std::max_element(err.begin(), err.end()); }
};

template <std::size_t K, class F>
Segment<K> gk15(const F& f, double a, double b)
{
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::array<double, K> fc = f(c);
    std::array<double, K> k{}, g{};
    for (std::size_t q = 0; q < K; ++q) {
        k[q] = fc[q] * kWgk[7];
        g[q] = fc[q] * kWg[3];
    }
    for (int n = 0; n < 7; ++n) {
        double dx = h * kXgk[n];
        std::array<double, K> f1 = f(c - dx), f2 = f(c + dx);
        for (std::size_t q = 0; q < K; ++q) {
            k[q] += kWgk[n] * (f1[q] + f2[q]);
            if (n % 2 == 1)
                g[q] += kWg[n / 2] * (f1[q] + f2[q]);
        }
    }
    Segment<K> s{a, b, {}, {}};
    for (std::size_t q = 0; q < K; ++q) {
        s.val[q] = k[q] * h;
        s.err[q] = std::abs((k[q] - g[q]) * h);
    }
    return s;
}

// Integrate f over the partition given by cuts (sorted), refining the worst
// segment until every component's summed error estimate is <= tol.
template <std::size_t K, class F>
std::array<double, K> integrate(const F& f, const std::vector<double>& cuts, double tol, int max_segments)
{
    std::vector<Segment<K>> segs;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
        if (cuts[k + 1] > cuts[k])
            segs.push_back(gk15<K>(f, cuts[k], cuts[k + 1]));
    for (;;) {
        std::array<double, K> err{};
        for (auto& s : segs)
            for (std::size_t q = 0; q < K; ++q)
                err[q] += s.err[q];
        double worst = segs.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
        if (worst <= tol)
            break;
        if (int(segs.size()) >= max_segments) {
            std::ostringstream os;
            os << "quadrature did not converge: error estimate " << worst << " after " << segs.size()
               << " subintervals (tolerance " << tol << ")";
            throw Error(os.str());
        }
        auto it = std::max_element(segs.begin(), segs.end(),
                                   [](const Segment<K>& p, const Segment<K>& q) { return p.worst() < q.worst(); });
        double a = it->a, b = it->b, m = 0.5 * (a + b);
        *it = gk15<K>(f, a, m);
        segs.push_back(gk15<K>(f, m, b));
    }
    std::array<double, K> out{};
    for (auto& s : segs)
        for (std::size_t q = 0; q < K; ++q)
            out[q] += s.val[q];
    return out;
}

}  // namespace axisym::quad
