#include "axisym/kernel.hpp"

#include <algorithm>
#include <array>
#include <numbers>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "axisym/ring_shape.hpp"
#include "quadrature.hpp"

namespace axisym {

namespace {

constexpr double kPi = std::numbers::pi;

// Integrands of the angular kernel on [0, pi]; the factor 2 from the even
// extension is applied by the caller.  Component 3 is F / r_x written so that
// it stays regular on the axis.
struct AngularIntegrand {
    double rx, ry, dz, d2;
    double D0;

    std::array<double, 4> operator()(double t) const
    {
        double c = std::cos(t);
        double D2 = rx * rx + ry * ry - 2.0 * rx * ry * c + dz * dz + d2;
        double D = std::sqrt(D2);
        double iD = 1.0 / D;
        double iD3 = iD / D2;
        return {c * iD, -c * (rx - ry * c) * iD3, -dz * c * iD3, c * (2.0 * ry * c - rx) / (D * D0 * (D + D0))};
    }
};

std::array<double, 4> integrate_angular(const MeridianPoint& x, const MeridianPoint& y, const KernelConfig& cfg)
{
    double dz = x.z - y.z;
    double d2 = cfg.blob_delta * cfg.blob_delta;
    double sep2 = (x.r - y.r) * (x.r - y.r) + dz * dz + d2;
    if (sep2 == 0.0)
        throw Error("singular evaluation");
    AngularIntegrand f{x.r, y.r, dz, d2, std::sqrt(y.r * y.r + dz * dz + d2)};

    std::vector<double> cuts{0.0};
    double R = std::max(x.r, y.r);
    double sep = std::sqrt(sep2);
    if (R > 0 && sep < cfg.near_field_switch * R) {
        for (double t = sep / R; t < kPi; t *= 2.0)
            cuts.push_back(t);
    }
    cuts.push_back(kPi);

    // each component must meet the absolute tolerance after the factor 2 below
    std::array<double, 4> out;
    try {
        out = quad::integrate<4>(f, cuts, 0.5 * cfg.quad_tol, cfg.max_subdivisions);
    } catch (const Error& e) {
        throw Error(std::string("angular kernel: ") + e.what());
    }
    for (auto& v : out)
        v *= 2.0;
    return out;
}

// Pair contribution to Phi for unit strength, target (rx, zx), source (ry, zy).
template <bool Second, class ShapeFn>
inline PhiJet pair_jet(double rx, double zx, double ry, double zy, double delta2, ShapeFn shape)
{
    double dz = zx - zy;
    double dif = rx - ry;
    double d2 = dif * dif + dz * dz + delta2;
    double s = d2 + 4.0 * rx * ry;
    double is = 1.0 / s;
    double m = 4.0 * rx * ry * is;
    double m1 = d2 * is;
    Shape sh = shape(m, m1);
    double g = is * std::sqrt(is);
    double gs = -1.5 * g * is;
    double sr = 2.0 * (rx + ry), sz = 2.0 * dz;
    double mr = (4.0 * ry - m * sr) * is;
    double mz = -m * sz * is;
    PhiJet j;
    j.phi = g * sh.T;
    j.phi_r = gs * sr * sh.T + g * sh.T1 * mr;
    j.phi_z = gs * sz * sh.T + g * sh.T1 * mz;
    if constexpr (Second) {
        double gss = 3.75 * g * is * is;
        double mrr = (-2.0 * mr * sr - 2.0 * m) * is;
        double mzz = (-2.0 * mz * sz - 2.0 * m) * is;
        double mrz = (-mz * sr - mr * sz) * is;
        j.phi_rr = gss * sr * sr * sh.T + 2.0 * gs * sh.T + 2.0 * gs * sr * sh.T1 * mr + g * sh.T2 * mr * mr +
                   g * sh.T1 * mrr;
        j.phi_zz = gss * sz * sz * sh.T + 2.0 * gs * sh.T + 2.0 * gs * sz * sh.T1 * mz + g * sh.T2 * mz * mz +
                   g * sh.T1 * mzz;
        j.phi_rz = gss * sr * sz * sh.T + gs * sr * sh.T1 * mz + gs * sz * sh.T1 * mr + g * sh.T2 * mr * mz +
                   g * sh.T1 * mrz;
    }
    return j;
}

struct RefShape {
    bool second;
    Shape operator()(double m, double m1) const
    {
        if (m1 <= 0.0)
            throw Error("singular evaluation");
        return shape_reference(m, m1, second);
    }
};

template <bool Second>
struct TableShape {
    Shape operator()(double m, double m1) const { return shape_tabulated<Second>(m, m1); }
};

void add_scaled(PhiJet& acc, const PhiJet& j, double a)
{
    acc.phi += a * j.phi;
    acc.phi_r += a * j.phi_r;
    acc.phi_z += a * j.phi_z;
    acc.phi_rr += a * j.phi_rr;
    acc.phi_rz += a * j.phi_rz;
    acc.phi_zz += a * j.phi_zz;
}

PhiJet reference_jet(const Sources& src, const MeridianPoint& x, bool second)
{
    PhiJet acc;
    double delta2 = src.delta * src.delta;
    RefShape shape{second};
    for (std::size_t k = 0; k < src.size(); ++k) {
        PhiJet j = second ? pair_jet<true>(x.r, x.z, src.r[k], src.z[k], delta2, shape)
                          : pair_jet<false>(x.r, x.z, src.r[k], src.z[k], delta2, shape);
        add_scaled(acc, j, src.a[k]);
    }
    return acc;
}

bool finite(const PhiJet& j)
{
    return std::isfinite(j.phi) && std::isfinite(j.phi_r) && std::isfinite(j.phi_z) && std::isfinite(j.phi_rr) &&
           std::isfinite(j.phi_rz) && std::isfinite(j.phi_zz);
}

template <bool Second>
void batched_targets(const Sources& src, const std::vector<MeridianPoint>& targets, std::vector<PhiJet>& out)
{
    const double* R = src.r.data();
    const double* Z = src.z.data();
    const double* A = src.a.data();
    const long n = long(src.size());
    const long nt = long(targets.size());
    const double delta2 = src.delta * src.delta;
#pragma omp parallel for schedule(static, 8)
    for (long i = 0; i < nt; ++i) {
        const double rx = targets[i].r, zx = targets[i].z;
        double p0 = 0, p1 = 0, p2 = 0, p3 = 0, p4 = 0, p5 = 0;
#pragma omp simd reduction(+ : p0, p1, p2, p3, p4, p5)
        for (long k = 0; k < n; ++k) {
            PhiJet j = pair_jet<Second>(rx, zx, R[k], Z[k], delta2, TableShape<Second>{});
            p0 += A[k] * j.phi;
            p1 += A[k] * j.phi_r;
            p2 += A[k] * j.phi_z;
            if constexpr (Second) {
                p3 += A[k] * j.phi_rr;
                p4 += A[k] * j.phi_rz;
                p5 += A[k] * j.phi_zz;
            }
        }
        out[i] = {p0, p1, p2, p3, p4, p5};
    }
}

int thread_count()
{
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

int thread_id()
{
#ifdef _OPENMP
    return omp_get_thread_num();
#else
    return 0;
#endif
}

void batched_self(const Sources& src, std::vector<PhiJet>& out)
{
    const double* R = src.r.data();
    const double* Z = src.z.data();
    const double* A = src.a.data();
    const long n = long(src.size());
    const double delta2 = src.delta * src.delta;
    const int nth = thread_count();
    std::vector<double> acc(std::size_t(nth) * 3 * n, 0.0);
#pragma omp parallel
    {
        double* P = acc.data() + std::size_t(thread_id()) * 3 * n;
        double* Pr = P + n;
        double* Pz = Pr + n;
#pragma omp for schedule(static, 16)
        for (long i = 0; i < n; ++i) {
            const double ri = R[i], zi = Z[i], ai = A[i];
            double s0 = 0, s1 = 0, s2 = 0;
#pragma omp simd reduction(+ : s0, s1, s2)
            for (long k = i + 1; k < n; ++k) {
                const double rk = R[k];
                double dz = zi - Z[k];
                double dif = ri - rk;
                double d2 = dif * dif + dz * dz + delta2;
                double s = d2 + 4.0 * ri * rk;
                double is = 1.0 / s;
                double m = 4.0 * ri * rk * is;
                Shape sh = shape_tabulated<false>(m, d2 * is);
                double g = is * std::sqrt(is);
                double gs = -1.5 * g * is;
                double sr = 2.0 * (ri + rk);
                double gT1 = g * sh.T1 * is;
                double f = g * sh.T;
                double base_r = gs * sr * sh.T - gT1 * m * sr;
                double fz = 2.0 * dz * (gs * sh.T - gT1 * m);
                s0 += A[k] * f;
                s1 += A[k] * (base_r + 4.0 * rk * gT1);
                s2 += A[k] * fz;
                P[k] += ai * f;
                Pr[k] += ai * (base_r + 4.0 * ri * gT1);
                Pz[k] -= ai * fz;
            }
            // own blob: dz = 0, so only Phi and Phi_r receive a contribution
            PhiJet self = pair_jet<false>(ri, zi, ri, zi, delta2, TableShape<false>{});
            P[i] += s0 + ai * self.phi;
            Pr[i] += s1 + ai * self.phi_r;
            Pz[i] += s2;
        }
    }
    out.assign(n, PhiJet{});
    for (int t = 0; t < nth; ++t) {
        const double* P = acc.data() + std::size_t(t) * 3 * n;
        for (long i = 0; i < n; ++i) {
            out[i].phi += P[i];
            out[i].phi_r += P[n + i];
            out[i].phi_z += P[2 * n + i];
        }
    }
}

}  // namespace

void validate(const KernelConfig& cfg)
{
    if (!(cfg.quad_tol > 0))
        throw Error("quad_tol must be positive");
    if (!(cfg.blob_delta >= 0))
        throw Error("blob_delta must be nonnegative");
    if (!(cfg.near_field_switch > 0))
        throw Error("near_field_switch must be positive");
    if (cfg.max_subdivisions < 1)
        throw Error("max_subdivisions must be positive");
}

KernelValue angular_kernel_elliptic(const MeridianPoint& x, const MeridianPoint& y, double delta)
{
    double delta2 = delta * delta;
    PhiJet j = pair_jet<false>(x.r, x.z, y.r, y.z, delta2, RefShape{false});
    // F = 16 r_x r_y s^{-3/2} T
    double c = 16.0 * y.r;
    return {c * x.r * j.phi, c * (j.phi + x.r * j.phi_r), c * x.r * j.phi_z};
}

KernelValue angular_kernel_quadrature(const MeridianPoint& x, const MeridianPoint& y, const KernelConfig& cfg)
{
    validate(cfg);
    auto v = integrate_angular(x, y, cfg);
    return {v[0], v[1], v[2]};
}

KernelValue angular_kernel(const MeridianPoint& x, const MeridianPoint& y, const KernelConfig& cfg)
{
    validate(cfg);
    if (!(x.r >= 0) || !(y.r >= 0))
        throw Error("radial coordinate must be nonnegative");
    if (cfg.use_elliptic)
        return angular_kernel_elliptic(x, y, cfg.blob_delta);
    return angular_kernel_quadrature(x, y, cfg);
}

Sources make_sources(const ParticleField& f, double delta)
{
    Sources s;
    s.delta = delta;
    for (auto& p : f.particles) {
        double a = 2.0 * p.q * p.pos.r * p.pos.r * p.vol / (kPi * kPi);
        if (a == 0.0)
            continue;
        s.r.push_back(p.pos.r);
        s.z.push_back(p.pos.z);
        s.a.push_back(a);
    }
    return s;
}

Sources make_sources(const RelativeVorticityField& f, double delta)
{
    return make_sources(as_particles(f), delta);
}

namespace {

// psi = r Phi and its first derivatives through the quadrature path
struct QuadSums {
    double psi = 0, psi_r = 0, psi_z = 0, phi = 0;
};

QuadSums quadrature_sums(const ParticleField& f, const MeridianPoint& x, const KernelConfig& cfg)
{
    QuadSums acc;
    for (auto& p : f.particles) {
        double w = p.q * p.pos.r * p.vol / (2.0 * kPi);
        if (w == 0.0)
            continue;
        auto v = integrate_angular(x, p.pos, cfg);
        acc.psi += w * v[0];
        acc.psi_r += w * v[1];
        acc.psi_z += w * v[2];
        acc.phi += w * v[3];
    }
    double c = 1.0 / (4.0 * kPi);
    acc.psi *= c;
    acc.psi_r *= c;
    acc.psi_z *= c;
    acc.phi *= c;
    return acc;
}

void check_target(const MeridianPoint& x)
{
    if (!(x.r >= 0) || !std::isfinite(x.r) || !std::isfinite(x.z))
        throw Error("evaluation point must have finite coordinates and r >= 0");
}

}  // namespace

double stream_eval(const RelativeVorticityField& field, const MeridianPoint& x, const KernelConfig& cfg)
{
    validate(cfg);
    check_target(x);
    ParticleField pf = as_particles(field);
    if (cfg.use_elliptic)
        return x.r * reference_jet(make_sources(pf, cfg.blob_delta), x, false).phi;
    return quadrature_sums(pf, x, cfg).psi;
}

VelocitySample velocity_eval(const RelativeVorticityField& field, const MeridianPoint& x, const KernelConfig& cfg)
{
    validate(cfg);
    check_target(x);
    ParticleField pf = as_particles(field);
    if (cfg.use_elliptic)
        return velocity_from(reference_jet(make_sources(pf, cfg.blob_delta), x, false), x.r);
    QuadSums s = quadrature_sums(pf, x, cfg);
    return {x.r == 0.0 ? 0.0 : -s.psi_z, s.psi_r + s.phi};
}

VelocityGradient velocity_gradient_eval(const RelativeVorticityField& field, const MeridianPoint& x,
                                        const KernelConfig& cfg)
{
    validate(cfg);
    check_target(x);
    if (!(cfg.blob_delta > 0))
        throw Error("velocity gradient requires blob_delta > 0");
    return gradient_from(reference_jet(make_sources(field, cfg.blob_delta), x, true), x.r);
}

VelocitySample velocity_from(const PhiJet& j, double r)
{
    return {-r * j.phi_z, 2.0 * j.phi + r * j.phi_r};
}

VelocityGradient gradient_from(const PhiJet& j, double r)
{
    VelocityGradient g;
    g.dur_dr = -j.phi_z - r * j.phi_rz;
    g.dur_dz = -r * j.phi_zz;
    g.duz_dr = 3.0 * j.phi_r + r * j.phi_rr;
    g.duz_dz = 2.0 * j.phi_z + r * j.phi_rz;
    return g;
}

std::vector<PhiJet> phi_eval(const Sources& src, const std::vector<MeridianPoint>& targets, Backend backend,
                             bool second)
{
    for (auto& x : targets)
        check_target(x);
    std::vector<PhiJet> out(targets.size());
    if (backend == Backend::Reference) {
        for (std::size_t i = 0; i < targets.size(); ++i)
            out[i] = reference_jet(src, targets[i], second);
        return out;
    }
    if (second)
        batched_targets<true>(src, targets, out);
    else
        batched_targets<false>(src, targets, out);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!finite(out[i]))
            throw Error("singular evaluation at target " + std::to_string(i));
    return out;
}

std::vector<PhiJet> phi_self(const Sources& src, Backend backend)
{
    if (!(src.delta > 0))
        throw Error("self-induced velocity requires blob_delta > 0");
    if (backend == Backend::Reference) {
        std::vector<PhiJet> out(src.size());
        for (std::size_t i = 0; i < src.size(); ++i)
            out[i] = reference_jet(src, {src.r[i], src.z[i]}, false);
        return out;
    }
    std::vector<PhiJet> out;
    batched_self(src, out);
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!finite(out[i]))
            throw Error("non-finite velocity at particle " + std::to_string(i));
    return out;
}

std::vector<VelocitySample> velocities(const Sources& src, const std::vector<MeridianPoint>& targets, Backend backend)
{
    auto jets = phi_eval(src, targets, backend, false);
    std::vector<VelocitySample> u(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i)
        u[i] = velocity_from(jets[i], targets[i].r);
    return u;
}

std::vector<VelocitySample> self_velocities(const Sources& src, Backend backend)
{
    auto jets = phi_self(src, backend);
    std::vector<VelocitySample> u(jets.size());
    for (std::size_t i = 0; i < jets.size(); ++i)
        u[i] = velocity_from(jets[i], src.r[i]);
    return u;
}

VelocityGrid velocity_grid(const Sources& src, const ProbeGrid& grid, Backend backend)
{
    return {grid, velocities(src, grid.points(), backend)};
}

}  // namespace axisym
