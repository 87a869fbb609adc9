#include "axisym/harness.hpp"

#include "quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

namespace axisym {

namespace {

constexpr double kPi = std::numbers::pi;

struct Bump {
    double b = 0, b1 = 0, b2 = 0;  // b(rho) and derivatives in rho
};

Bump space_bump(double rho)
{
    if (rho >= 1.0)
        return {};
    double u = 1.0 / (1.0 - rho);
    double b = std::exp(-u);
    return {b, -b * u * u, b * (u * u * u * u - 2.0 * u * u * u)};
}

// tau(t) and d tau / dt
std::pair<double, double> time_bump(double t, double t0, double t1)
{
    double s = (2.0 * t - t0 - t1) / (t1 - t0);
    if (std::abs(s) >= 1.0)
        return {0.0, 0.0};
    double v = 1.0 - s * s;
    double tau = std::exp(-1.0 / v);
    return {tau, tau * (-2.0 * s / (v * v)) * (2.0 / (t1 - t0))};
}

// Spatial factor of one term: phi_r = -r b' rho_z, phi_z = 2 b + r b' rho_r,
// with derivatives.
struct SpaceValue {
    double fr = 0, fz = 0, fr_r = 0, fr_z = 0, fz_r = 0, fz_z = 0;
};

SpaceValue space_part(const BumpTerm& k, double r, double z)
{
    double ia2 = 1.0 / (k.a * k.a), ic2 = 1.0 / (k.c * k.c);
    double dr = r - k.r_c, dz = z - k.z_c;
    Bump b = space_bump(dr * dr * ia2 + dz * dz * ic2);
    if (b.b == 0.0)
        return {};
    double pr = 2.0 * dr * ia2, pz = 2.0 * dz * ic2, prr = 2.0 * ia2, pzz = 2.0 * ic2;
    SpaceValue f;
    f.fr = -r * b.b1 * pz;
    f.fz = 2.0 * b.b + r * b.b1 * pr;
    f.fr_r = -(b.b1 * pz + r * b.b2 * pr * pz);
    f.fr_z = -r * (b.b2 * pz * pz + b.b1 * pzz);
    f.fz_r = 3.0 * b.b1 * pr + r * (b.b2 * pr * pr + b.b1 * prr);
    f.fz_z = 2.0 * b.b1 * pz + r * b.b2 * pr * pz;
    return f;
}

struct Support {
    double r_lo, r_hi, z_lo, z_hi, t_lo, t_hi;
};

Support support_of(const std::vector<BumpTerm>& terms)
{
    Support s{kInf, -kInf, kInf, -kInf, kInf, -kInf};
    for (auto& k : terms) {
        s.r_lo = std::min(s.r_lo, std::max(0.0, k.r_c - k.a));
        s.r_hi = std::max(s.r_hi, k.r_c + k.a);
        s.z_lo = std::min(s.z_lo, k.z_c - k.c);
        s.z_hi = std::max(s.z_hi, k.z_c + k.c);
        s.t_lo = std::min(s.t_lo, k.t0);
        s.t_hi = std::max(s.t_hi, k.t1);
    }
    return s;
}

void validate_terms(const std::vector<BumpTerm>& terms, const std::string& name)
{
    if (terms.empty())
        throw Error("test function '" + name + "' has no terms");
    for (auto& k : terms) {
        if (!(k.a > 0) || !(k.c > 0) || !(k.t1 > k.t0))
            throw Error("test function '" + name + "': bump widths and time support must be positive");
        if (!(k.r_c == 0.0 || k.r_c >= k.a))
            throw Error("test function '" + name + "': support must be centred on the axis or stay off it");
    }
}

std::vector<double> trapezoid_weights(const std::vector<double>& t)
{
    std::vector<double> w(t.size(), 0.0);
    for (std::size_t k = 1; k < t.size(); ++k) {
        double d = 0.5 * (t[k] - t[k - 1]);
        w[k - 1] += d;
        w[k] += d;
    }
    return w;
}

// Probe time indices and the node box of the support, after checking coverage.
struct Window {
    std::size_t n0, n1;  // probe times in [n0, n1)
    int i0, i1, j0, j1;  // nodes in [i0, i1] x [j0, j1]
};

Window window_for(const TrajectoryRecord& rec, const Support& s, const std::string& name, int min_times)
{
    if (rec.probes.empty())
        throw Error("record has no velocity probes");
    const auto& t = rec.probe_times;
    double tol = 1e-12 * std::max(1.0, std::abs(t.back()));
    if (s.t_lo < t.front() - tol || s.t_hi > t.back() + tol) {
        std::ostringstream os;
        os << "test '" << name << "': time support [" << s.t_lo << ", " << s.t_hi << "] exceeds record range ["
           << t.front() << ", " << t.back() << "]";
        throw Error(os.str());
    }
    int inside = 0;
    for (double v : t)
        if (v > s.t_lo && v < s.t_hi)
            ++inside;
    if (inside < min_times) {
        std::ostringstream os;
        os << "test '" << name << "': only " << inside << " snapshots inside its time support (need " << min_times
           << ")";
        throw Error(os.str());
    }
    const ProbeGrid& g = rec.probes.front().grid;
    double r_top = (g.nr - 1) * g.h, z_top = g.z_lo + (g.nz - 1) * g.h;
    double gt = 1e-9 * g.h;
    if (s.r_hi > r_top + gt || s.z_lo < g.z_lo - gt || s.z_hi > z_top + gt)
        throw Error("test '" + name + "': spatial support exceeds the probe grid");
    Window w;
    w.n0 = std::size_t(std::lower_bound(t.begin(), t.end(), s.t_lo - tol) - t.begin());
    w.n1 = std::size_t(std::upper_bound(t.begin(), t.end(), s.t_hi + tol) - t.begin());
    w.i0 = std::max(0, int(std::floor(s.r_lo / g.h)));
    w.i1 = std::min(g.nr - 1, int(std::ceil(s.r_hi / g.h)));
    w.j0 = std::max(0, int(std::floor((s.z_lo - g.z_lo) / g.h)));
    w.j1 = std::min(g.nz - 1, int(std::ceil((s.z_hi - g.z_lo) / g.h)));
    return w;
}

}  // namespace

void validate(const WeakTestFunction& phi)
{
    validate_terms(phi.terms, phi.name);
}

TestValue evaluate(const WeakTestFunction& phi, double r, double z, double t)
{
    TestValue v;
    for (auto& k : phi.terms) {
        auto [tau, dtau] = time_bump(t, k.t0, k.t1);
        if (tau == 0.0 && dtau == 0.0)
            continue;
        SpaceValue f = space_part(k, r, z);
        double w = k.weight;
        v.phi_r += w * tau * f.fr;
        v.phi_z += w * tau * f.fz;
        v.dt_phi_r += w * dtau * f.fr;
        v.dt_phi_z += w * dtau * f.fz;
        v.dr_phi_r += w * tau * f.fr_r;
        v.dz_phi_r += w * tau * f.fr_z;
        v.dr_phi_z += w * tau * f.fz_r;
        v.dz_phi_z += w * tau * f.fz_z;
    }
    return v;
}

WeakTestFunction combine(double a, const WeakTestFunction& p, double b, const WeakTestFunction& q)
{
    WeakTestFunction out;
    out.name = p.name + "+" + q.name;
    for (auto t : p.terms) {
        t.weight *= a;
        out.terms.push_back(t);
    }
    for (auto t : q.terms) {
        t.weight *= b;
        out.terms.push_back(t);
    }
    return out;
}

std::vector<WeakTestFunction> builtin_tests(double T)
{
    if (!(T > 0))
        throw Error("time horizon must be positive");
    auto term = [T](double rc, double zc, double a, double c, double f0, double f1) {
        return BumpTerm{1.0, rc, zc, a, c, f0 * T, f1 * T};
    };
    return {
        {"core", {term(1.0, 0.1, 0.5, 0.5, 0.1, 0.9)}},
        {"ahead", {term(1.0, 0.5, 0.45, 0.45, 0.15, 0.85)}},
        {"axis", {term(0.0, 0.1, 0.8, 0.8, 0.1, 0.9)}},
        {"outer", {term(1.5, 0.0, 0.5, 0.6, 0.2, 0.8)}},
        {"inner", {term(0.6, 0.0, 0.45, 0.7, 0.05, 0.7)}},
    };
}

ResidualReport weak_residual(const TrajectoryRecord& record, const std::vector<WeakTestFunction>& tests)
{
    ResidualReport rep;
    if (record.probes.empty())
        throw Error("record has no velocity probes");
    const ProbeGrid& g = record.probes.front().grid;
    for (auto& pg : record.probes)
        if (pg.grid.h != g.h || pg.grid.nr != g.nr || pg.grid.nz != g.nz || pg.grid.z_lo != g.z_lo)
            throw Error("probe grids differ between snapshots");
    const auto& times = record.probe_times;
    const std::size_t nt = times.size();
    rep.probe_h = g.h;
    rep.time_samples = int(nt);

    for (auto& phi : tests) {
        validate(phi);
        window_for(record, support_of(phi.terms), phi.name, 4);
        double total = 0.0;
        for (auto& k : phi.terms) {
            Window w = window_for(record, support_of({k}), phi.name, 4);
            // spatial moments A(t) = int u . f and B(t) = int u u : grad f of the
            // term's spatial factor f, at the probe times that the cubic stencils touch
            std::size_t m0 = std::min(w.n0 > 1 ? w.n0 - 2 : 0, nt - 4);
            std::size_t m1 = std::min(nt, w.n1 + 2);
            std::vector<double> A(nt, 0.0), B(nt, 0.0);
            for (std::size_t n = m0; n < m1; ++n) {
                const auto& u = record.probes[n].u;
                double a = 0.0, b = 0.0;
                for (int j = w.j0; j <= w.j1; ++j)
                    for (int i = std::max(w.i0, 1); i <= w.i1; ++i) {
                        MeridianPoint x = g.node(i, j);
                        SpaceValue f = space_part(k, x.r, x.z);
                        const VelocitySample& s = u[g.index(i, j)];
                        a += (s.u_r * f.fr + s.u_z * f.fz) * x.r;
                        b += (s.u_r * (s.u_r * f.fr_r + s.u_z * f.fr_z) + s.u_z * (s.u_r * f.fz_r + s.u_z * f.fz_z)) *
                             x.r;
                    }
                A[n] = a;
                B[n] = b;
            }
            // cubic Lagrange interpolation of A and B between probe times,
            // integrated against the exact tau' and tau
            for (std::size_t n = m0; n + 1 < m1; ++n) {
                double lo = std::max(times[n], k.t0), hi = std::min(times[n + 1], k.t1);
                if (!(hi > lo))
                    continue;
                std::size_t s0 = n > 0 ? n - 1 : 0;
                s0 = std::min(s0, nt - 4);
                auto f = [&](double t) {
                    double ai = 0.0, bi = 0.0;
                    for (std::size_t p = s0; p < s0 + 4; ++p) {
                        double l = 1.0;
                        for (std::size_t q = s0; q < s0 + 4; ++q)
                            if (q != p)
                                l *= (t - times[q]) / (times[p] - times[q]);
                        ai += l * A[p];
                        bi += l * B[p];
                    }
                    auto [tau, dtau] = time_bump(t, k.t0, k.t1);
                    return std::array<double, 1>{dtau * ai + tau * bi};
                };
                total += k.weight * quad::gk15<1>(f, lo, hi).val[0];
            }
        }
        rep.names.push_back(phi.name);
        rep.residuals.push_back(total * 2.0 * kPi * g.h * g.h);
    }
    return rep;
}

GradientTestCheck gradient_test_check(const TrajectoryRecord& record, const std::vector<BumpTerm>& xi)
{
    validate_terms(xi, "gradient");
    Support s = support_of(xi);
    Window w = window_for(record, s, "gradient", 4);
    const ProbeGrid& g = record.probes.front().grid;
    if (w.i1 >= g.nr - 1 || w.j0 < 1 || w.j1 >= g.nz - 1)
        throw Error("gradient test needs one probe row of margin around its support");
    std::vector<double> wt = trapezoid_weights(record.probe_times);
    double h = g.h, cell = 2.0 * kPi * h * h;
    GradientTestCheck out;
    for (std::size_t n = w.n0; n < w.n1; ++n) {
        double t = record.probe_times[n];
        const auto& u = record.probes[n].u;
        double t1 = 0, t2 = 0, div2 = 0, xit2 = 0;
        for (int j = w.j0; j <= w.j1; ++j)
            for (int i = std::max(w.i0, 1); i <= w.i1; ++i) {
                MeridianPoint x = g.node(i, j);
                double gr = 0, gz = 0, hrr = 0, hzz = 0, hrz = 0, xt = 0;
                for (auto& k : xi) {
                    auto [tau, dtau] = time_bump(t, k.t0, k.t1);
                    double ia2 = 1.0 / (k.a * k.a), ic2 = 1.0 / (k.c * k.c);
                    double dr = x.r - k.r_c, dz = x.z - k.z_c;
                    Bump b = space_bump(dr * dr * ia2 + dz * dz * ic2);
                    double pr = 2.0 * dr * ia2, pz = 2.0 * dz * ic2;
                    gr += k.weight * dtau * b.b1 * pr;
                    gz += k.weight * dtau * b.b1 * pz;
                    hrr += k.weight * tau * (b.b2 * pr * pr + b.b1 * 2.0 * ia2);
                    hzz += k.weight * tau * (b.b2 * pz * pz + b.b1 * 2.0 * ic2);
                    hrz += k.weight * tau * b.b2 * pr * pz;
                    xt += k.weight * dtau * b.b;
                }
                const VelocitySample& v = u[g.index(i, j)];
                const VelocitySample& up = u[g.index(i + 1, j)];
                const VelocitySample& um = u[g.index(i - 1, j)];
                double div = ((x.r + h) * up.u_r - (x.r - h) * um.u_r) / (2.0 * h * x.r) +
                             (u[g.index(i, j + 1)].u_z - u[g.index(i, j - 1)].u_z) / (2.0 * h);
                double wx = cell * x.r;
                t1 += (v.u_r * gr + v.u_z * gz) * wx;
                t2 += (v.u_r * (v.u_r * hrr + v.u_z * hrz) + v.u_z * (v.u_r * hrz + v.u_z * hzz)) * wx;
                div2 += div * div * wx;
                xit2 += xt * xt * wx;
            }
        out.time_term += wt[n] * t1;
        out.quadratic_term += wt[n] * t2;
        out.bound += wt[n] * std::sqrt(div2 * xit2);
    }
    return out;
}

std::vector<ResidualReport> weak_refinement_study(const WeakStudyConfig& cfg)
{
    if (cfg.levels < 1)
        throw Error("study needs at least one level");
    std::vector<ResidualReport> out;
    auto tests = builtin_tests(cfg.t_end);
    for (int level = 0; level < cfg.levels; ++level) {
        double f = std::ldexp(1.0, -level);
        double h = cfg.h * f;
        GridField g = make_initial(cfg.family, default_grid(cfg.family, h));
        SimConfig sim;
        sim.dt = cfg.dt * f;
        sim.t_end = cfg.t_end;
        sim.integrator = cfg.integrator;
        sim.kernel.blob_delta = cfg.blob_factor * h;
        sim.snapshot_every = 1 << 30;
        sim.probe = ProbeGrid::covering(cfg.probe_r, cfg.probe_z_lo, cfg.probe_z_hi, cfg.probe_h * f);
        TrajectoryRecord rec = simulate(g, sim);
        ResidualReport rep = weak_residual(rec, tests);
        rep.meta["level"] = std::to_string(level);
        rep.meta["h"] = std::to_string(h);
        rep.meta["dt"] = std::to_string(sim.dt);
        rep.meta["particles"] = std::to_string(rec.snapshots.front().particles.size());
        out.push_back(std::move(rep));
    }
    return out;
}

double trajectory_difference(const TrajectoryRecord& a, const TrajectoryRecord& b, double R, double z0)
{
    if (a.probe_times.size() != b.probe_times.size() || a.probes.empty())
        throw Error("probe series do not match");
    std::vector<double> wt = trapezoid_weights(a.probe_times);
    double acc = 0.0;
    for (std::size_t n = 0; n < a.probes.size(); ++n) {
        if (std::abs(a.probe_times[n] - b.probe_times[n]) > 1e-12 * std::max(1.0, a.probe_times[n]))
            throw Error("probe times do not match");
        const VelocityGrid& va = a.probes[n];
        const VelocityGrid& vb = b.probes[n];
        if (va.u.size() != vb.u.size())
            throw Error("probe grids do not match");
        VelocityGrid d{va.grid, va.u};
        for (std::size_t k = 0; k < d.u.size(); ++k) {
            d.u[k].u_r -= vb.u[k].u_r;
            d.u[k].u_z -= vb.u[k].u_z;
        }
        double n2 = lp_norm(d, {2.0, CylinderRegion{R, z0}});
        acc += wt[n] * n2 * n2;
    }
    return std::sqrt(acc);
}

EpsilonStudyReport epsilon_convergence_study(const DataFamily& base, const std::vector<double>& eps_list,
                                             const EpsilonStudyConfig& cfg)
{
    if (eps_list.size() < 3)
        throw Error("epsilon study needs at least three values");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw Error("eps_list must be strictly decreasing");
    Grid grid = cfg.grid.size() > 0 ? cfg.grid : default_grid(base, 0.05);
    GridField raw = make_initial(base, grid);

    double rmax = *std::max_element(cfg.radii.begin(), cfg.radii.end());
    int k = int(std::ceil(rmax / cfg.probe_h - 1e-9));
    SimConfig sim = cfg.sim;
    sim.probe = ProbeGrid::covering(k * cfg.probe_h, -k * cfg.probe_h, k * cfg.probe_h, cfg.probe_h);
    sim.snapshot_every = 1 << 30;

    EpsilonStudyReport rep;
    rep.eps = eps_list;
    rep.radii = cfg.radii;
    std::vector<TrajectoryRecord> runs;
    for (double eps : eps_list) {
        MollifierSpec m = cfg.mollifier;
        m.eps = eps;
        GridField data = regularize(raw, m, cfg.composition);
        TrajectoryRecord rec = simulate(data, sim);
        rep.particles_finest = int(rec.snapshots.front().particles.size());
        rec.snapshots.clear();
        runs.push_back(std::move(rec));
    }
    rep.passed = true;
    for (double R : cfg.radii) {
        std::vector<double> row;
        for (std::size_t i = 0; i + 1 < runs.size(); ++i)
            row.push_back(trajectory_difference(runs[i], runs[i + 1], R));
        bool mono = true;
        for (std::size_t i = 1; i < row.size(); ++i)
            mono = mono && row[i] < row[i - 1];
        rep.differences.push_back(row);
        rep.monotone.push_back(mono);
        bool asserted = std::find(cfg.asserted_radii.begin(), cfg.asserted_radii.end(), R) != cfg.asserted_radii.end();
        if (asserted && !mono)
            rep.passed = false;
    }
    return rep;
}

}  // namespace axisym
