#include "axisym/transport.hpp"

#include <algorithm>
#include <sstream>

namespace axisym {

void validate(const SimConfig& cfg)
{
    validate(cfg.kernel);
    if (!(cfg.dt > 0))
        throw Error("dt must be positive");
    if (!(cfg.t_end >= 0))
        throw Error("t_end must be nonnegative");
    if (cfg.remesh_every < 0)
        throw Error("remesh_every must be nonnegative");
    if (cfg.snapshot_every < 1 || cfg.probe_every < 1)
        throw Error("snapshot_every and probe_every must be at least 1");
    if (cfg.adaptive_dt && !(cfg.cfl > 0))
        throw Error("cfl must be positive");
}

std::vector<VelocitySample> particle_velocities(const std::vector<MeridianPoint>& pos, const ParticleField& f,
                                                const KernelConfig& kcfg, Backend backend)
{
    if (!(kcfg.blob_delta > 0))
        throw Error("particle transport requires blob_delta > 0");
    ParticleField at = f;
    for (std::size_t k = 0; k < pos.size(); ++k)
        at.particles[k].pos = {std::abs(pos[k].r), pos[k].z};
    // keep zero-strength particles so indices line up with pos
    Sources src;
    src.delta = kcfg.blob_delta;
    src.r.reserve(pos.size());
    for (auto& p : at.particles) {
        src.r.push_back(p.pos.r);
        src.z.push_back(p.pos.z);
        src.a.push_back(2.0 * p.q * p.pos.r * p.pos.r * p.vol / (std::numbers::pi * std::numbers::pi));
    }
    std::vector<VelocitySample> u = self_velocities(src, backend);
    for (std::size_t k = 0; k < pos.size(); ++k)
        if (pos[k].r < 0)
            u[k].u_r = -u[k].u_r;
    return u;
}

namespace {

std::vector<MeridianPoint> positions(const ParticleField& f)
{
    std::vector<MeridianPoint> p(f.particles.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = f.particles[k].pos;
    return p;
}

std::vector<MeridianPoint> shifted(const std::vector<MeridianPoint>& x, const std::vector<VelocitySample>& u, double c)
{
    std::vector<MeridianPoint> y(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        y[k] = {x[k].r + c * u[k].u_r, x[k].z + c * u[k].u_z};
    return y;
}

double max_speed(const std::vector<VelocitySample>& u)
{
    double m = 0;
    for (auto& v : u)
        m = std::max(m, std::hypot(v.u_r, v.u_z));
    return m;
}

}  // namespace

ParticleField advect_step(const ParticleField& field, const SimConfig& cfg, double dt)
{
    const KernelConfig& k = cfg.kernel;
    auto x0 = positions(field);
    std::vector<MeridianPoint> x1;
    if (cfg.integrator == Integrator::RK2) {
        auto k1 = particle_velocities(x0, field, k, cfg.backend);
        auto k2 = particle_velocities(shifted(x0, k1, 0.5 * dt), field, k, cfg.backend);
        x1 = shifted(x0, k2, dt);
    } else {
        auto k1 = particle_velocities(x0, field, k, cfg.backend);
        auto k2 = particle_velocities(shifted(x0, k1, 0.5 * dt), field, k, cfg.backend);
        auto k3 = particle_velocities(shifted(x0, k2, 0.5 * dt), field, k, cfg.backend);
        auto k4 = particle_velocities(shifted(x0, k3, dt), field, k, cfg.backend);
        x1.resize(x0.size());
        for (std::size_t n = 0; n < x0.size(); ++n) {
            x1[n].r = x0[n].r + dt / 6.0 * (k1[n].u_r + 2.0 * k2[n].u_r + 2.0 * k3[n].u_r + k4[n].u_r);
            x1[n].z = x0[n].z + dt / 6.0 * (k1[n].u_z + 2.0 * k2[n].u_z + 2.0 * k3[n].u_z + k4[n].u_z);
        }
    }
    ParticleField out = field;
    for (std::size_t n = 0; n < x1.size(); ++n) {
        if (!std::isfinite(x1[n].r) || !std::isfinite(x1[n].z)) {
            std::ostringstream os;
            os << "non-finite position for particle " << n;
            throw Error(os.str());
        }
        out.particles[n].pos = {std::abs(x1[n].r), x1[n].z};
    }
    return out;
}

ParticleField advect_step(const ParticleField& field, const SimConfig& cfg)
{
    validate(cfg);
    return advect_step(field, cfg, cfg.dt);
}

double inferred_spacing(const ParticleField& f)
{
    std::vector<double> h;
    for (auto& p : f.particles)
        if (p.pos.r > 0)
            h.push_back(std::sqrt(p.vol / (2.0 * std::numbers::pi * p.pos.r)));
    if (h.empty())
        throw Error("cannot infer particle spacing");
    std::nth_element(h.begin(), h.begin() + h.size() / 2, h.end());
    return h[h.size() / 2];
}

Grid remesh_grid(const ParticleField& f, double h, double z_anchor)
{
    if (f.particles.empty())
        throw Error("empty field");
    double rmax = 0, zlo = kInf, zhi = -kInf;
    for (auto& p : f.particles) {
        rmax = std::max(rmax, p.pos.r);
        zlo = std::min(zlo, p.pos.z);
        zhi = std::max(zhi, p.pos.z);
    }
    double z0 = z_anchor + (std::floor((zlo - z_anchor) / h) - 3.0) * h;
    double z1 = z_anchor + (std::ceil((zhi - z_anchor) / h) + 3.0) * h;
    return Grid::make((std::ceil(rmax / h) + 3.0) * h, z0, z1, h);
}

namespace {

Monitor make_monitor(const ParticleField& f, const SimConfig& cfg)
{
    Monitor m;
    for (auto& spec : cfg.monitor_norms)
        m.norms.push_back(f.particles.empty() ? 0.0 : lp_norm(f, spec));
    m.circulation = circulation_moment(f);
    m.impulse = impulse_moment(f);
    m.divergence = std::numeric_limits<double>::quiet_NaN();
    return m;
}

}  // namespace

TrajectoryRecord simulate(const RelativeVorticityField& initial, const SimConfig& cfg)
{
    validate(cfg);
    ParticleField f = as_particles(initial);
    double z_anchor = cfg.remesh_z_anchor;
    if (std::isnan(z_anchor))
        z_anchor = std::holds_alternative<GridField>(initial) ? std::get<GridField>(initial).grid.z_min : 0.0;
    double h_remesh = cfg.remesh_h;
    if (cfg.remesh_every > 0 && h_remesh <= 0)
        h_remesh = inferred_spacing(f);
    double h_cfl = cfg.adaptive_dt ? inferred_spacing(f) : 0.0;

    TrajectoryRecord rec;
    auto record = [&](double t, int step, bool force) {
        bool snap = force || step % cfg.snapshot_every == 0;
        bool probe = cfg.probe && (force || step % cfg.probe_every == 0);
        if (!snap && !probe)
            return;
        Monitor m = make_monitor(f, cfg);
        if (probe) {
            Sources src = make_sources(f, cfg.kernel.blob_delta);
            VelocityGrid vg = velocity_grid(src, *cfg.probe, cfg.backend);
            m.divergence = divergence_residual(vg);
            rec.probes.push_back(std::move(vg));
            rec.probe_times.push_back(t);
        }
        rec.times.push_back(t);
        rec.snapshots.push_back(f);
        rec.monitors.push_back(std::move(m));
    };

    double t = 0.0;
    int step = 0;
    record(t, step, true);
    const double eps_t = 1e-12 * std::max(1.0, cfg.t_end);
    while (t < cfg.t_end - eps_t) {
        double dt = std::min(cfg.dt, cfg.t_end - t);
        if (cfg.adaptive_dt) {
            auto u = particle_velocities(positions(f), f, cfg.kernel, cfg.backend);
            double umax = max_speed(u);
            if (umax > 0)
                dt = std::min(dt, cfg.cfl * h_cfl / umax);
        }
        ParticleField next;
        try {
            next = advect_step(f, cfg, dt);
        } catch (const Error& e) {
            throw SimulationAborted(std::string(e.what()) + " at step " + std::to_string(step + 1), step + 1, f);
        }
        f = std::move(next);
        ++step;
        t = (cfg.adaptive_dt || t + dt >= cfg.t_end - eps_t) ? t + dt : step * cfg.dt;
        if (cfg.remesh_every > 0 && step % cfg.remesh_every == 0) {
            f = remesh(f, remesh_grid(f, h_remesh, z_anchor), cfg.remesh);
            ++rec.remesh_events;
        }
        bool last = !(t < cfg.t_end - eps_t);
        record(t, step, last);
    }
    rec.steps = step;
    return rec;
}

}  // namespace axisym
