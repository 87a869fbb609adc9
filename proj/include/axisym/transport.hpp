#pragma once

#include <optional>
#include <vector>

#include "axisym/fields.hpp"
#include "axisym/kernel.hpp"

namespace axisym {

enum class Integrator { RK2, RK4 };

struct SimConfig {
    double dt = 0.01;
    double t_end = 0.1;
    Integrator integrator = Integrator::RK2;
    int remesh_every = 0;  // 0 = never
    KernelConfig kernel;
    std::vector<NormSpec> monitor_norms;

    // remeshing lattice: spacing (0 = inferred from particle volumes) and z
    // anchor (NaN = the initial grid's z_min, or 0 for particle input)
    double remesh_h = 0.0;
    double remesh_z_anchor = std::numeric_limits<double>::quiet_NaN();
    RemeshOptions remesh;

    bool adaptive_dt = false;
    double cfl = 0.5;

    int snapshot_every = 1;
    // velocity probes for the divergence monitor and weak-form quadrature
    std::optional<ProbeGrid> probe;
    int probe_every = 1;

    Backend backend = Backend::Batched;
};

void validate(const SimConfig& cfg);

struct Monitor {
    std::vector<double> norms;  // one per monitor_norms entry
    double divergence = 0.0;    // NaN when no probe was taken
    double circulation = 0.0;   // sum q vol
    double impulse = 0.0;       // sum q r^2 vol, diagnostic only
};

struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<ParticleField> snapshots;
    std::vector<Monitor> monitors;
    std::vector<VelocityGrid> probes;  // parallel to times when a probe grid is configured
    std::vector<double> probe_times;
    int steps = 0;
    int remesh_events = 0;
};

struct SimulationAborted : Error {
    SimulationAborted(const std::string& what, int step, ParticleField last_good)
        : Error(what), step(step), last_good(std::move(last_good))
    {
    }
    int step;
    ParticleField last_good;
};

// Particle velocities with the axis handled by the even/odd extension:
// a position with r < 0 is evaluated at |r| and u_r flips sign.
std::vector<VelocitySample> particle_velocities(const std::vector<MeridianPoint>& pos, const ParticleField& f,
                                                const KernelConfig& kcfg, Backend backend);

ParticleField advect_step(const ParticleField& field, const SimConfig& cfg);
ParticleField advect_step(const ParticleField& field, const SimConfig& cfg, double dt);

// Lattice used for remeshing the given particles (covers their support with the M4' margin).
Grid remesh_grid(const ParticleField& f, double h, double z_anchor);
double inferred_spacing(const ParticleField& f);

TrajectoryRecord simulate(const RelativeVorticityField& initial, const SimConfig& cfg);

}  // namespace axisym
