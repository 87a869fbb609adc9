#pragma once

#include <vector>

#include "axisym/fields.hpp"

namespace axisym {

struct KernelConfig {
    double quad_tol = 1e-10;         // absolute tolerance of the quadrature path
    bool use_elliptic = true;        // closed form through K and E instead of quadrature
    double blob_delta = 0.0;         // smoothing radius added inside the square root
    double near_field_switch = 0.5;  // separation / radius below which quadrature pre-splits near t = 0
    int max_subdivisions = 4000;
};

void validate(const KernelConfig& cfg);

// F = integral over (-pi, pi] of cos t / sqrt(r_x^2 + r_y^2 - 2 r_x r_y cos t + dz^2 + delta^2),
// with derivatives in the target coordinates r_x, z_x.
struct KernelValue {
    double F = 0.0;
    double dF_dr = 0.0;
    double dF_dz = 0.0;
};

KernelValue angular_kernel(const MeridianPoint& x, const MeridianPoint& y, const KernelConfig& cfg);
KernelValue angular_kernel_quadrature(const MeridianPoint& x, const MeridianPoint& y, const KernelConfig& cfg);
KernelValue angular_kernel_elliptic(const MeridianPoint& x, const MeridianPoint& y, double delta);

// Meridian gradient of (u_r, u_z).
struct VelocityGradient {
    double dur_dr = 0.0;
    double dur_dz = 0.0;
    double duz_dr = 0.0;
    double duz_dz = 0.0;
};

double stream_eval(const RelativeVorticityField& field, const MeridianPoint& x, const KernelConfig& cfg);
VelocitySample velocity_eval(const RelativeVorticityField& field, const MeridianPoint& x, const KernelConfig& cfg);
VelocityGradient velocity_gradient_eval(const RelativeVorticityField& field, const MeridianPoint& x,
                                        const KernelConfig& cfg);

// ---- batched evaluation -------------------------------------------------
//
// Everything is expressed through Phi = psi / r, which is smooth up to the axis:
//   u_r = -r Phi_z,  u_z = 2 Phi + r Phi_r.

// Particle sources.  a_j = 2 q_j r_j^2 vol_j / pi^2 so that
// Phi(x) = sum_j a_j s^{-3/2} T(m).
struct Sources {
    std::vector<double> r, z, a;
    double delta = 0.0;
    std::size_t size() const { return r.size(); }
};

Sources make_sources(const ParticleField& f, double delta);
Sources make_sources(const RelativeVorticityField& f, double delta);

struct PhiJet {
    double phi = 0, phi_r = 0, phi_z = 0;
    double phi_rr = 0, phi_rz = 0, phi_zz = 0;
};

enum class Backend { Reference, Batched };

// Phi and derivatives at each target.  With second = false the second
// derivatives are left at zero.
std::vector<PhiJet> phi_eval(const Sources& src, const std::vector<MeridianPoint>& targets, Backend backend,
                             bool second = false);

// Phi and first derivatives at the sources themselves, own blob included.
// The batched backend visits each unordered pair once.
std::vector<PhiJet> phi_self(const Sources& src, Backend backend);

VelocitySample velocity_from(const PhiJet& j, double r);
VelocityGradient gradient_from(const PhiJet& j, double r);

std::vector<VelocitySample> velocities(const Sources& src, const std::vector<MeridianPoint>& targets,
                                       Backend backend = Backend::Batched);
std::vector<VelocitySample> self_velocities(const Sources& src, Backend backend = Backend::Batched);
VelocityGrid velocity_grid(const Sources& src, const ProbeGrid& grid, Backend backend = Backend::Batched);

}  // namespace axisym
