#pragma once

#include <map>
#include <string>
#include <vector>

#include "axisym/fields.hpp"
#include "axisym/initdata.hpp"
#include "axisym/transport.hpp"

namespace axisym {

// One tensor bump b(rho) tau(t) with rho = ((r - r_c)/a)^2 + ((z - z_c)/c)^2,
// b(rho) = exp(-1/(1 - rho)) and tau a bump on (t0, t1).
struct BumpTerm {
    double weight = 1.0;
    double r_c = 1.0, z_c = 0.0, a = 0.5, c = 0.5;
    double t0 = 0.0, t1 = 1.0;
};

// phi = curl(eta e_theta) with eta = r * sum_k weight_k b_k tau_k.
struct WeakTestFunction {
    std::string name;
    std::vector<BumpTerm> terms;
};

struct TestValue {
    double phi_r = 0, phi_z = 0;
    double dt_phi_r = 0, dt_phi_z = 0;
    double dr_phi_r = 0, dz_phi_r = 0, dr_phi_z = 0, dz_phi_z = 0;
};

void validate(const WeakTestFunction& phi);
TestValue evaluate(const WeakTestFunction& phi, double r, double z, double t);

// Linear combination of test functions (term lists concatenated).
WeakTestFunction combine(double a, const WeakTestFunction& p, double b, const WeakTestFunction& q);

// Five tests around a ring at radius 1 near z = 0, time supports inside (0, T).
std::vector<WeakTestFunction> builtin_tests(double T);

struct ResidualReport {
    std::vector<std::string> names;
    std::vector<double> residuals;
    double probe_h = 0.0;
    int time_samples = 0;
    std::map<std::string, std::string> meta;
};

// R(phi) = int_0^T int (u . d_t phi + u_i u_j d_j phi_i) dx dt on the record's
// velocity probes.  Space: 2 pi r dr dz trapezoid.  Time: the spatial moments of
// each term are interpolated cubically between probe times and integrated
// against the exact tau and tau'.
ResidualReport weak_residual(const TrajectoryRecord& record, const std::vector<WeakTestFunction>& tests);

// Scalar potential xi = sum_k weight_k b_k tau_k for the gradient test phi = grad xi.
struct GradientTestCheck {
    double time_term = 0.0;       // int int u . grad(d_t xi)
    double quadratic_term = 0.0;  // int int u . (grad grad xi) u, equals -int int p lap xi for Euler
    double bound = 0.0;           // int ||div u||_L2(supp) ||d_t xi||_L2 dt
};
GradientTestCheck gradient_test_check(const TrajectoryRecord& record, const std::vector<BumpTerm>& xi);

// ---- refinement of the weak residual -------------------------------------

struct WeakStudyConfig {
    DataFamily family;
    double h = 0.1;       // data lattice at the coarsest level
    double dt = 0.05;
    double t_end = 1.0;
    double blob_factor = 1.0;
    Integrator integrator = Integrator::RK2;
    double probe_h = 0.0125;  // halved with h
    double probe_r = 2.0, probe_z_lo = -0.8, probe_z_hi = 1.0;
    int levels = 2;
};

// One residual report per level; h, dt and probe_h halved each level.
std::vector<ResidualReport> weak_refinement_study(const WeakStudyConfig& cfg);

// ---- epsilon study -------------------------------------------------------

struct EpsilonStudyConfig {
    Grid grid;  // lattice for the base data; empty means default_grid(family, 0.05)
    SimConfig sim;
    MollifierSpec mollifier;  // eps replaced per run
    Composition composition = Composition::MollifyThenCutoff;
    std::vector<double> radii{0.25, 1.0, 2.0};
    std::vector<double> asserted_radii{0.25, 1.0};
    double probe_h = 0.05;
};

struct EpsilonStudyReport {
    std::vector<double> eps;
    std::vector<double> radii;
    // differences[k][i] = ||u_{eps_i} - u_{eps_{i+1}}||_{L2(0,T; Cylinder(radii[k]))}
    std::vector<std::vector<double>> differences;
    std::vector<bool> monotone;  // per radius
    bool passed = false;
    int particles_finest = 0;
};

// L2(0,T; Cylinder(R)) distance between two probe series with matching times.
double trajectory_difference(const TrajectoryRecord& a, const TrajectoryRecord& b, double R, double z0 = 0.0);

EpsilonStudyReport epsilon_convergence_study(const DataFamily& base, const std::vector<double>& eps_list,
                                             const EpsilonStudyConfig& cfg);

}  // namespace axisym
