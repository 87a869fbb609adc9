#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace axisym {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MeridianPoint {
    double r = 0.0;
    double z = 0.0;
};

struct VortexParticle {
    MeridianPoint pos;
    double q = 0.0;
    double vol = 0.0;  // 3D volume, the 2*pi*r factor included
};

struct VelocitySample {
    double u_r = 0.0;
    double u_z = 0.0;
};

// Cell-centred lattice over [0, r_max] x [z_min, z_max]; node (i, j) sits at
// ((i + 1/2) h, z_min + (j + 1/2) h) so no node lies on the axis.
struct Grid {
    double r_max = 0.0;
    double z_min = 0.0;
    double z_max = 0.0;
    double h = 0.0;
    int nr = 0;
    int nz = 0;

    static Grid make(double r_max, double z_min, double z_max, double h);

    MeridianPoint node(int i, int j) const { return {(i + 0.5) * h, z_min + (j + 0.5) * h}; }
    double cell_volume(int i) const { return 2.0 * std::numbers::pi * (i + 0.5) * h * h * h; }
    std::size_t size() const { return std::size_t(nr) * std::size_t(nz); }
    std::size_t index(int i, int j) const { return std::size_t(j) * nr + i; }
};

struct GridField {
    Grid grid;
    std::vector<double> q;  // row-major, rows indexed by z

    double at(int i, int j) const { return q[grid.index(i, j)]; }
    double& at(int i, int j) { return q[grid.index(i, j)]; }
};

struct ParticleField {
    std::vector<VortexParticle> particles;
};

using RelativeVorticityField = std::variant<ParticleField, GridField>;

// One particle per grid cell.  Zero cells are dropped unless keep_zero is set.
ParticleField to_particles(const GridField& g, bool keep_zero = false);
ParticleField as_particles(const RelativeVorticityField& f);

// Sum of q * vol (2*pi times the circulation).
double circulation_moment(const ParticleField& f);
double circulation_moment(const GridField& f);
double impulse_moment(const ParticleField& f);
double max_abs_q(const ParticleField& f);

struct CylinderRegion {
    double R = 1.0;
    double z0 = 0.0;
};

struct HalfPlaneRect {
    double R = 1.0;
    double z0 = 0.0;
};

struct WholeSpace {};

using Region = std::variant<CylinderRegion, HalfPlaneRect, WholeSpace>;

struct NormSpec {
    double p = 2.0;
    Region region = WholeSpace{};
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

std::string describe(const Region& region);

// A scalar or vector field known on rectangular cells.  Each cell carries one
// sample (ncomp values); the pointwise magnitude is the Euclidean norm.
struct SampleCell {
    double r_lo, r_hi, z_lo, z_hi;
};

struct SampleSet {
    std::vector<SampleCell> cells;
    std::vector<double> values;
    int ncomp = 1;
    double magnitude(std::size_t k) const;
};

// Node lattice (i h, z_lo + j h), i in [0, nr), j in [0, nz); first column on the axis.
struct ProbeGrid {
    double h = 0.0;
    double z_lo = 0.0;
    int nr = 0;
    int nz = 0;

    static ProbeGrid covering(double r_max, double z_lo, double z_hi, double h);

    MeridianPoint node(int i, int j) const { return {i * h, z_lo + j * h}; }
    std::size_t size() const { return std::size_t(nr) * std::size_t(nz); }
    std::size_t index(int i, int j) const { return std::size_t(j) * nr + i; }
    std::vector<MeridianPoint> points() const;
    // dual cell of node (i, j), clipped at r = 0
    SampleCell cell(int i, int j) const;
};

struct VelocityGrid {
    ProbeGrid grid;
    std::vector<VelocitySample> u;
};

SampleSet samples(const ProbeGrid& g, const std::vector<double>& values, int ncomp = 1);
SampleSet samples(const VelocityGrid& v);
SampleSet samples(const GridField& f);

double lp_norm(const SampleSet& s, const NormSpec& spec);
double lp_norm(const GridField& f, const NormSpec& spec);
double lp_norm(const ParticleField& f, const NormSpec& spec);
double lp_norm(const RelativeVorticityField& f, const NormSpec& spec);
double lp_norm(const VelocityGrid& v, const NormSpec& spec);

// Cylindrical L2 norm of d_r(r u_r) + d_z(r u_z).
double divergence_residual(const VelocityGrid& v);

struct RemeshOptions {
    double floor = 0.0;  // relative to max|q| on the grid
};

// Largest ratio max|q_out| / max|q_in| for particles on a shifted copy of the
// target lattice, away from the axis (1.25 per direction).
inline constexpr double kRemeshOvershoot = 1.5625;

double m4prime(double x);

GridField remesh_to_grid(const ParticleField& particles, const Grid& target);
ParticleField remesh(const ParticleField& particles, const Grid& target, const RemeshOptions& opt = {});

// I/O: particles as CSV "r,z,q,vol", grids as JSON.
void write_particles_csv(const ParticleField& f, const std::string& path);
ParticleField read_particles_csv(const std::string& path);
void write_grid_json(const GridField& f, const std::string& path);
GridField read_grid_json(const std::string& path);

}  // namespace axisym
