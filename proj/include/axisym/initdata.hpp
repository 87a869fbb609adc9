#pragma once

#include <map>
#include <string>

#include "axisym/fields.hpp"

namespace axisym {

enum class Family { GaussianRing, DoubleRing, NearSheet, Manufactured };

Family parse_family(const std::string& name);
std::string family_name(Family f);

// Parameters by name; anything missing takes the family default.
//   gaussian_ring: r_c=1 z_c=0 sigma=0.25 amplitude=1
//   double_ring:   r1=1 z1=-0.4 r2=1 z2=0.4 sigma=0.2 a1=1 a2=1
//   near_sheet:    amplitude=1 r0=0.25 a=2.5 w=0.3 extent=16
//                  q = A (r0^2+r^2)^(-a/2) exp(-z^2/w^2), lattice truncated at r = extent
//   manufactured:  amplitude=1   q = -A (3 - 14r^2 + 4r^4 + 4r^2 z^2) exp(-r^2-z^2) / r
// Every family also takes dilation=1: q_lambda(r, z) = q(lambda r, lambda z).
struct DataFamily {
    Family name = Family::GaussianRing;
    std::map<std::string, double> params;

    double param(const std::string& key) const;
};

// Pointwise q(r, z) of a family.
double family_q(const DataFamily& fam, double r, double z);

// Check parameter ranges; throws naming the violated norm.
void validate(const DataFamily& fam);

GridField make_initial(const DataFamily& fam, const Grid& grid);

// A lattice that holds the family's support to rounding.
Grid default_grid(const DataFamily& fam, double h);

// Manufactured stream function r^2 exp(-r^2-z^2) and its velocity.
double manufactured_psi(double r, double z);
VelocitySample manufactured_velocity(double r, double z);

enum class Profile { StandardBump, QuarticBump };
enum class CutoffMode { Grow, Literal };

struct MollifierSpec {
    double eps = 0.2;
    Profile profile = Profile::StandardBump;
    CutoffMode cutoff_scale_mode = CutoffMode::Grow;
};

// Radial profile rho(t), t = |x| / eps, normalised so that eps^-3 rho(|x|/eps)
// has unit mass in R^3.
double mollifier_profile(Profile p, double t);

// Smooth step: 1 for t <= 1, 0 for t >= 2.
double cutoff_profile(double t);

// 3D convolution of the axisymmetric scalar q with eps^-3 rho(|x|/eps),
// discretised on the field's lattice and balanced so that constants are
// reproduced and mass is conserved exactly.
GridField mollify(const GridField& field, const MollifierSpec& spec);

// Multiply q by chi(eps |x|) (grow) or chi(|x| / eps) (literal), |x| = sqrt(r^2 + z^2).
GridField cutoff(const GridField& field, const MollifierSpec& spec);

enum class Composition { MollifyOnly, MollifyThenCutoff, CutoffThenMollify };
Composition parse_composition(const std::string& s);

GridField regularize(const GridField& field, const MollifierSpec& spec, Composition order);

}  // namespace axisym
