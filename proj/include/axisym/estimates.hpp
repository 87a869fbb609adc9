#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "axisym/fields.hpp"
#include "axisym/initdata.hpp"
#include "axisym/kernel.hpp"
#include "axisym/transport.hpp"

namespace axisym {

struct EstimateConfig {
    // blob_delta = 0 means blob_factor times the data spacing
    KernelConfig kernel;
    double blob_factor = 1.0;
    double probe_h = 0.025;       // velocity sampling for local norms
    double whole_h = 0.05;        // innermost block of the whole-space sampling
    double truncation_factor = 4.0;
    Backend backend = Backend::Batched;
};

struct EstimateReport {
    std::string estimate_id;
    double lhs = 0.0;
    double rhs_norm = 0.0;
    double empirical_C = 0.0;
    NormSpec region;
    std::string data_label;
    int refinement_level = 0;
    std::map<std::string, double> extra;
};

// max(||q||_L1, ||q||_Lp) over R^3.
double driver_norm(const RelativeVorticityField& field, double p);

// Spacing of the data lattice (grid h, or inferred from particle volumes).
double data_spacing(const RelativeVorticityField& field);

// Random meridian points in [r_lo, r_hi] x [z_lo, z_hi] farther than min_sep
// from every particle of the field.
std::vector<MeridianPoint> kernel_bound_samples(const RelativeVorticityField& field, int n, std::uint64_t seed,
                                                double r_lo, double r_hi, double z_lo, double z_hi, double min_sep);

// Four pointwise bounds at once; extra holds C_psi, C_grad, C_psi_over_r,
// C_grad_over_r and empirical_C is their maximum.
EstimateReport verify_pointwise_kernel_bound(const RelativeVorticityField& field,
                                             const std::vector<MeridianPoint>& sample_points,
                                             const EstimateConfig& cfg);

// Golden ceilings for the four ratios, for samples with r >= 0.25.
struct PointwiseCeilings {
    double psi = 0.055, grad = 0.3, psi_over_r = 0.05, grad_over_r = 0.22;
};
inline constexpr PointwiseCeilings kPointwiseCeilings{};
bool within_ceilings(const EstimateReport& pointwise, const PointwiseCeilings& c = kPointwiseCeilings);

// The four majorant integrals at x (for tests and diagnostics).
struct Majorants {
    double psi = 0, grad = 0, psi_over_r = 0, grad_over_r = 0;
};
Majorants kernel_majorants(const ParticleField& f, const MeridianPoint& x, double tol);

EstimateReport verify_velocity_lp_estimate(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                           const EstimateConfig& cfg);
// extra: lemma_lhs = ||d_r(u_r/r)||_p + ||d_z(u_r/r)||_p over R^3, lemma_rhs = ||q||_p, lemma_C.
EstimateReport verify_gradient_lp_estimate(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                           const EstimateConfig& cfg);
EstimateReport verify_tilde_u_halfplane(const RelativeVorticityField& field, double p, const HalfPlaneRect& rect,
                                        const EstimateConfig& cfg);
EstimateReport verify_high_integrability(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                         const EstimateConfig& cfg);
EstimateReport verify_ur_over_r(const RelativeVorticityField& field, double p, const EstimateConfig& cfg);

// ||u||_L2(Cylinder(R, z0)) for each R, on one nested lattice.
std::vector<double> energy_growth(const RelativeVorticityField& field, const std::vector<double>& radii, double z0,
                                  const EstimateConfig& cfg);

EstimateReport verify_conservation(const TrajectoryRecord& record, double p);

// Time integral of int (u_r/r)^2 / (1 + z^2) dx.  Without finite energy the
// rhs is reported as infinite and empirical_C as 0.
EstimateReport key_estimate_diagnostic(const TrajectoryRecord& record, const EstimateConfig& cfg,
                                       bool finite_energy = true);

// ---- refinement ladders ---------------------------------------------------

struct LadderSpec {
    std::string estimate_id;  // velocity_lp, gradient_lp, tilde_u_halfplane, high_integrability, ur_over_r
    DataFamily family;
    double p = 1.5;
    double R = 1.0;
    double z0 = 0.0;
    int levels = 3;
    double h0 = 0.1;  // coarsest data spacing, halved per level
    EstimateConfig cfg;
};

EstimateReport run_estimate(const std::string& id, const RelativeVorticityField& field, double p, double R, double z0,
                            const EstimateConfig& cfg);
std::vector<EstimateReport> run_ladder(const LadderSpec& spec);

// Relative change of a report value between the two finest levels.  key is
// "empirical_C" or an entry of extra.
double ladder_variation(const std::vector<EstimateReport>& ladder, const std::string& key = "empirical_C");

bool known_estimate(const std::string& id);
bool finite_energy(const DataFamily& fam);

}  // namespace axisym
