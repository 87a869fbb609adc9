#include "axisym/estimates.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <sstream>

#include "quadrature.hpp"

namespace axisym {

namespace {

constexpr double kPi = std::numbers::pi;

double ratio(double lhs, double rhs)
{
    if (rhs == 0.0) {
        if (lhs == 0.0)
            return 0.0;
        throw Error("degenerate right-hand side: zero bound with nonzero lhs");
    }
    return lhs / rhs;
}

double blob_for(const RelativeVorticityField& field, const EstimateConfig& cfg)
{
    if (cfg.kernel.blob_delta > 0)
        return cfg.kernel.blob_delta;
    return cfg.blob_factor * data_spacing(field);
}

bool all_zero(const ParticleField& f)
{
    for (auto& p : f.particles)
        if (p.q != 0.0)
            return false;
    return true;
}

// Node lattice (i h, z0 + j h) covering Cylinder(R, z0); anchored at z0 so
// that nested radii share nodes.
ProbeGrid local_lattice(double R, double z0, double h)
{
    int k = int(std::ceil(R / h - 1e-9));
    return ProbeGrid::covering(k * h, z0 - k * h, z0 + k * h, h);
}

// Cell-centred blocks around the data: the innermost block has spacing h0,
// each further block doubles spacing and extent and skips the block inside it.
struct Nested {
    std::vector<MeridianPoint> pts;
    std::vector<SampleCell> cells;
    std::vector<char> outer;  // touches the outermost boundary
    double radius = 0.0;      // smallest distance from the centre to the outer boundary
};

Nested nested_blocks(double zc, double Br, double Bz, double h0, double L)
{
    Nested out;
    int nr = 2 * std::max(1, int(std::ceil(Br / (2.0 * h0) - 1e-9)));
    int nz = 2 * std::max(1, int(std::ceil(Bz / (2.0 * h0) - 1e-9)));
    double h = h0;
    for (int level = 0;; ++level, h *= 2.0) {
        bool last = nr * h >= L && nz * h >= L;
        for (int j = -nz; j < nz; ++j)
            for (int i = 0; i < nr; ++i) {
                if (level > 0 && i < nr / 2 && j >= -nz / 2 && j < nz / 2)
                    continue;
                SampleCell c{i * h, (i + 1) * h, zc + j * h, zc + (j + 1) * h};
                out.cells.push_back(c);
                out.pts.push_back({0.5 * (c.r_lo + c.r_hi), 0.5 * (c.z_lo + c.z_hi)});
                out.outer.push_back(last && (i == nr - 1 || j == -nz || j == nz - 1));
            }
        if (last) {
            out.radius = std::min(nr, nz) * h;
            break;
        }
    }
    return out;
}

Nested whole_space(const ParticleField& f, const EstimateConfig& cfg, double h_data)
{
    double rmax = 0, zlo = kInf, zhi = -kInf;
    for (auto& p : f.particles) {
        if (p.q == 0.0)
            continue;
        rmax = std::max(rmax, p.pos.r + 0.5 * h_data);
        zlo = std::min(zlo, p.pos.z - 0.5 * h_data);
        zhi = std::max(zhi, p.pos.z + 0.5 * h_data);
    }
    if (rmax == 0)
        throw Error("empty field");
    double zc = 0.5 * (zlo + zhi), hz = 0.5 * (zhi - zlo);
    double support = std::hypot(rmax, hz);
    return nested_blocks(zc, rmax, hz, cfg.whole_h, cfg.truncation_factor * support);
}

// Tail of int |f|^s beyond the truncation radius L, for |f| ~ |x|^-decay.
double tail_estimate(const Nested& nb, const std::vector<double>& f, double s, double decay)
{
    double fl = 0;
    for (std::size_t k = 0; k < f.size(); ++k)
        if (nb.outer[k])
            fl = std::max(fl, std::abs(f[k]));
    double L = nb.radius;
    return 4.0 * kPi * std::pow(fl, s) * L * L * L / (decay * s - 3.0);
}

double power_integral(const SampleSet& s, double p)
{
    double n = lp_norm(s, {p, WholeSpace{}});
    return std::pow(n, p);
}

EstimateReport base_report(const std::string& id, const NormSpec& region)
{
    EstimateReport rep;
    rep.estimate_id = id;
    rep.region = region;
    return rep;
}

// Majorant theta-integrands: min(1, rx/d)/d, min(1, rx/d)/d^2, 1/d, 1/d^2.
struct MajorantIntegrand {
    double sep2, B, rx;
    std::array<double, 4> operator()(double t) const
    {
        double sh = std::sin(0.5 * t);
        double d2 = sep2 + 2.0 * B * sh * sh;
        double d = std::sqrt(d2);
        double w = std::min(1.0, rx / d);
        return {w / d, w / d2, 1.0 / d, 1.0 / d2};
    }
};

}  // namespace

double driver_norm(const RelativeVorticityField& field, double p)
{
    double l1 = lp_norm(field, {1.0, WholeSpace{}});
    double lp = lp_norm(field, {p, WholeSpace{}});
    return std::max(l1, lp);
}

double data_spacing(const RelativeVorticityField& field)
{
    if (auto g = std::get_if<GridField>(&field))
        return g->grid.h;
    return inferred_spacing(std::get<ParticleField>(field));
}

bool known_estimate(const std::string& id)
{
    static const char* ids[] = {"velocity_lp", "gradient_lp", "tilde_u_halfplane", "high_integrability",
                                "ur_over_r",   "conservation", "pointwise_kernel", "key_estimate"};
    return std::find(std::begin(ids), std::end(ids), id) != std::end(ids);
}

bool finite_energy(const DataFamily& fam)
{
    // sheet strength ~ r^(1-a) gives |u| ~ |x|^(1-a), square integrable at infinity only for a > 5/2
    return !(fam.name == Family::NearSheet && fam.param("a") <= 2.5);
}

std::vector<MeridianPoint> kernel_bound_samples(const RelativeVorticityField& field, int n, std::uint64_t seed,
                                                double r_lo, double r_hi, double z_lo, double z_hi, double min_sep)
{
    if (n < 0 || !(r_lo >= 0) || !(r_hi > r_lo) || !(z_hi > z_lo))
        throw Error("invalid sampling box");
    ParticleField f = as_particles(field);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ur(r_lo, r_hi), uz(z_lo, z_hi);
    std::vector<MeridianPoint> out;
    long tries = 0;
    while (int(out.size()) < n) {
        if (++tries > 1000L * (n + 1))
            throw Error("could not place samples away from particle cores");
        MeridianPoint x{ur(rng), uz(rng)};
        bool ok = true;
        for (auto& p : f.particles)
            if (std::hypot(x.r - p.pos.r, x.z - p.pos.z) <= min_sep) {
                ok = false;
                break;
            }
        if (ok)
            out.push_back(x);
    }
    return out;
}

Majorants kernel_majorants(const ParticleField& f, const MeridianPoint& x, double tol)
{
    Majorants m;
    for (auto& p : f.particles) {
        if (p.q == 0.0)
            continue;
        double ry = p.pos.r, dz = x.z - p.pos.z;
        double A = x.r * x.r + ry * ry + dz * dz, B = 2.0 * x.r * ry;
        double sep = std::hypot(x.r - ry, dz);
        if (sep == 0.0)
            throw Error("sample point coincides with a particle");
        std::vector<double> cuts{0.0};
        double R = std::max(x.r, ry);
        if (R > 0 && sep < 0.5 * R)
            for (double t = sep / R; t < kPi; t *= 2.0)
                cuts.push_back(t);
        if (B > 0) {
            double c = (ry * ry + dz * dz) / B;
            if (c > -1.0 && c < 1.0)
                cuts.push_back(std::acos(c));
        }
        cuts.push_back(kPi);
        std::sort(cuts.begin(), cuts.end());
        double top = A + B;
        double floor = 2.0 * kPi * std::min(1.0, x.r / std::sqrt(top)) * std::min(1.0 / std::sqrt(top), 1.0 / top);
        auto v = quad::integrate<4>(MajorantIntegrand{sep * sep, B, x.r}, cuts, 0.5 * tol * floor, 4000);
        double w_area = std::abs(p.q) * p.vol / (2.0 * kPi);
        m.psi += 2.0 * w_area * ry * v[0];
        m.grad += 2.0 * w_area * ry * v[1];
        m.psi_over_r += 2.0 * w_area * v[2];
        m.grad_over_r += 2.0 * w_area * v[3];
    }
    return m;
}

EstimateReport verify_pointwise_kernel_bound(const RelativeVorticityField& field,
                                             const std::vector<MeridianPoint>& sample_points,
                                             const EstimateConfig& cfg)
{
    EstimateReport rep;
    rep.estimate_id = "pointwise_kernel";
    rep.region = {kInf, WholeSpace{}};
    ParticleField f = as_particles(field);
    double bound_C[4] = {0, 0, 0, 0};
    if (all_zero(f) || sample_points.empty()) {
        rep.extra = {{"C_psi", 0}, {"C_grad", 0}, {"C_psi_over_r", 0}, {"C_grad_over_r", 0}};
        return rep;
    }
    double delta = blob_for(field, cfg);
    for (auto& x : sample_points)
        if (!(x.r > 0))
            throw Error("pointwise bounds need samples off the axis");
    Sources src = make_sources(f, delta);
    auto jets = phi_eval(src, sample_points, cfg.backend, false);
    double best = -1;
    for (std::size_t k = 0; k < sample_points.size(); ++k) {
        const auto& x = sample_points[k];
        const PhiJet& j = jets[k];
        double psi = std::abs(x.r * j.phi);
        double grad = std::abs(j.phi + x.r * j.phi_r) + std::abs(x.r * j.phi_z);
        double lhs[4] = {psi, grad, std::abs(j.phi), grad / x.r};
        Majorants m = kernel_majorants(f, x, 1e-9);
        double rhs[4] = {m.psi, m.grad, m.psi_over_r, m.grad_over_r};
        for (int b = 0; b < 4; ++b) {
            double c = ratio(lhs[b], rhs[b]);
            bound_C[b] = std::max(bound_C[b], c);
            if (c > best) {
                best = c;
                rep.lhs = lhs[b];
                rep.rhs_norm = rhs[b];
            }
        }
    }
    rep.empirical_C = std::max(best, 0.0);
    rep.extra = {{"C_psi", bound_C[0]},
                 {"C_grad", bound_C[1]},
                 {"C_psi_over_r", bound_C[2]},
                 {"C_grad_over_r", bound_C[3]},
                 {"blob_delta", delta},
                 {"samples", double(sample_points.size())}};
    return rep;
}

bool within_ceilings(const EstimateReport& rep, const PointwiseCeilings& c)
{
    auto get = [&](const char* k) { return rep.extra.count(k) ? rep.extra.at(k) : 0.0; };
    return get("C_psi") <= c.psi && get("C_grad") <= c.grad && get("C_psi_over_r") <= c.psi_over_r &&
           get("C_grad_over_r") <= c.grad_over_r;
}

namespace {

struct LocalVelocity {
    ProbeGrid grid;
    std::vector<PhiJet> jets;
};

LocalVelocity local_jets(const Sources& src, double R, double z0, double h, Backend backend, bool second)
{
    LocalVelocity lv;
    lv.grid = local_lattice(R, z0, h);
    lv.jets = phi_eval(src, lv.grid.points(), backend, second);
    return lv;
}

std::vector<double> velocity_values(const LocalVelocity& lv)
{
    std::vector<double> vals;
    vals.reserve(2 * lv.jets.size());
    auto pts = lv.grid.points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
        VelocitySample u = velocity_from(lv.jets[k], pts[k].r);
        vals.push_back(u.u_r);
        vals.push_back(u.u_z);
    }
    return vals;
}

void check_p(double p, double lo, double hi, const char* what)
{
    if (!(p > lo && p < hi)) {
        std::ostringstream os;
        os << what << ": p = " << p << " outside (" << lo << ", " << hi << ")";
        throw Error(os.str());
    }
}

EstimateReport velocity_norm_report(const std::string& id, const RelativeVorticityField& field, double p_driver,
                                    double p_lhs, const Region& region, double R, double z0,
                                    const EstimateConfig& cfg)
{
    NormSpec spec{p_lhs, region};
    EstimateReport rep = base_report(id, spec);
    ParticleField f = as_particles(field);
    if (all_zero(f))
        return rep;
    double delta = blob_for(field, cfg);
    Sources src = make_sources(f, delta);
    LocalVelocity lv = local_jets(src, R, z0, cfg.probe_h, cfg.backend, false);
    rep.lhs = lp_norm(samples(lv.grid, velocity_values(lv), 2), spec);
    rep.rhs_norm = driver_norm(field, p_driver);
    rep.empirical_C = ratio(rep.lhs, rep.rhs_norm);
    rep.extra["blob_delta"] = delta;
    rep.extra["driver_p"] = p_driver;
    return rep;
}

}  // namespace

EstimateReport verify_velocity_lp_estimate(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                           const EstimateConfig& cfg)
{
    if (!(p > 1))
        throw Error("velocity_lp: p must exceed 1");
    return velocity_norm_report("velocity_lp", field, p, p, cyl, cyl.R, cyl.z0, cfg);
}

EstimateReport verify_tilde_u_halfplane(const RelativeVorticityField& field, double p, const HalfPlaneRect& rect,
                                        const EstimateConfig& cfg)
{
    if (!(p > 1))
        throw Error("tilde_u_halfplane: p must exceed 1");
    return velocity_norm_report("tilde_u_halfplane", field, p, p, rect, rect.R, rect.z0, cfg);
}

EstimateReport verify_high_integrability(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                         const EstimateConfig& cfg)
{
    check_p(p, 1.0, 2.0, "high_integrability");
    double s = 2.0 * p / (2.0 - p);
    EstimateReport rep = velocity_norm_report("high_integrability", field, p, s, cyl, cyl.R, cyl.z0, cfg);
    rep.extra["exponent"] = s;
    rep.extra["alpha"] = s - 2.0;
    return rep;
}

EstimateReport verify_gradient_lp_estimate(const RelativeVorticityField& field, double p, const CylinderRegion& cyl,
                                           const EstimateConfig& cfg)
{
    if (!(p > 1))
        throw Error("gradient_lp: p must exceed 1");
    NormSpec spec{p, cyl};
    EstimateReport rep = base_report("gradient_lp", spec);
    ParticleField f = as_particles(field);
    if (all_zero(f)) {
        rep.extra = {{"lemma_lhs", 0}, {"lemma_rhs", 0}, {"lemma_C", 0}};
        return rep;
    }
    double delta = blob_for(field, cfg);
    Sources src = make_sources(f, delta);

    LocalVelocity lv = local_jets(src, cyl.R, cyl.z0, cfg.probe_h, cfg.backend, true);
    auto pts = lv.grid.points();
    std::vector<double> vals;
    vals.reserve(4 * pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        VelocityGradient g = gradient_from(lv.jets[k], pts[k].r);
        vals.insert(vals.end(), {g.dur_dr, g.dur_dz, g.duz_dr, g.duz_dz});
    }
    rep.lhs = lp_norm(samples(lv.grid, vals, 4), spec);
    rep.rhs_norm = driver_norm(field, p);
    rep.empirical_C = ratio(rep.lhs, rep.rhs_norm);

    // d_r(u_r/r) = -Phi_rz, d_z(u_r/r) = -Phi_zz over the truncated whole space
    Nested nb = whole_space(f, cfg, data_spacing(field));
    auto jets = phi_eval(src, nb.pts, cfg.backend, true);
    SampleSet dr{nb.cells, {}, 1}, dz{nb.cells, {}, 1};
    dr.values.reserve(jets.size());
    dz.values.reserve(jets.size());
    for (auto& j : jets) {
        dr.values.push_back(-j.phi_rz);
        dz.values.push_back(-j.phi_zz);
    }
    double lemma_lhs = lp_norm(dr, {p, WholeSpace{}}) + lp_norm(dz, {p, WholeSpace{}});
    double lemma_rhs = lp_norm(field, {p, WholeSpace{}});
    double tail = tail_estimate(nb, dr.values, p, 5.0) + tail_estimate(nb, dz.values, p, 5.0);
    rep.extra = {{"lemma_lhs", lemma_lhs},
                 {"lemma_rhs", lemma_rhs},
                 {"lemma_C", ratio(lemma_lhs, lemma_rhs)},
                 {"truncation_radius", nb.radius},
                 {"tail_fraction", tail / (power_integral(dr, p) + power_integral(dz, p))},
                 {"blob_delta", delta}};
    return rep;
}

EstimateReport verify_ur_over_r(const RelativeVorticityField& field, double p, const EstimateConfig& cfg)
{
    check_p(p, 1.0, 3.0, "ur_over_r");
    double s = 3.0 * p / (3.0 - p);
    EstimateReport rep = base_report("ur_over_r", {s, WholeSpace{}});
    rep.extra["exponent"] = s;
    ParticleField f = as_particles(field);
    if (all_zero(f))
        return rep;
    double delta = blob_for(field, cfg);
    Sources src = make_sources(f, delta);
    Nested nb = whole_space(f, cfg, data_spacing(field));
    auto jets = phi_eval(src, nb.pts, cfg.backend, false);
    // u_r / r = -Phi_z, which is also the axis limit
    SampleSet ss{nb.cells, {}, 1};
    ss.values.reserve(jets.size());
    for (auto& j : jets)
        ss.values.push_back(-j.phi_z);
    rep.lhs = lp_norm(ss, {s, WholeSpace{}});
    rep.rhs_norm = lp_norm(field, {p, WholeSpace{}});
    rep.empirical_C = ratio(rep.lhs, rep.rhs_norm);
    rep.extra["truncation_radius"] = nb.radius;
    rep.extra["tail_fraction"] = tail_estimate(nb, ss.values, s, 4.0) / power_integral(ss, s);
    rep.extra["blob_delta"] = delta;
    return rep;
}

std::vector<double> energy_growth(const RelativeVorticityField& field, const std::vector<double>& radii, double z0,
                                  const EstimateConfig& cfg)
{
    std::vector<double> out(radii.size(), 0.0);
    if (radii.empty())
        return out;
    ParticleField f = as_particles(field);
    if (all_zero(f))
        return out;
    double rmin = *std::min_element(radii.begin(), radii.end());
    double rmax = *std::max_element(radii.begin(), radii.end());
    if (!(rmin > 0))
        throw Error("radii must be positive");
    Sources src = make_sources(f, blob_for(field, cfg));
    // blocks of half-size rmin, 2 rmin, ... so each cylinder is resolved at a spacing proportional to its size
    Nested nb = nested_blocks(z0, rmin, rmin, cfg.probe_h, rmax);
    auto u = velocities(src, nb.pts, cfg.backend);
    SampleSet ss{nb.cells, {}, 2};
    for (auto& v : u)
        ss.values.insert(ss.values.end(), {v.u_r, v.u_z});
    for (std::size_t k = 0; k < radii.size(); ++k)
        out[k] = lp_norm(ss, {2.0, CylinderRegion{radii[k], z0}});
    return out;
}

EstimateReport verify_conservation(const TrajectoryRecord& record, double p)
{
    if (record.snapshots.empty())
        throw Error("empty trajectory record");
    EstimateReport rep;
    rep.estimate_id = "conservation";
    rep.region = {p, WholeSpace{}};
    auto norm = [p](const ParticleField& f) { return f.particles.empty() ? 0.0 : lp_norm(f, {p, WholeSpace{}}); };
    double n0 = norm(record.snapshots.front());
    double top = n0, drift = 0;
    for (auto& s : record.snapshots) {
        double n = norm(s);
        top = std::max(top, n);
        if (n0 > 0)
            drift = std::max(drift, std::abs(n / n0 - 1.0));
    }
    rep.lhs = top;
    rep.rhs_norm = n0;
    rep.empirical_C = n0 == 0.0 ? 1.0 : top / n0;
    rep.extra = {{"max_drift", drift},
                 {"remesh_events", double(record.remesh_events)},
                 {"snapshots", double(record.snapshots.size())}};
    return rep;
}

EstimateReport key_estimate_diagnostic(const TrajectoryRecord& record, const EstimateConfig& cfg, bool finite)
{
    if (record.snapshots.empty())
        throw Error("empty trajectory record");
    EstimateReport rep;
    rep.estimate_id = "key_estimate";
    rep.region = {2.0, WholeSpace{}};
    const ParticleField& f0 = record.snapshots.front();
    if (all_zero(f0))
        return rep;
    double h = inferred_spacing(f0);
    double delta = cfg.kernel.blob_delta > 0 ? cfg.kernel.blob_delta : cfg.blob_factor * h;

    std::vector<double> weighted(record.snapshots.size());
    for (std::size_t k = 0; k < record.snapshots.size(); ++k) {
        const ParticleField& f = record.snapshots[k];
        Sources src = make_sources(f, delta);
        Nested nb = whole_space(f, cfg, h);
        auto jets = phi_eval(src, nb.pts, cfg.backend, false);
        SampleSet ss{nb.cells, {}, 1};
        for (std::size_t i = 0; i < jets.size(); ++i)
            ss.values.push_back(jets[i].phi_z / std::sqrt(1.0 + nb.pts[i].z * nb.pts[i].z));
        weighted[k] = power_integral(ss, 2.0);
    }
    double lhs = 0;
    for (std::size_t k = 1; k < weighted.size(); ++k)
        lhs += 0.5 * (record.times[k] - record.times[k - 1]) * (weighted[k] + weighted[k - 1]);
    rep.lhs = lhs;
    rep.extra["blob_delta"] = delta;
    rep.extra["T"] = record.times.back();
    if (!finite) {
        rep.rhs_norm = kInf;
        rep.empirical_C = 0.0;
        rep.extra["rhs_infinite"] = 1.0;
        return rep;
    }
    Sources src = make_sources(f0, delta);
    Nested nb = whole_space(f0, cfg, h);
    auto u = velocities(src, nb.pts, cfg.backend);
    SampleSet ss{nb.cells, {}, 2};
    std::vector<double> mag;
    for (auto& v : u) {
        ss.values.insert(ss.values.end(), {v.u_r, v.u_z});
        mag.push_back(std::hypot(v.u_r, v.u_z));
    }
    double energy = power_integral(ss, 2.0);
    rep.rhs_norm = energy + lp_norm(f0, {1.0, WholeSpace{}});
    rep.empirical_C = ratio(rep.lhs, rep.rhs_norm);
    rep.extra["energy"] = energy;
    rep.extra["energy_tail_fraction"] = tail_estimate(nb, mag, 2.0, 3.0) / energy;
    rep.extra["rhs_infinite"] = 0.0;
    return rep;
}

EstimateReport run_estimate(const std::string& id, const RelativeVorticityField& field, double p, double R, double z0,
                            const EstimateConfig& cfg)
{
    if (id == "velocity_lp")
        return verify_velocity_lp_estimate(field, p, {R, z0}, cfg);
    if (id == "gradient_lp")
        return verify_gradient_lp_estimate(field, p, {R, z0}, cfg);
    if (id == "tilde_u_halfplane")
        return verify_tilde_u_halfplane(field, p, {R, z0}, cfg);
    if (id == "high_integrability")
        return verify_high_integrability(field, p, {R, z0}, cfg);
    if (id == "ur_over_r")
        return verify_ur_over_r(field, p, cfg);
    throw Error("estimate '" + id + "' does not run on a single field");
}

std::vector<EstimateReport> run_ladder(const LadderSpec& spec)
{
    if (spec.levels < 1)
        throw Error("ladder needs at least one level");
    std::vector<EstimateReport> out;
    double h = spec.h0;
    for (int level = 0; level < spec.levels; ++level, h *= 0.5) {
        GridField g = make_initial(spec.family, default_grid(spec.family, h));
        EstimateReport rep = run_estimate(spec.estimate_id, g, spec.p, spec.R, spec.z0, spec.cfg);
        rep.data_label = family_name(spec.family.name);
        rep.refinement_level = level;
        rep.extra["h"] = h;
        out.push_back(std::move(rep));
    }
    return out;
}

double ladder_variation(const std::vector<EstimateReport>& ladder, const std::string& key)
{
    if (ladder.size() < 2)
        throw Error("ladder variation needs two levels");
    auto get = [&](const EstimateReport& r) {
        if (key == "empirical_C")
            return r.empirical_C;
        auto it = r.extra.find(key);
        if (it == r.extra.end())
            throw Error("report has no value '" + key + "'");
        return it->second;
    };
    double a = get(ladder[ladder.size() - 2]), b = get(ladder.back());
    if (a == 0.0)
        return b == 0.0 ? 0.0 : kInf;
    return std::abs(b - a) / std::abs(a);
}

}  // namespace axisym
