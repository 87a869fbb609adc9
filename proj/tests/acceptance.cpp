// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance --criterion k   (k = 1..8, or 0 for all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "axisym/estimates.hpp"
#include "axisym/harness.hpp"
#include "axisym/initdata.hpp"
#include "axisym/kernel.hpp"
#include "axisym/transport.hpp"

using namespace axisym;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

std::string list(const std::vector<double>& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + fmt(v[i]);
    return s + ")";
}

void kernel_correctness(Outcome& o)
{
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> R(0.0, 3.0), Z(-2.0, 2.0), D(0.0, 0.3);
    KernelConfig cq;
    cq.use_elliptic = false;
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        MeridianPoint x{R(rng), 0.0}, y{R(rng), Z(rng)};
        double d = D(rng);
        cq.blob_delta = d;
        KernelValue e = angular_kernel_elliptic(x, y, d), q = angular_kernel_quadrature(x, y, cq);
        worst = std::max({worst, std::abs(e.F - q.F), std::abs(e.dF_dr - q.dF_dr), std::abs(e.dF_dz - q.dF_dz)});
    }
    o.detail << " max|elliptic-quadrature|=" << fmt(worst);
    o.require(worst <= 10 * cq.quad_tol, "agreement within 10 quad_tol");

    KernelConfig cfg;
    double axis = 0;
    for (int k = 0; k < 200; ++k) {
        MeridianPoint x{0.0, Z(rng)}, y{R(rng), Z(rng)};
        cfg.blob_delta = D(rng);
        axis = std::max(axis, std::abs(angular_kernel(x, y, cfg).F));
        axis = std::max(axis, std::abs(angular_kernel(y, x, cfg).F));
    }
    o.detail << " max|F on axis|=" << fmt(axis);
    o.require(axis <= 1e-14, "F = 0 on the axis");

    double sym = 0;
    for (int k = 0; k < 1000; ++k) {
        MeridianPoint x{R(rng), Z(rng)}, y{R(rng), Z(rng)};
        cfg.blob_delta = D(rng);
        double a = angular_kernel(x, y, cfg).F, b = angular_kernel(y, x, cfg).F;
        sym = std::max(sym, std::abs(a - b));
    }
    o.detail << " max|F(x,y)-F(y,x)|=" << fmt(sym);
    o.require(sym <= 1e-14, "symmetry");
}

void biot_savart_inversion(Outcome& o)
{
    DataFamily fam{Family::Manufactured, {}};
    ProbeGrid pg = ProbeGrid::covering(2.0, -2.0, 2.0, 0.1);
    std::vector<MeridianPoint> pts = pg.points();
    NormSpec n{2.0, CylinderRegion{2.0, 0.0}};
    std::vector<double> psi_err, vel_err;
    for (double h : {0.05, 0.025, 0.0125}) {
        GridField g = make_initial(fam, default_grid(fam, h));
        Sources src = make_sources(RelativeVorticityField(g), 0.0);
        std::vector<PhiJet> jets = phi_eval(src, pts, Backend::Batched, false);
        std::vector<double> ep, ep0, eu, eu0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            double exact = manufactured_psi(pts[k].r, pts[k].z);
            ep.push_back(pts[k].r * jets[k].phi - exact);
            ep0.push_back(exact);
            VelocitySample u = velocity_from(jets[k], pts[k].r), ue = manufactured_velocity(pts[k].r, pts[k].z);
            eu.insert(eu.end(), {u.u_r - ue.u_r, u.u_z - ue.u_z});
            eu0.insert(eu0.end(), {ue.u_r, ue.u_z});
        }
        psi_err.push_back(lp_norm(samples(pg, ep, 1), n) / lp_norm(samples(pg, ep0, 1), n));
        vel_err.push_back(lp_norm(samples(pg, eu, 2), n) / lp_norm(samples(pg, eu0, 2), n));
    }
    double r1 = psi_err[0] / psi_err[1], r2 = psi_err[1] / psi_err[2];
    o.detail << " h=(0.05,0.025,0.0125) rel_err_psi=" << list(psi_err) << " ratios=(" << fmt(r1) << "," << fmt(r2)
             << ") rel_err_u=" << list(vel_err);
    o.require(psi_err[0] < 1e-3, "error < 1e-3 at h = 0.05");
    o.require(r1 >= 3.2 && r1 <= 4.8 && r2 >= 3.2 && r2 <= 4.8, "second-order ratios");
}

void exact_conservation(Outcome& o)
{
    DataFamily fam{Family::GaussianRing, {}};
    const double h = 0.034;
    GridField g = make_initial(fam, default_grid(fam, h));
    SimConfig s;
    s.dt = 0.001;
    s.t_end = 200 * s.dt;
    s.kernel.blob_delta = h;
    s.monitor_norms = {{1.0, WholeSpace{}}, {2.0, WholeSpace{}}};
    s.snapshot_every = 200;

    TrajectoryRecord plain = simulate(g, s);
    bool bitwise = true;
    for (const Monitor& m : plain.monitors)
        bitwise = bitwise && m.norms == plain.monitors.front().norms;
    o.detail << " N=" << plain.snapshots.front().particles.size() << " steps=" << plain.steps
             << " remesh-free L1,L2 bitwise=" << (bitwise ? "yes" : "no");
    o.require(plain.steps == 200, "200 steps");
    o.require(bitwise, "bitwise conservation without remeshing");

    s.remesh_every = 1;
    s.remesh.floor = 1e-14;
    TrajectoryRecord rem = simulate(g, s);
    const Monitor &a = rem.monitors.front(), &b = rem.monitors.back();
    double d1 = std::abs(b.norms[0] / a.norms[0] - 1), d2 = std::abs(b.norms[1] / a.norms[1] - 1);
    o.detail << " remeshed(" << rem.remesh_events << " events) drift L1=" << fmt(d1) << " L2=" << fmt(d2);
    o.require(d1 < 1e-6 && d2 < 1e-6, "drift < 1e-6 with remeshing");
}

void divergence_free(Outcome& o)
{
    DataFamily fam{Family::GaussianRing, {}};
    GridField g = make_initial(fam, default_grid(fam, 0.05));
    Sources src = make_sources(RelativeVorticityField(g), 0.1);
    std::vector<double> res;
    for (double ph : {0.025, 0.0125, 0.00625})
        res.push_back(divergence_residual(velocity_grid(src, ProbeGrid::covering(2.0, -2.0, 2.0, ph))));
    double r1 = res[0] / res[1], r2 = res[1] / res[2];
    o.detail << " probe_h=(0.025,0.0125,0.00625) residual=" << list(res) << " ratios=(" << fmt(r1) << "," << fmt(r2)
             << ")";
    o.require(r1 >= 3.2 && r1 <= 4.8 && r2 >= 3.2 && r2 <= 4.8, "second-order decrease");
    o.require(res.back() < 1e-4, "residual < 1e-4 at the finest spacing");
}

DataFamily family_for(Family f)
{
    DataFamily fam{f, {}};
    if (f == Family::NearSheet)
        fam.params["extent"] = 8.0;
    return fam;
}

void estimate_boundedness(Outcome& o, std::uint64_t seed)
{
    const std::vector<std::string> ids = {"velocity_lp", "gradient_lp", "tilde_u_halfplane", "high_integrability",
                                          "ur_over_r"};
    for (Family f : {Family::GaussianRing, Family::NearSheet}) {
        const char* label = f == Family::GaussianRing ? "ring" : "sheet";
        for (const std::string& id : ids) {
            LadderSpec s;
            s.estimate_id = id;
            s.family = family_for(f);
            s.p = id == "high_integrability" ? 4.0 / 3.0 : 1.5;
            s.R = 1.0;
            s.levels = 3;
            s.h0 = 0.1;
            std::vector<EstimateReport> L = run_ladder(s);
            double v = ladder_variation(L);
            o.detail << " " << label << "/" << id << "=" << fmt(v);
            o.require(v < 0.1, std::string(label) + " " + id + " variation");
            if (id == "gradient_lp") {
                double w = ladder_variation(L, "lemma_C");
                o.detail << " " << label << "/gradient_lp.lemma_C=" << fmt(w);
                o.require(w < 0.1, std::string(label) + " lemma_C variation");
            }
        }
    }

    o.detail << " pointwise seed=" << seed;
    const double h = 0.05;
    EstimateConfig cfg;
    for (Family f : {Family::GaussianRing, Family::NearSheet}) {
        DataFamily fam = family_for(f);
        RelativeVorticityField fld(make_initial(fam, default_grid(fam, h)));
        std::vector<MeridianPoint> pts = kernel_bound_samples(fld, 100, seed, 0.25, 3.0, -2.0, 2.0, 0.25 * h);
        EstimateReport r = verify_pointwise_kernel_bound(fld, pts, cfg);
        const char* label = f == Family::GaussianRing ? "ring" : "sheet";
        o.detail << " " << label << "(C_psi,C_grad,C_psi/r,C_grad/r)=("
                 << fmt(r.extra.at("C_psi")) << "," << fmt(r.extra.at("C_grad")) << ","
                 << fmt(r.extra.at("C_psi_over_r")) << "," << fmt(r.extra.at("C_grad_over_r")) << ")";
        o.require(pts.size() == 100, std::string(label) + " 100 samples");
        o.require(within_ceilings(r), std::string(label) + " pointwise ratios below golden ceilings");
    }
}

void high_integrability(Outcome& o)
{
    DataFamily wide{Family::NearSheet, {{"extent", 16.0}}};
    RelativeVorticityField fld(make_initial(wide, default_grid(wide, 0.05)));
    std::vector<double> e = energy_growth(fld, {1, 2, 4, 8}, 0.0, EstimateConfig{});
    o.detail << " L2(Cyl R), R=(1,2,4,8): " << list(e);
    bool increasing = true, sustained = true;
    double first = e[1] * e[1] - e[0] * e[0];
    for (std::size_t i = 1; i < e.size(); ++i) {
        double inc = e[i] * e[i] - e[i - 1] * e[i - 1];
        increasing = increasing && e[i] > e[i - 1];
        sustained = sustained && inc >= 0.5 * first;
    }
    o.require(increasing, "L2 norm increases with R");
    o.require(sustained, "squared increments do not decay");

    LadderSpec s;
    s.estimate_id = "high_integrability";
    s.family = family_for(Family::NearSheet);
    s.p = 4.0 / 3.0;
    s.R = 1.0;
    s.levels = 3;
    s.h0 = 0.1;
    std::vector<EstimateReport> L = run_ladder(s);
    std::vector<double> lhs;
    for (const EstimateReport& r : L)
        lhs.push_back(r.lhs);
    double a = lhs[lhs.size() - 2], b = lhs.back();
    double v = std::abs(b - a) / std::abs(a);
    bool finite = std::all_of(lhs.begin(), lhs.end(), [](double x) { return std::isfinite(x) && x > 0; });
    o.detail << " L4(Cyl 1) ladder h=(0.1,0.05,0.025): " << list(lhs) << " variation=" << fmt(v);
    o.require(finite && v < 0.1, "L4(Cylinder(1)) bounded across the ladder");
}

void weak_residual_halving(Outcome& o)
{
    WeakStudyConfig c;
    c.family = DataFamily{Family::GaussianRing, {}};
    c.levels = 2;
    std::vector<ResidualReport> reps = weak_refinement_study(c);
    const ResidualReport &coarse = reps[0], &fine = reps[1];
    for (std::size_t k = 0; k < coarse.names.size(); ++k) {
        double ratio = std::abs(fine.residuals[k]) / std::abs(coarse.residuals[k]);
        o.detail << " " << coarse.names[k] << ":" << fmt(coarse.residuals[k]) << "->" << fmt(fine.residuals[k])
                 << " (x" << fmt(ratio) << ")";
        o.require(ratio <= 0.6, coarse.names[k] + " factor <= 0.6");
    }
    o.require(coarse.names.size() == 5, "five test functions");
}

void epsilon_cauchy(Outcome& o)
{
    DataFamily fam{Family::NearSheet, {{"extent", 4.0}}};
    EpsilonStudyConfig cfg;
    cfg.grid = default_grid(fam, 0.05);
    cfg.sim.kernel.blob_delta = 0.05;
    cfg.sim.dt = 0.02;
    cfg.sim.t_end = 0.5;
    EpsilonStudyReport rep = epsilon_convergence_study(fam, {0.4, 0.2, 0.1}, cfg);
    for (std::size_t k = 0; k < rep.radii.size(); ++k) {
        o.detail << " R=" << fmt(rep.radii[k]) << ":" << list(rep.differences[k]);
        bool asserted = std::find(cfg.asserted_radii.begin(), cfg.asserted_radii.end(), rep.radii[k]) !=
                        cfg.asserted_radii.end();
        if (asserted)
            o.require(rep.monotone[k], "strict decrease at R=" + fmt(rep.radii[k]));
        else
            o.detail << (rep.monotone[k] ? "(decreasing)" : "(not decreasing)");
    }
    o.detail << " N=" << rep.particles_finest;
}

const char* kTitles[] = {"",
                         "kernel correctness",
                         "Biot-Savart inversion",
                         "exact conservation",
                         "divergence-free velocity",
                         "estimate boundedness",
                         "high-integrability signature",
                         "weak residual",
                         "epsilon-Cauchy convergence"};

const double kBudget[] = {0, 10, 120, 300, 0, 0, 0, 0, 1800};

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"acceptance criteria"};
    int which = 0;
    std::uint64_t seed = 0;
    app.add_option("--criterion", which, "criterion 1-8, 0 for all")->check(CLI::Range(0, 8));
    app.add_option("--seed", seed, "seed for the pointwise samples, 0 for a fresh one");
    CLI11_PARSE(app, argc, argv);
    if (seed == 0)
        seed = static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count());

    std::vector<std::function<void(Outcome&)>> run = {
        nullptr,
        kernel_correctness,
        biot_savart_inversion,
        exact_conservation,
        divergence_free,
        [seed](Outcome& o) { estimate_boundedness(o, seed); },
        high_integrability,
        weak_residual_halving,
        epsilon_cauchy,
    };

    bool all = true;
    for (int k = 1; k <= 8; ++k) {
        if (which != 0 && which != k)
            continue;
        Outcome o;
        auto t0 = std::chrono::steady_clock::now();
        try {
            run[k](o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [error: " << e.what() << "]";
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (kBudget[k] > 0)
            o.require(secs < kBudget[k], "runtime < " + fmt(kBudget[k]) + " s");
        std::printf("criterion %d (%s): %s  time=%.1fs%s\n", k, kTitles[k], o.pass ? "PASS" : "FAIL", secs,
                    o.detail.str().c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
