#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "axisym/estimates.hpp"
#include "axisym/harness.hpp"
#include "axisym/initdata.hpp"
#include "axisym/kernel.hpp"
#include "axisym/report.hpp"
#include "axisym/transport.hpp"

using namespace axisym;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Globals {
    int threads = 0;
    std::uint64_t seed = 12345;
    std::string out_dir = ".";
};

std::string out_path(const Globals& g, const std::string& name)
{
    fs::create_directories(g.out_dir);
    return (fs::path(g.out_dir) / name).string();
}

DataFamily family_from(const std::string& name, const std::vector<std::string>& kv)
{
    DataFamily fam{parse_family(name), {}};
    for (auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw Error("parameter '" + s + "' is not key=value");
        fam.params[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
    }
    validate(fam);
    return fam;
}

DataFamily family_from(const json& j)
{
    DataFamily fam{parse_family(j.at("family").get<std::string>()), {}};
    if (j.contains("params"))
        for (auto& [k, v] : j.at("params").items())
            fam.params[k] = v.get<double>();
    validate(fam);
    return fam;
}

Region region_from(const json& j)
{
    std::string type = j.value("type", "whole");
    if (type == "cylinder")
        return CylinderRegion{j.at("R").get<double>(), j.value("z0", 0.0)};
    if (type == "halfplane")
        return HalfPlaneRect{j.at("R").get<double>(), j.value("z0", 0.0)};
    if (type == "whole")
        return WholeSpace{};
    throw Error("unknown region type: " + type);
}

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(const std::string& path, const json& j)
{
    write_text(path, j.dump(2) + "\n");
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const Globals& g, const std::string& config_path)
{
    std::ifstream in(config_path);
    if (!in)
        throw Error("cannot read config " + config_path);
    json c = json::parse(in);

    RelativeVorticityField initial;
    std::string label;
    double h = c.value("h", 0.05);
    if (c.contains("input")) {
        std::string p = c.at("input");
        if (p.size() > 4 && p.substr(p.size() - 4) == ".csv")
            initial = read_particles_csv(p);
        else
            initial = read_grid_json(p);
        label = p;
        h = data_spacing(initial);
    } else {
        DataFamily fam = family_from(c);
        initial = make_initial(fam, default_grid(fam, h));
        label = family_name(fam.name);
    }

    SimConfig sim;
    sim.dt = c.value("dt", sim.dt);
    sim.t_end = c.value("t_end", sim.t_end);
    sim.integrator = c.value("integrator", std::string("rk2")) == "rk4" ? Integrator::RK4 : Integrator::RK2;
    sim.remesh_every = c.value("remesh_every", 0);
    sim.kernel.blob_delta = c.value("blob_delta", c.value("blob_factor", 1.0) * h);
    sim.adaptive_dt = c.value("adaptive_dt", false);
    sim.cfl = c.value("cfl", sim.cfl);
    sim.snapshot_every = c.value("snapshot_every", 1);
    sim.backend = c.value("backend", std::string("batched")) == "reference" ? Backend::Reference : Backend::Batched;
    if (c.contains("remesh_floor"))
        sim.remesh.floor = c.at("remesh_floor").get<double>();
    if (c.contains("monitor_norms"))
        for (auto& n : c.at("monitor_norms"))
            sim.monitor_norms.push_back({n.at("p").get<double>(), region_from(n.value("region", json::object()))});
    else
        sim.monitor_norms = {{1.0, WholeSpace{}}, {2.0, WholeSpace{}}};
    if (c.contains("probe")) {
        const json& p = c.at("probe");
        sim.probe = ProbeGrid::covering(p.at("r_max"), p.at("z_lo"), p.at("z_hi"), p.at("h"));
        sim.probe_every = p.value("every", 1);
    }

    TrajectoryRecord rec;
    bool aborted = false;
    std::string abort_msg;
    try {
        rec = simulate(initial, sim);
    } catch (const SimulationAborted& e) {
        aborted = true;
        abort_msg = e.what();
        write_particles_csv(e.last_good, out_path(g, "last_good.csv"));
    }

    json manifest = {{"command", "simulate"},
                     {"config", c},
                     {"data_label", label},
                     {"threads", g.threads},
                     {"aborted", aborted}};
    bool ok = !aborted;
    if (!aborted) {
        write_particles_csv(rec.snapshots.back(), out_path(g, "final.csv"));
        write_json(out_path(g, "monitors.json"), envelope("monitors", monitor_table(rec, sim.monitor_norms)));
        // Lp norms of q never increase; Lagrangian transport keeps them fixed
        double budget = rec.remesh_events > 0 ? 1e-6 : 1e-12;
        json checks = json::array();
        for (double p : {1.0, 2.0}) {
            EstimateReport r = verify_conservation(rec, p);
            bool pass = r.extra["max_drift"] <= budget;
            ok = ok && pass;
            checks.push_back({{"p", p}, {"max_drift", r.extra["max_drift"]}, {"budget", budget}, {"pass", pass}});
        }
        manifest["conservation"] = checks;
        manifest["steps"] = rec.steps;
        manifest["remesh_events"] = rec.remesh_events;
        manifest["particles"] = rec.snapshots.back().particles.size();
    } else {
        manifest["error"] = abort_msg;
    }
    manifest["pass"] = ok;
    write_json(out_path(g, "manifest.json"), envelope("manifest", manifest));
    std::cout << (ok ? "simulate: pass" : "simulate: FAIL") << (aborted ? " (" + abort_msg + ")" : "") << "\n";
    return ok ? 0 : 1;
}

// ---- make-data -------------------------------------------------------------

int cmd_make_data(const Globals& g, const std::string& family, const std::vector<std::string>& params, double h,
                  double eps, const std::string& composition, const std::string& out)
{
    DataFamily fam = family_from(family, params);
    GridField f = make_initial(fam, default_grid(fam, h));
    if (eps > 0)
        f = regularize(f, MollifierSpec{eps, Profile::StandardBump, CutoffMode::Grow}, parse_composition(composition));
    std::string path = out.empty() ? out_path(g, family + ".json") : out;
    write_grid_json(f, path);
    std::cout << path << " " << f.grid.nr << "x" << f.grid.nz << "\n";
    return 0;
}

// ---- kernel-table ----------------------------------------------------------

int cmd_kernel_table(double rx, double ry, double dz, double delta, double tol)
{
    KernelConfig k;
    k.blob_delta = delta;
    k.quad_tol = tol;
    MeridianPoint x{rx, dz}, y{ry, 0.0};
    KernelValue e = angular_kernel_elliptic(x, y, delta);
    KernelValue q = angular_kernel_quadrature(x, y, k);
    std::cout << "path,F,dF_dr,dF_dz\n";
    std::cout << "elliptic," << fmt(e.F) << ',' << fmt(e.dF_dr) << ',' << fmt(e.dF_dz) << "\n";
    std::cout << "quadrature," << fmt(q.F) << ',' << fmt(q.dF_dr) << ',' << fmt(q.dF_dz) << "\n";
    return 0;
}

// ---- verify ----------------------------------------------------------------

int cmd_verify(const Globals& g, const std::string& id, const std::string& family,
               const std::vector<std::string>& params, double p, double R, int levels, double h0, int samples)
{
    if (!known_estimate(id))
        throw Error("unknown estimate: " + id);
    DataFamily fam = family_from(family, params);
    EstimateConfig cfg;
    std::vector<EstimateReport> reports;
    bool ok = true;

    if (id == "pointwise_kernel") {
        GridField f = make_initial(fam, default_grid(fam, h0));
        auto pts = kernel_bound_samples(f, samples, g.seed, 0.25, 3.0, -2.0, 2.0, 0.25 * h0);
        EstimateReport r = verify_pointwise_kernel_bound(f, pts, cfg);
        r.data_label = family;
        r.extra["seed"] = double(g.seed);
        ok = within_ceilings(r);
        reports.push_back(r);
    } else if (id == "conservation" || id == "key_estimate") {
        GridField f = make_initial(fam, default_grid(fam, h0));
        SimConfig sim;
        sim.dt = 0.05;
        sim.t_end = 0.5;
        sim.kernel.blob_delta = h0;
        TrajectoryRecord rec = simulate(f, sim);
        EstimateReport r = id == "conservation" ? verify_conservation(rec, p)
                                                : key_estimate_diagnostic(rec, cfg, finite_energy(fam));
        r.data_label = family;
        if (id == "conservation")
            ok = r.extra["max_drift"] <= 1e-12;
        reports.push_back(r);
    } else {
        LadderSpec spec{id, fam, p, R, 0.0, levels, h0, cfg};
        reports = run_ladder(spec);
        if (reports.size() >= 2) {
            double v = ladder_variation(reports);
            ok = v < 0.1;
            if (id == "gradient_lp")
                ok = ok && ladder_variation(reports, "lemma_C") < 0.1;
        }
    }

    for (auto& r : reports) {
        std::string name = id + "_" + family + "_L" + std::to_string(r.refinement_level) + ".json";
        write_json(out_path(g, name), envelope("estimate", to_json(r)));
    }
    write_text(out_path(g, id + "_" + family + ".csv"), estimates_csv(reports));
    std::cout << estimates_csv(reports);
    std::cout << "verify " << id << ": " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

// ---- weak-residual ---------------------------------------------------------

int cmd_weak(const Globals& g, const WeakStudyConfig& cfg)
{
    auto reps = weak_refinement_study(cfg);
    bool ok = true;
    json levels = json::array();
    for (auto& r : reps)
        levels.push_back(to_json(r));
    if (reps.size() >= 2)
        for (std::size_t l = 1; l < reps.size(); ++l)
            for (std::size_t k = 0; k < reps[l].residuals.size(); ++k)
                ok = ok && std::abs(reps[l].residuals[k]) <= 0.6 * std::abs(reps[l - 1].residuals[k]);
    write_json(out_path(g, "weak_residual.json"), envelope("weak_residual", {{"levels", levels}, {"pass", ok}}));
    write_text(out_path(g, "weak_residual.csv"), residuals_csv(reps));
    std::cout << residuals_csv(reps) << "weak-residual: " << (ok ? "pass" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

// ---- converge --------------------------------------------------------------

int cmd_converge(const Globals& g, const std::string& family, const std::vector<std::string>& params,
                 const std::vector<double>& eps, double h, double dt, double t_end, int remesh_every)
{
    DataFamily fam = family_from(family, params);
    EpsilonStudyConfig cfg;
    cfg.grid = default_grid(fam, h);
    cfg.sim.dt = dt;
    cfg.sim.t_end = t_end;
    cfg.sim.kernel.blob_delta = h;
    cfg.sim.remesh_every = remesh_every;
    EpsilonStudyReport rep = epsilon_convergence_study(fam, eps, cfg);
    write_json(out_path(g, "converge.json"), envelope("epsilon_study", to_json(rep)));
    write_text(out_path(g, "converge.csv"), epsilon_csv(rep));
    std::cout << epsilon_csv(rep) << "converge: " << (rep.passed ? "pass" : "FAIL") << "\n";
    return rep.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Axisymmetric Euler flow lab"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Globals g;
    app.add_option("--threads", g.threads, "OpenMP threads (0 = runtime default)");
    app.add_option("--seed", g.seed, "Seed for random sampling");
    app.add_option("--out-dir", g.out_dir, "Directory for reports");

    auto* sim = app.add_subcommand("simulate", "Run a transport simulation from a JSON config");
    std::string config;
    sim->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);

    auto* mk = app.add_subcommand("make-data", "Write initial data as grid JSON");
    std::string family = "gaussian_ring", composition = "mollify_then_cutoff", out;
    std::vector<std::string> params;
    double h = 0.05, eps = 0.0;
    mk->add_option("--family", family);
    mk->add_option("--param", params, "key=value, repeatable");
    mk->add_option("--h", h);
    mk->add_option("--eps", eps, "Mollify/cut at this eps (0 = raw data)");
    mk->add_option("--composition", composition);
    mk->add_option("--out", out);

    auto* kt = app.add_subcommand("kernel-table", "Angular kernel by both evaluation paths");
    double rx = 1, ry = 2, dz = 0, delta = 0, tol = 1e-12;
    kt->add_option("--r-x", rx)->required();
    kt->add_option("--r-y", ry)->required();
    kt->add_option("--dz", dz);
    kt->add_option("--delta", delta);
    kt->add_option("--tol", tol);

    auto* ver = app.add_subcommand("verify", "Estimate verification reports");
    std::string estimate;
    double p = 1.5, R = 1.0, h0 = 0.1;
    int levels = 3, samples = 100;
    ver->add_option("--estimate", estimate)->required();
    ver->add_option("--family", family);
    ver->add_option("--param", params);
    ver->add_option("--p", p);
    ver->add_option("--R", R);
    ver->add_option("--levels", levels);
    ver->add_option("--h0", h0, "Coarsest data spacing");
    ver->add_option("--samples", samples, "Sample points for pointwise_kernel");

    auto* wr = app.add_subcommand("weak-residual", "Weak-form residuals under (h, dt) refinement");
    WeakStudyConfig wcfg;
    wcfg.family = {Family::GaussianRing, {}};
    wr->add_option("--h", wcfg.h);
    wr->add_option("--dt", wcfg.dt);
    wr->add_option("--t-end", wcfg.t_end);
    wr->add_option("--levels", wcfg.levels);
    wr->add_option("--probe-h", wcfg.probe_h);

    auto* cv = app.add_subcommand("converge", "Epsilon-Cauchy study");
    std::vector<double> eps_list{0.4, 0.2, 0.1};
    double cdt = 0.02, ct = 0.5;
    int remesh_every = 0;
    std::string cfamily = "near_sheet";
    std::vector<std::string> cparams{"extent=4"};
    cv->add_option("--family", cfamily);
    cv->add_option("--param", cparams);
    cv->add_option("--eps", eps_list)->delimiter(',');
    cv->add_option("--h", h);
    cv->add_option("--dt", cdt);
    cv->add_option("--t-end", ct);
    cv->add_option("--remesh-every", remesh_every);

    CLI11_PARSE(app, argc, argv);
#ifdef _OPENMP
    if (g.threads > 0)
        omp_set_num_threads(g.threads);
#endif
    try {
        if (*sim)
            return cmd_simulate(g, config);
        if (*mk)
            return cmd_make_data(g, family, params, h, eps, composition, out);
        if (*kt)
            return cmd_kernel_table(rx, ry, dz, delta, tol);
        if (*ver)
            return cmd_verify(g, estimate, family, params, p, R, levels, h0, samples);
        if (*wr)
            return cmd_weak(g, wcfg);
        if (*cv)
            return cmd_converge(g, cfamily, cparams, eps_list, h, cdt, ct, remesh_every);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
