#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include <json.hpp>

#include "axisym/estimates.hpp"
#include "axisym/report.hpp"

using namespace axisym;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
};

Run cli(const std::string& args)
{
    std::string cmd = std::string(AXISYM_CLI_PATH) + " " + args + " 2>&1";
    std::FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    std::array<char, 4096> buf;
    while (std::fgets(buf.data(), buf.size(), p))
        out += buf.data();
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("axisym_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

json load(const fs::path& p)
{
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

}  // namespace

TEST_CASE("cli: kernel table prints both paths")
{
    Run r = cli("kernel-table --r-x 1 --r-y 2");
    CHECK(r.code == 0);
    CHECK(r.out.find("path,F,dF_dr,dF_dz") != std::string::npos);
    CHECK(r.out.find("elliptic,0.8731525818926") != std::string::npos);
    CHECK(r.out.find("quadrature,0.87315258189") != std::string::npos);
}

TEST_CASE("cli: usage errors")
{
    CHECK(cli("").code != 0);
    CHECK(cli("frobnicate").code != 0);
    Run r = cli("make-data --family vortex_sheet");
    CHECK(r.code == 2);
    CHECK(r.out.find("error: unknown data family: vortex_sheet") != std::string::npos);
    Run s = cli("make-data --family near_sheet --param a=2");
    CHECK(s.code == 2);
    CHECK(s.out.find("L^1") != std::string::npos);
    CHECK(cli("verify --estimate energy").code == 2);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("cli: make-data writes a readable grid")
{
    fs::path d = scratch("make");
    fs::path out = d / "ring.json";
    Run r = cli("make-data --family gaussian_ring --h 0.1 --param sigma=0.3 --out " + out.string());
    CHECK(r.code == 0);
    GridField g = read_grid_json(out.string());
    DataFamily fam{Family::GaussianRing, {{"sigma", 0.3}}};
    GridField ref = make_initial(fam, default_grid(fam, 0.1));
    CHECK(g.q == ref.q);

    fs::path mol = d / "mollified.json";
    CHECK(cli("make-data --family gaussian_ring --h 0.1 --eps 0.4 --out " + mol.string()).code == 0);
    GridField m = read_grid_json(mol.string());
    CHECK(m.q != ref.q);
    fs::remove_all(d);
}

TEST_CASE("cli: simulate writes a manifest and monitors")
{
    fs::path d = scratch("sim");
    fs::path cfg = d / "run.json";
    std::ofstream(cfg) << R"({"family": "gaussian_ring", "h": 0.1, "dt": 0.05, "t_end": 0.2,
                              "monitor_norms": [{"p": 2}, {"p": 1, "region": {"type": "cylinder", "R": 1.5}}]})";
    Run r = cli("--out-dir " + d.string() + " simulate --config " + cfg.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("simulate: pass") != std::string::npos);
    json man = load(d / "manifest.json");
    CHECK(man.at("schema") == kReportSchema);
    CHECK(man.at("kind") == "manifest");
    CHECK(man.at("data").at("steps") == 4);
    CHECK(man.at("data").at("pass") == true);
    json mon = load(d / "monitors.json");
    CHECK(mon.at("schema") == "axisym-report/1");
    ParticleField fin = read_particles_csv((d / "final.csv").string());
    CHECK(fin.particles.size() > 0);

    // restart from the particle file with remeshing
    fs::path cfg2 = d / "restart.json";
    std::ofstream(cfg2) << R"({"input": ")" << (d / "final.csv").string()
                        << R"(", "dt": 0.05, "t_end": 0.1, "remesh_every": 1, "remesh_floor": 1e-14})";
    fs::path d2 = d / "restart";
    // coarse steps: remeshing keeps L1 but damps L2 past the budget, which the run reports
    Run r2 = cli("--out-dir " + d2.string() + " simulate --config " + cfg2.string());
    CHECK(r2.code == 1);
    json m2 = load(d2 / "manifest.json").at("data");
    CHECK(m2.at("remesh_events") == 2);
    CHECK(m2.at("conservation")[0].at("pass") == true);
    CHECK(m2.at("conservation")[1].at("pass") == false);

    CHECK(cli("simulate --config " + (d / "missing.json").string()).code != 0);
    fs::remove_all(d);
}

TEST_CASE("cli: verify writes one report per ladder level")
{
    fs::path d = scratch("verify");
    Run r = cli("--out-dir " + d.string() + " verify --estimate velocity_lp --levels 2 --h0 0.1");
    CHECK(r.code == 0);
    CHECK(r.out.find("verify velocity_lp: pass") != std::string::npos);
    for (int l = 0; l < 2; ++l) {
        json j = load(d / ("velocity_lp_gaussian_ring_L" + std::to_string(l) + ".json"));
        CHECK(j.at("schema") == kReportSchema);
        CHECK(j.at("data").at("estimate_id") == "velocity_lp");
        CHECK(j.at("data").at("refinement_level") == l);
    }
    CHECK(fs::exists(d / "velocity_lp_gaussian_ring.csv"));

    Run pk = cli("--out-dir " + d.string() + " --seed 7 verify --estimate pointwise_kernel --samples 5");
    CHECK(pk.code == 0);
    json j = load(d / "pointwise_kernel_gaussian_ring_L0.json");
    CHECK(j.at("data").at("extra").at("samples") == 5);
    fs::remove_all(d);
}

TEST_CASE("cli: weak residual and epsilon study")
{
    fs::path d = scratch("weak");
    Run w = cli("--out-dir " + d.string() + " weak-residual --h 0.2 --dt 0.1 --probe-h 0.05 --levels 1");
    CHECK(w.code == 0);
    json j = load(d / "weak_residual.json");
    CHECK(j.at("kind") == "weak_residual");
    CHECK(j.at("data").at("levels").size() == 1);

    Run c = cli("--out-dir " + d.string() +
                " converge --param extent=2 --h 0.1 --eps 0.8,0.4,0.2 --dt 0.05 --t-end 0.1");
    CHECK((c.code == 0 || c.code == 1));
    json e = load(d / "converge.json");
    CHECK(e.at("kind") == "epsilon_study");
    CHECK(e.at("data").at("eps").size() == 3);
    fs::remove_all(d);
}

TEST_CASE("report serialisation")
{
    EstimateReport r;
    r.estimate_id = "key_estimate";
    r.lhs = 0.25;
    r.rhs_norm = kInf;
    r.region = {2.0, CylinderRegion{1.0, 0.5}};
    json j = to_json(r);
    CHECK(j.at("rhs_norm") == "inf");
    CHECK(j.at("lhs") == 0.25);
    json env = envelope("estimate", j);
    CHECK(env.at("schema") == "axisym-report/1");
    CHECK(env.at("data").at("estimate_id") == "key_estimate");
    std::string csv = estimates_csv({r});
    CHECK(csv.find("key_estimate") != std::string::npos);
}
