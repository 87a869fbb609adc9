#include <doctest.h>

#include <cmath>

#include "axisym/estimates.hpp"

using namespace axisym;

namespace {

GridField ring(double h, std::map<std::string, double> params = {})
{
    DataFamily fam{Family::GaussianRing, std::move(params)};
    return make_initial(fam, default_grid(fam, h));
}

GridField scaled(GridField f, double c)
{
    for (auto& q : f.q)
        q *= c;
    return f;
}

}  // namespace

TEST_CASE("zero data gives zero reports")
{
    GridField z = scaled(ring(0.1), 0.0);
    EstimateConfig cfg;
    for (const char* id : {"velocity_lp", "gradient_lp", "tilde_u_halfplane", "high_integrability", "ur_over_r"}) {
        EstimateReport r = run_estimate(id, z, 1.5, 1.0, 0.0, cfg);
        CHECK(r.estimate_id == id);
        CHECK(r.lhs == 0.0);
        CHECK(r.empirical_C == 0.0);
    }
    EstimateReport pk = verify_pointwise_kernel_bound(z, {{1.0, 0.5}}, cfg);
    CHECK(pk.empirical_C == 0.0);
    for (double r : energy_growth(z, {1.0, 2.0}, 0.0, cfg))
        CHECK(r == 0.0);
    CHECK(driver_norm(z, 1.5) == 0.0);
}

TEST_CASE("estimate constants are invariant under scaling of q")
{
    GridField f = ring(0.1);
    GridField g = scaled(f, -3.0);
    EstimateConfig cfg;
    for (const char* id : {"velocity_lp", "gradient_lp", "tilde_u_halfplane", "high_integrability", "ur_over_r"}) {
        EstimateReport a = run_estimate(id, f, 1.5, 1.0, 0.0, cfg);
        EstimateReport b = run_estimate(id, g, 1.5, 1.0, 0.0, cfg);
        CHECK(a.empirical_C > 0.0);
        CHECK(b.lhs == doctest::Approx(3.0 * a.lhs).epsilon(1e-12));
        CHECK(b.empirical_C == doctest::Approx(a.empirical_C).epsilon(1e-12));
    }
    auto pts = kernel_bound_samples(f, 10, 99, 0.25, 3.0, -2.0, 2.0, 0.1);
    CHECK(verify_pointwise_kernel_bound(g, pts, cfg).empirical_C ==
          doctest::Approx(verify_pointwise_kernel_bound(f, pts, cfg).empirical_C).epsilon(1e-10));
}

TEST_CASE("local norms grow with the region")
{
    GridField f = ring(0.1);
    EstimateConfig cfg;
    double prev = 0;
    for (double R : {0.5, 1.0, 1.5, 2.0}) {
        EstimateReport r = verify_velocity_lp_estimate(f, 2.0, {R, 0.0}, cfg);
        CHECK(r.lhs > prev);
        CHECK(r.rhs_norm == doctest::Approx(driver_norm(f, 2.0)));
        prev = r.lhs;
    }
    auto e = energy_growth(f, {0.5, 1.0, 2.0, 4.0}, 0.0, cfg);
    for (std::size_t k = 1; k < e.size(); ++k)
        CHECK(e[k] > e[k - 1]);
}

TEST_CASE("estimates commute with z translation")
{
    EstimateConfig cfg;
    GridField a = ring(0.1), b = ring(0.1, {{"z_c", 0.5}});
    for (const char* id : {"velocity_lp", "gradient_lp", "high_integrability"}) {
        EstimateReport ra = run_estimate(id, a, 1.5, 1.0, 0.0, cfg);
        EstimateReport rb = run_estimate(id, b, 1.5, 1.0, 0.5, cfg);
        CHECK(rb.lhs == doctest::Approx(ra.lhs).epsilon(1e-10));
        CHECK(rb.empirical_C == doctest::Approx(ra.empirical_C).epsilon(1e-10));
    }
    EstimateReport ua = verify_ur_over_r(a, 1.5, cfg), ub = verify_ur_over_r(b, 1.5, cfg);
    CHECK(ub.lhs == doctest::Approx(ua.lhs).epsilon(1e-3));
}

TEST_CASE("exponent bookkeeping and p ranges")
{
    GridField f = ring(0.1);
    EstimateConfig cfg;
    EstimateReport hi = verify_high_integrability(f, 4.0 / 3.0, {1.0, 0.0}, cfg);
    CHECK(hi.extra.at("exponent") == doctest::Approx(4.0));
    CHECK(hi.extra.at("alpha") == doctest::Approx(2.0));
    CHECK(hi.region.p == doctest::Approx(4.0));
    EstimateReport ur = verify_ur_over_r(f, 2.0, cfg);
    CHECK(ur.extra.at("exponent") == doctest::Approx(6.0));
    CHECK(ur.extra.at("tail_fraction") < 1e-2);

    CHECK_THROWS_AS(verify_high_integrability(f, 2.0, {1.0, 0.0}, cfg), Error);
    CHECK_THROWS_AS(verify_high_integrability(f, 1.0, {1.0, 0.0}, cfg), Error);
    CHECK_THROWS_WITH_AS(verify_ur_over_r(f, 3.0, cfg), "ur_over_r: p = 3 outside (1, 3)", Error);
    CHECK_THROWS_WITH_AS(verify_velocity_lp_estimate(f, 1.0, {1.0, 0.0}, cfg), "velocity_lp: p must exceed 1", Error);
    CHECK_THROWS_AS(verify_gradient_lp_estimate(f, 0.5, {1.0, 0.0}, cfg), Error);
    CHECK_THROWS_AS(run_estimate("energy", f, 1.5, 1.0, 0.0, cfg), Error);
    CHECK(known_estimate("velocity_lp"));
    CHECK_FALSE(known_estimate("energy"));
}

TEST_CASE("gradient estimate reports the lemma ratio")
{
    EstimateReport r = verify_gradient_lp_estimate(ring(0.1), 1.5, {1.0, 0.0}, EstimateConfig{});
    CHECK(r.extra.at("lemma_lhs") > 0.0);
    CHECK(r.extra.at("lemma_C") == doctest::Approx(r.extra.at("lemma_lhs") / r.extra.at("lemma_rhs")));
    CHECK(r.extra.at("tail_fraction") < 1e-2);
}

TEST_CASE("driver norm is the larger of L1 and Lp")
{
    GridField f = ring(0.1);
    double l1 = lp_norm(f, {1.0, WholeSpace{}}), l2 = lp_norm(f, {2.0, WholeSpace{}});
    CHECK(driver_norm(f, 2.0) == std::max(l1, l2));
    GridField g = scaled(f, 10.0);
    CHECK(driver_norm(g, 2.0) == doctest::Approx(10.0 * std::max(l1, l2)));
    CHECK(data_spacing(f) == 0.1);
    CHECK(data_spacing(to_particles(f)) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("pointwise bound ratios blow up near the axis")
{
    GridField f = ring(0.1);
    EstimateConfig cfg;
    double prev = 0;
    for (double r : {0.2, 0.05, 0.01}) {
        EstimateReport rep = verify_pointwise_kernel_bound(f, {{r, 0.0}}, cfg);
        CHECK(rep.extra.at("C_grad") > 2.0 * prev);
        prev = rep.extra.at("C_grad");
    }
    CHECK(prev > 1.0);
    CHECK_THROWS_WITH_AS(verify_pointwise_kernel_bound(f, {{0.0, 0.0}}, cfg),
                         "pointwise bounds need samples off the axis", Error);
}

TEST_CASE("pointwise bound samples keep away from particles")
{
    GridField f = ring(0.1);
    ParticleField pf = to_particles(f);
    auto pts = kernel_bound_samples(f, 50, 5, 0.25, 3.0, -2.0, 2.0, 0.1);
    REQUIRE(pts.size() == 50);
    for (auto& x : pts) {
        CHECK(x.r >= 0.25);
        CHECK(x.r <= 3.0);
        for (auto& p : pf.particles)
            CHECK(std::hypot(x.r - p.pos.r, x.z - p.pos.z) > 0.1);
    }
    CHECK(kernel_bound_samples(f, 50, 5, 0.25, 3.0, -2.0, 2.0, 0.1)[7].r == pts[7].r);
    CHECK_THROWS_AS(kernel_bound_samples(f, 5, 1, 1.0, 0.5, -1.0, 1.0, 0.1), Error);
    CHECK_THROWS_AS(kernel_bound_samples(f, 5, 1, 0.5, 1.5, -0.5, 0.5, 10.0), Error);
}

TEST_CASE("majorants dominate the potential")
{
    GridField f = ring(0.1);
    ParticleField pf = to_particles(f);
    // inside the data support as well as around it
    auto pts = kernel_bound_samples(f, 40, 3, 0.25, 3.0, -2.0, 2.0, 0.025);
    int inside = 0;
    for (auto& x : pts)
        inside += x.r < 2.0 && std::abs(x.z) < 1.0;
    CHECK(inside > 5);
    EstimateReport rep = verify_pointwise_kernel_bound(f, pts, EstimateConfig{});
    for (const char* k : {"C_psi", "C_grad", "C_psi_over_r", "C_grad_over_r"}) {
        CHECK(rep.extra.at(k) > 0.0);
        CHECK(rep.extra.at(k) < 1.0);
    }
    CHECK(within_ceilings(rep));
    PointwiseCeilings tight;
    tight.grad = 1e-3;
    CHECK_FALSE(within_ceilings(rep, tight));
    Majorants m = kernel_majorants(pf, pts[0], 1e-9);
    CHECK(m.psi > 0.0);
    CHECK_THROWS_AS(kernel_majorants(pf, pf.particles[0].pos, 1e-9), Error);
}

TEST_CASE("conservation report")
{
    TrajectoryRecord rec;
    GridField z = scaled(ring(0.1), 0.0);
    rec.times = {0.0, 0.1};
    rec.snapshots = {to_particles(z, true), to_particles(z, true)};
    EstimateReport r = verify_conservation(rec, 2.0);
    CHECK(r.empirical_C == 1.0);
    CHECK(r.extra.at("max_drift") == 0.0);

    SimConfig sim;
    sim.kernel.blob_delta = 0.1;
    sim.dt = 0.05;
    sim.t_end = 0.1;
    TrajectoryRecord run = simulate(ring(0.1), sim);
    EstimateReport c = verify_conservation(run, 1.5);
    CHECK(c.empirical_C == 1.0);
    CHECK(c.extra.at("max_drift") == 0.0);
    CHECK_THROWS_AS(verify_conservation(TrajectoryRecord{}, 2.0), Error);
}

TEST_CASE("key estimate")
{
    SimConfig sim;
    sim.kernel.blob_delta = 0.1;
    sim.dt = 0.05;
    sim.t_end = 0.1;
    TrajectoryRecord run = simulate(ring(0.1), sim);
    EstimateReport k = key_estimate_diagnostic(run, EstimateConfig{});
    CHECK(k.lhs > 0.0);
    CHECK(std::isfinite(k.rhs_norm));
    CHECK(k.extra.at("rhs_infinite") == 0.0);
    CHECK(k.empirical_C == doctest::Approx(k.lhs / k.rhs_norm));

    DataFamily sheet{Family::NearSheet, {{"extent", 4.0}}};
    CHECK_FALSE(finite_energy(sheet));
    CHECK(finite_energy(DataFamily{Family::NearSheet, {{"a", 2.6}}}));
    TrajectoryRecord srun = simulate(make_initial(sheet, default_grid(sheet, 0.2)), sim);
    EstimateReport ks = key_estimate_diagnostic(srun, EstimateConfig{}, finite_energy(sheet));
    CHECK(ks.rhs_norm == kInf);
    CHECK(ks.empirical_C == 0.0);
    CHECK(ks.lhs > 0.0);
}

TEST_CASE("ladders")
{
    LadderSpec spec;
    spec.estimate_id = "velocity_lp";
    spec.family = DataFamily{Family::GaussianRing, {}};
    spec.levels = 2;
    spec.h0 = 0.1;
    auto L = run_ladder(spec);
    REQUIRE(L.size() == 2);
    CHECK(L[0].extra.at("h") == 0.1);
    CHECK(L[1].extra.at("h") == 0.05);
    CHECK(L[1].refinement_level == 1);
    CHECK(L[1].data_label == "gaussian_ring");
    double v = ladder_variation(L);
    CHECK(v == doctest::Approx(std::abs(L[1].empirical_C - L[0].empirical_C) / L[0].empirical_C));
    CHECK(v < 0.1);
    CHECK_THROWS_WITH_AS(ladder_variation(L, "lemma_C"), "report has no value 'lemma_C'", Error);
    CHECK_THROWS_AS(ladder_variation({L[0]}), Error);
    spec.levels = 0;
    CHECK_THROWS_AS(run_ladder(spec), Error);
}
