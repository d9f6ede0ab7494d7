#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"

using namespace bpdl;
using Catch::Matchers::WithinAbs;

namespace {

// On the symmetric two-site model the diagonal a(t) = nu_1(t) = nu_2(t)
// solves a' = a (1 - a), so a(t) = a0 e^t / (1 + a0 (e^t - 1)).
double logistic(double a0, double t) {
    const double g = std::exp(t);
    return a0 * g / (1.0 + a0 * (g - 1.0));
}

} // namespace

TEST_CASE("rk4 reproduces the logistic flow to quadrature accuracy", "[meanfield]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    const double T = 1.0986122886681098; // log 3: logistic carries 0.5 to 0.75

    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.5, 0.5}, T, opts);
    CHECK_THAT(traj.nu.back()[0], WithinAbs(0.75, 1e-10));
    CHECK_THAT(traj.nu.back()[1], WithinAbs(0.75, 1e-10));
    CHECK(traj.t.back() == T);

    for (std::size_t k = 0; k < traj.nodes(); k += 100)
        CHECK_THAT(traj.nu[k][0], WithinAbs(logistic(0.5, traj.t[k]), 1e-10));
}

TEST_CASE("picard iteration matches the closed form and rk4", "[meanfield]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();

    solver_options opts;
    opts.method = "picard";
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts);
    CHECK_THAT(traj.nu.back()[0], WithinAbs(logistic(0.5, 1.0), 1e-6));

    solver_options rk;
    rk.dt = 1e-3;
    const mf_trajectory ref = solve_mf(ts, kp, {0.5, 0.5}, 1.0, rk);
    double sup = 0.0;
    for (std::size_t k = 0; k < traj.nodes(); ++k)
        sup = std::max(sup, std::abs(traj.nu[k][0] - ref.nu[k][0]));
    CHECK(sup < 1e-6);
}

TEST_CASE("picard converges on long horizons too", "[meanfield]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.method = "picard";
    opts.dt = 2e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.1, 0.9}, 12.0, opts);
    // everything relaxes to the reference measure
    CHECK_THAT(traj.nu.back()[0], WithinAbs(1.0, 1e-4));
    CHECK_THAT(traj.nu.back()[1], WithinAbs(1.0, 1e-4));
}

TEST_CASE("the reference measure is a fixed point", "[meanfield]") {
    const trait_space ts = testbed::three_site_space();
    const kernel_pair kp = testbed::three_site_kernels();
    solver_options opts;
    opts.dt = 1e-2;
    const mf_trajectory traj = solve_mf(ts, kp, ts.gamma, 3.0, opts);
    for (const measure& nu : traj.nu)
        for (int i = 0; i < 3; ++i) CHECK_THAT(nu[i], WithinAbs(ts.gamma[i], 1e-12));
}

TEST_CASE("solutions stay nonnegative under coarse steps", "[meanfield]") {
    // start far above the carrying profile so the naive step would undershoot;
    // near the profile the relaxation rate is only ~0.2, hence the long horizon
    const trait_space ts = make_trait_space(2, {0.05, 0.05});
    const kernel_pair kp = make_kernel_pair({{0.0, 4.0}, {4.0, 0.0}});
    solver_options opts;
    opts.dt = 0.5;
    opts.tol = 1.0; // keep the monitor from bisecting; exercise the fallback
    const mf_trajectory traj = solve_mf(ts, kp, {3.0, 3.0}, 40.0, opts);
    for (const measure& nu : traj.nu)
        for (double x : nu) CHECK(x >= 0.0);
    CHECK_THAT(traj.nu.back()[0], WithinAbs(0.05, 1e-2));
}

TEST_CASE("fluxes along the curve are the one-way intensities", "[meanfield]") {
    const trait_space ts = testbed::three_site_space();
    const kernel_pair kp = testbed::three_site_kernels();
    solver_options opts;
    opts.dt = 1e-2;
    const mf_trajectory traj = solve_mf(ts, kp, {0.3, 0.2, 0.1}, 1.0, opts);
    for (std::size_t k = 0; k < traj.nodes(); k += 7) {
        const measure bp = birth_intensity(ts, kp, traj.nu[k]);
        const measure dm = death_intensity(kp, traj.nu[k]);
        for (int i = 0; i < 3; ++i) {
            CHECK(traj.lam_plus[k][i] == bp[i]);
            CHECK(traj.lam_minus[k][i] == dm[i]);
        }
    }
}

TEST_CASE("continuity residual is at quadrature level", "[meanfield]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts);
    CHECK(continuity_residual(traj) < opts.ce_tol);
}

TEST_CASE("solver rejects bad grids, methods, and exhausted bisection", "[meanfield]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;

    opts.dt = -1.0;
    CHECK_THROWS_AS(solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts), validation_error);
    opts.dt = 1e-3;
    CHECK_THROWS_AS(solve_mf(ts, kp, {0.5, 0.5}, -1.0, opts), validation_error);

    opts.method = "midpoint";
    CHECK_THROWS_AS(solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts), validation_error);

    // the step monitor gives up loudly once bisection passes its depth cap
    opts.method = "rk4";
    try {
        detail::rk4_advance(ts, kp, {0.5, 0.5}, 1e-3, 0.0, 41);
        FAIL("exhausted bisection depth must throw");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.code()) == "StepUnderflow");
    }
    // below one ulp the half-vs-full difference resolves to exactly zero, so
    // an absurdly small tolerance terminates instead of bisecting forever
    opts.tol = 1e-300;
    CHECK_NOTHROW(solve_mf(ts, kp, {0.5, 0.5}, 0.25, opts));

    opts.tol = 1e-7;
    opts.method = "picard";
    opts.picard_max_iters = 1;
    try {
        solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts);
        FAIL("one sweep cannot converge");
    } catch (const numeric_error& e) {
        CHECK(std::string(e.code()) == "NonConvergence");
    }
}

TEST_CASE("energy-dissipation balance vanishes along solutions", "[meanfield][edp]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.5, 0.5}, 1.0, opts);
    const mf_edp_report rep = edp_mf(ts, kp, traj);
    REQUIRE(rep.I.finite());
    CHECK(std::abs(rep.I.value()) < 1e-6);
    CHECK(rep.R_integral.value() >= 0.0);
    CHECK(rep.D_integral.value() >= 0.0);
    // free energy falls along the flow
    CHECK(rep.F_final.value() < rep.F_initial.value());
}

TEST_CASE("free energy chain rule holds along the flow", "[meanfield][edp]") {
    const trait_space ts = testbed::three_site_space();
    const kernel_pair kp = testbed::three_site_kernels();
    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.3, 0.6, 0.2}, 1.0, opts);
    CHECK(chain_rule_residual(ts, kp, traj) < 1e-5);
}

TEST_CASE("two-reference cost splits into rate, dissipation, and energy drift",
          "[meanfield][edp]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.4, 0.7}, 1.0, opts);
    const lagrangian_check_report rep = lagrangian_decomposition_check(ts, kp, traj);
    CHECK(rep.sym_gap < 1e-12);   // exact pointwise identity
    CHECK(rep.antisym_gap < 1e-4); // centered time differences
}

TEST_CASE("balance refuses an infinite initial energy", "[meanfield][edp]") {
    const trait_space ts = make_trait_space(2, {1.0, 0.0});
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.dt = 1e-2;
    opts.tol = 1.0;
    const mf_trajectory traj = solve_mf(ts, kp, {0.5, 0.5}, 0.1, opts);
    CHECK_THROWS_AS(edp_mf(ts, kp, traj), numeric_error);
}

TEST_CASE("scaling a flux off the solution path costs strictly positive balance",
          "[meanfield][edp]") {
    const trait_space ts = testbed::two_site_space();
    const kernel_pair kp = testbed::two_site_kernels();
    solver_options opts;
    opts.dt = 1e-3;
    const mf_trajectory traj = solve_mf(ts, kp, {0.9, 0.9}, 1.0, opts);
    mf_trajectory up = traj;
    for (measure& v : up.lam_plus)
        for (double& x : v) x *= 1.5;
    mf_trajectory dn = traj;
    for (measure& v : dn.lam_minus)
        for (double& x : v) x *= 1.5;
    CHECK(edp_mf(ts, kp, up).I.value() > 1e-3);
    CHECK(edp_mf(ts, kp, dn).I.value() > 1e-3);
}
