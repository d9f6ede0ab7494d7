#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/ext_real.hpp"
#include "bpdl/functionals.hpp"

namespace bpdl {

struct solver_options {
    std::string method = "rk4"; // "rk4" or "picard"
    double dt = 1e-3;           // output grid spacing
    double tol = 1e-7;          // local error target for the rk4 step monitor
    int picard_max_iters = 200;
    double picard_tol = 1e-12; // sup-norm fixed-point tolerance
    double ce_tol = 1e-5;      // discrete continuity-residual budget, per unit time
};

/** A solved curve t -> nu_t on a uniform grid, together with the one-way
 *  fluxes lambda^+/- = kappa^+/-[nu_t] evaluated at the nodes. */
struct mf_trajectory {
    std::vector<double> t;
    std::vector<measure> nu;
    std::vector<measure> lam_plus;
    std::vector<measure> lam_minus;

    std::size_t nodes() const { return t.size(); }
};

namespace detail {

inline measure mf_vector_field(const trait_space& ts, const kernel_pair& kp, const measure& nu) {
    const measure field = competition_field(kp, nu);
    measure f(ts.K);
    for (int i = 0; i < ts.K; ++i) f[i] = field[i] * (ts.gamma[i] - nu[i]);
    return f;
}

/** One classic 4th-order step. If it would leave the nonnegative cone, fall
 *  back to the integrating-factor step with the competition field frozen at
 *  the step start: nu' = gamma + (nu - gamma) e^{-c_nu h}, which is exact for
 *  frozen pressure and preserves positivity unconditionally. */
inline measure rk4_step(const trait_space& ts, const kernel_pair& kp, const measure& nu, double h) {
    const int K = ts.K;
    const measure k1 = mf_vector_field(ts, kp, nu);
    measure tmp(K);
    for (int i = 0; i < K; ++i) tmp[i] = nu[i] + 0.5 * h * k1[i];
    const measure k2 = mf_vector_field(ts, kp, tmp);
    for (int i = 0; i < K; ++i) tmp[i] = nu[i] + 0.5 * h * k2[i];
    const measure k3 = mf_vector_field(ts, kp, tmp);
    for (int i = 0; i < K; ++i) tmp[i] = nu[i] + h * k3[i];
    const measure k4 = mf_vector_field(ts, kp, tmp);

    measure out(K);
    bool negative = false;
    for (int i = 0; i < K; ++i) {
        out[i] = nu[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if (out[i] < 0.0) negative = true;
    }
    if (negative) {
        const measure field = competition_field(kp, nu);
        for (int i = 0; i < K; ++i) {
            const double decay = std::exp(-field[i] * h);
            out[i] = ts.gamma[i] + (nu[i] - ts.gamma[i]) * decay;
            if (out[i] < 0.0) out[i] = 0.0; // gamma_i = 0 and roundoff
        }
    }
    return out;
}

/** Advance by h with a step-doubling error monitor: the h-step is compared
 *  against two h/2-steps; if the estimated local error exceeds tol the
 *  interval is bisected. Repeated bisection past depth 40 means the target
 *  cannot be met at this arithmetic and is reported as step underflow. */
inline measure rk4_advance(const trait_space& ts, const kernel_pair& kp, measure nu, double h,
                           double tol, int depth) {
    if (depth > 40)
        throw numeric_error("StepUnderflow",
                            "rk4 bisection passed depth 40 without meeting tol=" +
                                std::to_string(tol));
    const measure full = rk4_step(ts, kp, nu, h);
    measure half = rk4_step(ts, kp, nu, 0.5 * h);
    half = rk4_step(ts, kp, half, 0.5 * h);
    double err = 0.0;
    for (std::size_t i = 0; i < half.size(); ++i) err += std::abs(half[i] - full[i]);
    err /= 15.0; // one order-4 Richardson factor
    if (err <= tol) return half;
    nu = rk4_advance(ts, kp, std::move(nu), 0.5 * h, tol, depth + 1);
    return rk4_advance(ts, kp, std::move(nu), 0.5 * h, tol, depth + 1);
}

inline std::vector<double> make_grid(double T, double dt) {
    if (!(T >= 0.0) || std::isinf(T)) throw validation_error("BadHorizon", "T must be finite, >= 0");
    if (!(dt > 0.0)) throw validation_error("BadStep", "dt must be > 0");
    std::vector<double> t;
    t.push_back(0.0);
    if (T == 0.0) return t;
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-12));
    for (std::size_t k = 1; k <= steps; ++k) t.push_back(std::min(static_cast<double>(k) * dt, T));
    t.back() = T;
    return t;
}

inline void check_finite_state(const measure& nu) {
    for (double v : nu)
        if (std::isnan(v) || std::isinf(v))
            throw numeric_error("NonFiniteState", "solver state left the finite range");
}

} // namespace detail

/** Solves d/dt nu = kappa^+[nu] - kappa^-[nu] = c_nu (gamma - nu) on [0, T].
 *
 *  method "rk4": one-step integrator on the output grid with a halving-based
 *  local error monitor. method "picard": fixed-point iteration on the
 *  integral form with exponential integrating factor,
 *      nu_t = e^{-int_0^t c_nu} nu_0 + int_0^t c_nu gamma e^{-int_s^t c_nu} ds,
 *  iterated on the whole curve until the sup-norm update is below
 *  picard_tol. The two methods are independent of each other and serve as
 *  mutual cross-checks.
 */
inline mf_trajectory solve_mf(const trait_space& ts, const kernel_pair& kp, const measure& nu0,
                              double T, const solver_options& opts = {}) {
    validate_model(ts, kp);
    check_measure(ts, nu0, "nu0");

    mf_trajectory traj;
    traj.t = detail::make_grid(T, opts.dt);
    const std::size_t n = traj.t.size();
    traj.nu.resize(n);
    traj.nu[0] = nu0;

    if (opts.method == "rk4") {
        for (std::size_t k = 1; k < n; ++k) {
            const double h = traj.t[k] - traj.t[k - 1];
            traj.nu[k] = detail::rk4_advance(ts, kp, traj.nu[k - 1], h, opts.tol, 0);
            detail::check_finite_state(traj.nu[k]);
        }
    } else if (opts.method == "picard") {
        std::vector<measure> cur(n, nu0);
        std::vector<measure> next(n, measure(ts.K, 0.0));
        bool converged = (n == 1);
        for (int it = 0; it < opts.picard_max_iters && !converged; ++it) {
            std::vector<measure> field(n);
            for (std::size_t k = 0; k < n; ++k) field[k] = competition_field(kp, cur[k]);
            next[0] = nu0;
            for (std::size_t k = 1; k < n; ++k) {
                const double h = traj.t[k] - traj.t[k - 1];
                for (int i = 0; i < ts.K; ++i) {
                    const double da = 0.5 * h * (field[k - 1][i] + field[k][i]);
                    const double decay = std::exp(-da);
                    const double drive = 0.5 * h *
                                         (ts.gamma[i] * field[k - 1][i] * decay +
                                          ts.gamma[i] * field[k][i]);
                    next[k][i] = decay * next[k - 1][i] + drive;
                }
                detail::check_finite_state(next[k]);
            }
            double delta = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                double d = 0.0;
                for (int i = 0; i < ts.K; ++i) d += std::abs(next[k][i] - cur[k][i]);
                delta = std::max(delta, d);
            }
            cur.swap(next);
            converged = delta <= opts.picard_tol;
        }
        if (!converged)
            throw numeric_error("NonConvergence",
                                "picard iteration did not reach picard_tol within " +
                                    std::to_string(opts.picard_max_iters) + " sweeps");
        traj.nu = std::move(cur);
    } else {
        throw validation_error("UnknownMethod", "solver method must be rk4 or picard, got " +
                                                    opts.method);
    }

    traj.lam_plus.resize(n);
    traj.lam_minus.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        traj.lam_plus[k] = birth_intensity(ts, kp, traj.nu[k]);
        traj.lam_minus[k] = death_intensity(kp, traj.nu[k]);
    }
    return traj;
}

/** Max over steps of ||nu_{k+1} - nu_k - (dt/2)(net_k + net_{k+1})||_TV / dt,
 *  the discrete continuity-equation residual with net = lam+ - lam-. */
inline double continuity_residual(const mf_trajectory& traj) {
    double worst = 0.0;
    for (std::size_t k = 0; k + 1 < traj.nodes(); ++k) {
        const double h = traj.t[k + 1] - traj.t[k];
        double r = 0.0;
        for (std::size_t i = 0; i < traj.nu[k].size(); ++i) {
            const double net0 = traj.lam_plus[k][i] - traj.lam_minus[k][i];
            const double net1 = traj.lam_plus[k + 1][i] - traj.lam_minus[k + 1][i];
            r += std::abs(traj.nu[k + 1][i] - traj.nu[k][i] - 0.5 * h * (net0 + net1));
        }
        worst = std::max(worst, r / h);
    }
    return worst;
}

struct mf_edp_report {
    ext_real R_integral;
    ext_real F_initial;
    ext_real F_final;
    ext_real D_integral;
    ext_real I; // R_integral + F_final - F_initial + D_integral
};

/** Energy-dissipation functional of a curve with fluxes:
 *  I = int R dt + F(nu_T) - F(nu_0) + int D dt, trapezoid quadrature on the
 *  trajectory grid. I >= 0 for every admissible triple, and I = 0 exactly
 *  at solutions of the evolution equation (up to quadrature error here). */
inline mf_edp_report edp_mf(const trait_space& ts, const kernel_pair& kp,
                            const mf_trajectory& traj) {
    if (traj.nodes() == 0) throw validation_error("EmptyTrajectory", "edp_mf needs nodes");
    mf_edp_report rep;
    rep.F_initial = free_energy_mf(ts, traj.nu.front());
    if (!rep.F_initial.finite())
        throw numeric_error("InfiniteInitialEnergy", "F(nu_0) = +inf; the balance is vacuous");
    rep.F_final = free_energy_mf(ts, traj.nu.back());

    std::vector<ext_real> R(traj.nodes()), D(traj.nodes());
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        R[k] = rate_functional_mf(ts, kp, traj.nu[k], traj.lam_plus[k], traj.lam_minus[k]);
        D[k] = dissipation_mf(ts, kp, traj.nu[k]);
    }
    rep.R_integral = detail::trapezoid_ext(traj.t, R);
    rep.D_integral = detail::trapezoid_ext(traj.t, D);

    ext_real I = rep.R_integral + rep.D_integral;
    if (!I.finite() || !rep.F_final.finite()) {
        rep.I = ext_real::infinity();
    } else {
        rep.I = ext_real(I.value() + rep.F_final.value() - rep.F_initial.value());
    }
    return rep;
}

/** Max over interior nodes of
 *  | (F(nu_{k+1}) - F(nu_{k-1})) / (t_{k+1} - t_{k-1})
 *    - 1/2 sum_i log(u_i) (lam+ - lam-)_i |,
 *  the chain rule for F along the curve, centered differences in time.
 *  Sites where the density vanishes must carry zero net flux. */
inline double chain_rule_residual(const trait_space& ts, const kernel_pair&,
                                  const mf_trajectory& traj) {
    if (traj.nodes() < 3)
        throw validation_error("EmptyTrajectory", "chain_rule_residual needs >= 3 nodes");
    std::vector<double> F(traj.nodes());
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        const ext_real f = free_energy_mf(ts, traj.nu[k]);
        if (!f.finite())
            throw numeric_error("InfiniteInitialEnergy", "F(nu_t) = +inf along the curve");
        F[k] = f.value();
    }
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < traj.nodes(); ++k) {
        const double dF = (F[k + 1] - F[k - 1]) / (traj.t[k + 1] - traj.t[k - 1]);
        double rhs = 0.0;
        for (int i = 0; i < ts.K; ++i) {
            const double net = traj.lam_plus[k][i] - traj.lam_minus[k][i];
            const double g = ts.gamma[i];
            const double u = g > 0.0 ? traj.nu[k][i] / g : 0.0;
            if (u <= 0.0) {
                if (net != 0.0)
                    throw numeric_error("DensityZeroOnFluxSupport",
                                        "net flux charges a site with vanishing density at node " +
                                            std::to_string(k));
                continue;
            }
            rhs += 0.5 * std::log(u) * net;
        }
        worst = std::max(worst, std::abs(dF - rhs));
    }
    return worst;
}

struct lagrangian_check_report {
    double sym_gap = 0.0;     // max node gap of 1/2(L + L-swapped) vs R + D
    double antisym_gap = 0.0; // max interior gap of 1/2(L - L-swapped) vs 1/2 d/dt Ent(nu|gamma)
};

/** Checks the exact pointwise decomposition of the Lagrangian into its
 *  symmetric part R + D and its antisymmetric part, which along any curve is
 *  the time derivative of the free energy. The antisymmetric comparison uses
 *  centered differences, so its gap carries O(dt^2) discretization error. */
inline lagrangian_check_report lagrangian_decomposition_check(const trait_space& ts,
                                                              const kernel_pair& kp,
                                                              const mf_trajectory& traj) {
    lagrangian_check_report rep;
    std::vector<double> half_diff(traj.nodes(), 0.0);
    std::vector<double> ent(traj.nodes(), 0.0);
    for (std::size_t k = 0; k < traj.nodes(); ++k) {
        const ext_real L = lagrangian_mf(ts, kp, traj.nu[k], traj.lam_plus[k], traj.lam_minus[k]);
        const ext_real Lsw = lagrangian_mf(ts, kp, traj.nu[k], traj.lam_minus[k], traj.lam_plus[k]);
        const ext_real R =
            rate_functional_mf(ts, kp, traj.nu[k], traj.lam_plus[k], traj.lam_minus[k]);
        const ext_real D = dissipation_mf(ts, kp, traj.nu[k]);
        const ext_real E = relative_entropy(traj.nu[k], ts.gamma);
        if (!L.finite() || !Lsw.finite() || !R.finite() || !D.finite() || !E.finite())
            throw numeric_error("InfiniteFunctional",
                                "lagrangian decomposition needs finite parts at node " +
                                    std::to_string(k));
        const double sym = 0.5 * (L.value() + Lsw.value());
        rep.sym_gap = std::max(rep.sym_gap, std::abs(sym - R.value() - D.value()));
        half_diff[k] = 0.5 * (L.value() - Lsw.value());
        ent[k] = E.value();
    }
    for (std::size_t k = 1; k + 1 < traj.nodes(); ++k) {
        const double dent = (ent[k + 1] - ent[k - 1]) / (traj.t[k + 1] - traj.t[k - 1]);
        rep.antisym_gap = std::max(rep.antisym_gap, std::abs(half_diff[k] - 0.5 * dent));
    }
    return rep;
}

} // namespace bpdl
