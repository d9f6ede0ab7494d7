#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/ext_real.hpp"
#include "bpdl/fke.hpp"
#include "bpdl/functionals.hpp"
#include "bpdl/meanfield.hpp"
#include "bpdl/particles.hpp"
#include "bpdl/rng.hpp"

namespace bpdl {

/** Limit generating functional G(f) = sum_i (e^{f_i} - 1) gamma_i. */
inline double G_limit(const trait_space& ts, const std::vector<double>& f) {
    if (static_cast<int>(f.size()) != ts.K)
        throw validation_error("DimensionMismatch", "f size != K");
    double acc = 0.0;
    for (int i = 0; i < ts.K; ++i) acc += std::expm1(f[i]) * ts.gamma[i];
    return acc;
}

/** Finite-n generating functional
 *  G_n(f) = (1/n) log( (e^{n int e^f dgamma} - 1) / (e^{n gamma(T)} - 1) ),
 *  evaluated with log(e^a - 1) = a + log1p(-e^{-a}) so large n never
 *  overflows. Decreases to G(f) pointwise as n grows. */
inline double G_n(const trait_space& ts, const std::vector<double>& f, double n) {
    if (static_cast<int>(f.size()) != ts.K)
        throw validation_error("DimensionMismatch", "f size != K");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    double a = 0.0;
    for (int i = 0; i < ts.K; ++i) a += std::exp(f[i]) * ts.gamma[i];
    const double b = ts.gamma_total();
    if (!(a > 0.0) || !(b > 0.0))
        throw validation_error("ZeroMass", "G_n needs gamma with positive mass");
    const double log_num = n * a + std::log1p(-std::exp(-n * a));
    const double log_den = n * b + std::log1p(-std::exp(-n * b));
    return (log_num - log_den) / n;
}

/** G_n(f) - G(f), evaluated without subtracting nearly equal numbers:
 *  the difference equals (log1p(-e^{-n a}) - log1p(-e^{-n b})) / n with
 *  a = int e^f dgamma, b = gamma(T), so it stays exact down to the
 *  subnormal range and its magnitude is strictly decreasing in n. */
inline double G_n_gap(const trait_space& ts, const std::vector<double>& f, double n) {
    if (static_cast<int>(f.size()) != ts.K)
        throw validation_error("DimensionMismatch", "f size != K");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    double a = 0.0;
    for (int i = 0; i < ts.K; ++i) a += std::exp(f[i]) * ts.gamma[i];
    const double b = ts.gamma_total();
    if (!(a > 0.0) || !(b > 0.0))
        throw validation_error("ZeroMass", "G_n_gap needs gamma with positive mass");
    return (std::log1p(-std::exp(-n * a)) - std::log1p(-std::exp(-n * b))) / n;
}

struct recovery_entropy_report {
    double closed = 0.0;
    double direct = 0.0;
    int N_max_used = 0;
};

/** Relative entropy of the tilted Poissonized measure against the invariant
 *  one, Ent(Pi_{n,nu} | Pi_n), both ways: the closed form
 *    n e^{n nu(T)} / (e^{n nu(T)} - 1) * int log(dnu/dgamma) dnu
 *      + log( (e^{n gamma(T)} - 1) / (e^{n nu(T)} - 1) ),
 *  and an independent direct sum over configurations, truncated where a
 *  computable majorant of the dropped tail falls below tail_tol. Dividing
 *  by n recovers Ent(nu | gamma) in the limit. */
inline recovery_entropy_report recovery_entropy(const trait_space& ts, const measure& nu_bar,
                                                double n, double tail_tol = 1e-10,
                                                double state_cap = 2e6) {
    check_measure(ts, nu_bar, "nu_bar");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    const double m = mass(nu_bar);
    const double g = ts.gamma_total();
    if (!(m > 0.0)) throw validation_error("ZeroMass", "nu_bar must carry positive mass");
    if (!(g > 0.0)) throw validation_error("ZeroMass", "gamma must carry positive mass");

    double S = 0.0;  // int log(dnu/dgamma) dnu
    double C1 = 0.0; // max_i |log(nu_i/gamma_i)| on the support
    for (int i = 0; i < ts.K; ++i) {
        if (nu_bar[i] == 0.0) continue;
        if (ts.gamma[i] == 0.0)
            throw validation_error("NotAbsolutelyContinuous",
                                   "nu_bar charges site " + std::to_string(i + 1) +
                                       " where gamma vanishes; the entropy is +inf");
        const double lr = std::log(nu_bar[i] / ts.gamma[i]);
        S += lr * nu_bar[i];
        C1 = std::max(C1, std::abs(lr));
    }

    recovery_entropy_report rep;
    const double log_norm_nu = n * m + std::log1p(-std::exp(-n * m));    // log(e^{nm} - 1)
    const double log_norm_gam = n * g + std::log1p(-std::exp(-n * g));   // log(e^{ng} - 1)
    const double C0 = log_norm_gam - log_norm_nu;
    rep.closed = -n * S / std::expm1(-n * m) + C0;

    // Truncation level: start past both Poisson bulks, then push until the
    // per-total majorant a_s (|C0| + s C1 + 1) + b_s integrates below tail_tol.
    const double lam = std::max(n * m, n * g);
    int M = static_cast<int>(std::ceil(lam + 12.0 * std::sqrt(lam) + 20.0));
    auto log_pois = [](double rate_log_norm, double rate, int s) {
        return static_cast<double>(s) * std::log(rate) - std::lgamma(static_cast<double>(s) + 1.0) -
               rate_log_norm;
    };
    auto tail_bound = [&](int from) {
        double acc = 0.0;
        for (int s = from + 1; s <= from + 2000; ++s) {
            const double a_s = std::exp(log_pois(log_norm_nu, n * m, s));
            const double b_s = std::exp(log_pois(log_norm_gam, n * g, s));
            const double term = a_s * (std::abs(C0) + static_cast<double>(s) * C1 + 1.0) + b_s;
            acc += term;
            if (term < 1e-3 * tail_tol && s > from + 5) break;
        }
        return acc;
    };
    while (tail_bound(M) > tail_tol) M = static_cast<int>(std::ceil(M * 1.3)) + 5;

    double states = 1.0;
    for (int i = 1; i <= ts.K; ++i) states *= static_cast<double>(M + i) / i;
    if (states > state_cap)
        throw validation_error("SpaceTooLarge",
                               "direct entropy sum needs about " + std::to_string(states) +
                                   " configurations, cap is " + std::to_string(state_cap));
    rep.N_max_used = M;

    // Stream over all 1 <= |N| <= M without materializing the space.
    double direct = 0.0;
    std::vector<int> N(static_cast<std::size_t>(ts.K), 0);
    auto walk = [&](auto&& self, int site, int used, double logA, double logB) -> void {
        if (site == ts.K) {
            if (used == 0) return;
            const double B = std::exp(logB);
            if (logA == -std::numeric_limits<double>::infinity()) {
                direct += B;
            } else {
                const double A = std::exp(logA);
                direct += A * (logA - logB) - A + B;
            }
            return;
        }
        for (int v = 0; used + v <= M; ++v) {
            double la = logA, lb = logB;
            if (v > 0) {
                const double lg = std::lgamma(static_cast<double>(v) + 1.0);
                la += nu_bar[site] > 0.0
                          ? static_cast<double>(v) * std::log(n * nu_bar[site]) - lg
                          : -std::numeric_limits<double>::infinity();
                lb += static_cast<double>(v) * std::log(n * ts.gamma[site]) - lg;
            }
            self(self, site + 1, used + v, la, lb);
        }
    };
    walk(walk, 0, 0, -log_norm_nu, -log_norm_gam);
    rep.direct = direct;
    return rep;
}

struct convergence_row {
    double n = 0.0;
    std::string quantity;
    double value = 0.0;
    double limit = 0.0;
    double gap = 0.0;
    double stderr_value = 0.0;
    bool has_stderr = false;
};

struct convergence_table {
    std::vector<convergence_row> rows;
};

namespace detail {

inline void require_increasing(const std::vector<double>& ns) {
    for (double n : ns)
        if (!(n > 0.0)) throw validation_error("BadSystemSize", "every n must be > 0");
    for (std::size_t k = 0; k + 1 < ns.size(); ++k)
        if (!(ns[k] < ns[k + 1]))
            throw validation_error("BadSequence", "n values must be strictly increasing");
}

inline int auto_n_max(const trait_space& ts, const measure& nu0, double n) {
    const double lam = n * std::max(ts.gamma_total(), mass(nu0));
    return static_cast<int>(std::ceil(lam + 12.0 * std::sqrt(lam) + 25.0));
}

/** One draw from the product-Poisson configuration with site intensities
 *  n nu0_i, conditioned on holding at least one particle — the sampling
 *  counterpart of the tilted product measure the exact branch starts from. */
inline std::vector<long long> sample_poisson_configuration(pcg32& gen, const trait_space& ts,
                                                           const measure& nu0, double n) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        std::vector<long long> counts(ts.K, 0);
        long long total = 0;
        for (int i = 0; i < ts.K; ++i) {
            counts[static_cast<std::size_t>(i)] = poisson_sample(gen, n * nu0[static_cast<std::size_t>(i)]);
            total += counts[static_cast<std::size_t>(i)];
        }
        if (total >= 1) return counts;
    }
    throw numeric_error("DegenerateInitialLaw",
                        "conditioning on a nonempty configuration kept rejecting; "
                        "n * nu0 is vanishingly small");
}

} // namespace detail

struct chaos_point {
    double n = 0.0;
    int N_max = 0;
    double chaos_t0 = 0.0;       // (1/n) Ent(P_0 | tilted(nu_0)), 0 by construction
    double chaos_t = 0.0;        // (1/n) Ent(P_t | tilted(nu_t))
    double entropy_rate = 0.0;   // (1/n) Ent(P_t | Pi_n)
    double entropy_limit = 0.0;  // Ent(nu_t | gamma)
    double leak = 0.0;
};

struct chaos_result {
    measure nu_t;
    std::vector<chaos_point> points;
    convergence_table table;
};

struct chaos_options {
    double t = 1.0;
    double dt = 1e-3;
    double mf_dt = 1e-4;
    double leak_budget = 1e-3;
    double space_cap = 2e5;
    int N_max_override = -1;
};

/** For each n, solves the forward equation from the tilted product state
 *  Pi_{n,nu_0} and reports the scaled entropy against the moving reference
 *  Pi_{n,nu_t} (propagation of chaos: should fall to 0) and against the
 *  invariant Pi_n (should approach Ent(nu_t | gamma)). */
inline chaos_result chaos_entropy_curve(const trait_space& ts, const kernel_pair& kp,
                                        const measure& nu0, const std::vector<double>& ns,
                                        const chaos_options& opts = {}) {
    validate_model(ts, kp);
    check_measure(ts, nu0, "nu0");
    detail::require_increasing(ns);
    if (!(opts.t >= 0.0)) throw validation_error("BadHorizon", "t must be >= 0");

    solver_options mf_opts;
    mf_opts.dt = opts.mf_dt;
    mf_opts.tol = 1e-12;
    const mf_trajectory mf = solve_mf(ts, kp, nu0, opts.t, mf_opts);

    chaos_result out;
    out.nu_t = mf.nu.back();
    const ext_real ent_limit = relative_entropy(out.nu_t, ts.gamma);

    for (double n : ns) {
        chaos_point pt;
        pt.n = n;
        pt.N_max = opts.N_max_override > 0 ? opts.N_max_override : detail::auto_n_max(ts, nu0, n);
        const config_space cs = enumerate_states(ts.K, pt.N_max, opts.space_cap);
        const fke_generator gen = build_generator(cs, ts, kp, n);
        const fke_dist P0 = tilted_pi(cs, nu0, n);

        fke_options fo;
        fo.dt = opts.dt;
        fo.leak_budget = opts.leak_budget;
        const fke_trajectory traj = solve_fke(gen, P0, opts.t, fo);
        pt.leak = traj.leak_total();

        const fke_dist ref_t = tilted_pi(cs, out.nu_t, n);
        const fke_dist pi = stationary_pi(cs, ts, n);
        const ext_real chaos0 = relative_entropy(P0, tilted_pi(cs, nu0, n));
        const ext_real chaos = relative_entropy(traj.P.back(), ref_t);
        const ext_real rate = relative_entropy(traj.P.back(), pi);
        if (!chaos.finite() || !rate.finite() || !ent_limit.finite())
            throw numeric_error("InfiniteFunctional", "entropy against the moving reference is +inf");
        pt.chaos_t0 = chaos0.value() / n;
        pt.chaos_t = chaos.value() / n;
        pt.entropy_rate = rate.value() / n;
        pt.entropy_limit = ent_limit.value();
        out.points.push_back(pt);

        out.table.rows.push_back(
            {n, "chaos_entropy", pt.chaos_t, 0.0, pt.chaos_t, 0.0, false});
        out.table.rows.push_back({n, "entropy_rate", pt.entropy_rate, pt.entropy_limit,
                                  std::abs(pt.entropy_rate - pt.entropy_limit), 0.0, false});
    }
    return out;
}

struct concentration_point {
    double n = 0.0;
    std::string method; // "fke" or "gillespie"
    double mean = 0.0;
    double variance = 0.0;
    double stderr_mean = 0.0; // 0 for exact fke values
};

struct concentration_result {
    double limit_mean = 0.0; // <f, nu_t> under the mean-field flow
    std::vector<concentration_point> points;
    convergence_table table;
};

struct concentration_options {
    double t = 1.0;
    double dt = 1e-3;
    double mf_dt = 1e-4;
    double leak_budget = 1e-3;
    double space_cap = 2e5;
    long long gillespie_runs = 20000;
    rng_spec rng{};
    int N_max_override = -1;
};

/** Mean and variance of the observable <f, nu_t> under the n-particle law
 *  started from the tilted product measure at nu0: by exact forward solve
 *  while the configuration space stays below space_cap, and beyond that by a
 *  seeded simulation ensemble whose initial configurations are drawn from
 *  the same (Poissonized, conditioned nonempty) law — both branches estimate
 *  one quantity, so the sweep stays continuous across the method switch.
 *  Variance must concentrate (fall toward 0) and the mean must approach the
 *  mean-field value as n grows. */
inline concentration_result concentration_experiment(const trait_space& ts, const kernel_pair& kp,
                                                     const measure& nu0,
                                                     const std::vector<double>& f,
                                                     const std::vector<double>& ns,
                                                     const concentration_options& opts = {}) {
    validate_model(ts, kp);
    check_measure(ts, nu0, "nu0");
    if (static_cast<int>(f.size()) != ts.K)
        throw validation_error("DimensionMismatch", "f size != K");
    detail::require_increasing(ns);

    solver_options mf_opts;
    mf_opts.dt = opts.mf_dt;
    mf_opts.tol = 1e-12;
    const mf_trajectory mf = solve_mf(ts, kp, nu0, opts.t, mf_opts);

    concentration_result out;
    out.limit_mean = 0.0;
    for (int i = 0; i < ts.K; ++i) out.limit_mean += f[i] * mf.nu.back()[i];

    for (double n : ns) {
        concentration_point pt;
        pt.n = n;
        const int n_max =
            opts.N_max_override > 0 ? opts.N_max_override : detail::auto_n_max(ts, nu0, n);
        if (state_count_estimate(ts.K, n_max) <= opts.space_cap) {
            pt.method = "fke";
            const config_space cs = enumerate_states(ts.K, n_max, opts.space_cap);
            const fke_generator gen = build_generator(cs, ts, kp, n);
            fke_options fo;
            fo.dt = opts.dt;
            fo.leak_budget = opts.leak_budget;
            const fke_trajectory traj = solve_fke(gen, tilted_pi(cs, nu0, n), opts.t, fo);
            const fke_dist& P = traj.P.back();
            double m1 = 0.0, m2 = 0.0;
            for (std::size_t s = 0; s < cs.size(); ++s) {
                double x = 0.0;
                for (int i = 0; i < ts.K; ++i)
                    x += f[i] * static_cast<double>(cs.states[s][static_cast<std::size_t>(i)]) / n;
                m1 += P[s] * x;
                m2 += P[s] * x * x;
            }
            pt.mean = m1;
            pt.variance = std::max(0.0, m2 - m1 * m1);
            pt.stderr_mean = 0.0;
        } else {
            pt.method = "gillespie";
            std::vector<event_log> logs;
            logs.reserve(static_cast<std::size_t>(opts.gillespie_runs));
            for (long long r = 0; r < opts.gillespie_runs; ++r) {
                // even streams draw the initial configuration, odd ones run
                // the jumps, so both are reproducible per run index
                pcg32 init_gen(rng_spec{opts.rng.seed,
                                        opts.rng.stream + 2 * static_cast<std::uint64_t>(r)});
                const std::vector<long long> c0 =
                    detail::sample_poisson_configuration(init_gen, ts, nu0, n);
                logs.push_back(
                    simulate(ts, kp, c0, n, opts.t,
                             rng_spec{opts.rng.seed,
                                      opts.rng.stream + 2 * static_cast<std::uint64_t>(r) + 1}));
            }
            const ensemble_summary st = ensemble_stats(logs, f, opts.t);
            pt.mean = st.mean;
            pt.variance = st.variance;
            pt.stderr_mean = st.stderr_mean;
        }
        out.points.push_back(pt);
        out.table.rows.push_back({n, "mean_obs", pt.mean, out.limit_mean,
                                  std::abs(pt.mean - out.limit_mean), pt.stderr_mean,
                                  pt.method == "gillespie"});
        out.table.rows.push_back({n, "var_obs", pt.variance, 0.0, pt.variance, 0.0, false});
    }
    return out;
}

struct ensemble_atom {
    measure nu;
    double weight = 0.0;
};

struct ensemble_spec {
    std::vector<ensemble_atom> atoms;
    long long samples = 64;
    rng_spec rng{}; // reserved for non-atomic ensembles; recorded, unused here
};

struct superposition_report {
    double I_estimate = 0.0;
    double I_stderr = 0.0;
    double F_initial = 0.0; // ensemble averages of the mean-field functionals
    double F_final = 0.0;
    double R_integral = 0.0;
    double D_integral = 0.0;
    long long samples = 0;
};

/** Lifts the mean-field energy-dissipation balance to a random initial
 *  condition: draws from a finite mixture of point masses (the sample budget
 *  is split deterministically by largest remainder, so finite mixtures
 *  average exactly), solves per atom, and averages I, F, int R, int D.
 *  At solutions the lifted balance F_0 = F_T + int(R + D) holds and the
 *  I estimate sits at quadrature level. */
inline superposition_report superposition_mc(const trait_space& ts, const kernel_pair& kp,
                                             const ensemble_spec& spec, double T,
                                             const solver_options& opts = {}) {
    if (spec.atoms.empty()) throw validation_error("EmptyEnsemble", "need >= 1 atom");
    if (spec.samples < 1) throw validation_error("EmptyEnsemble", "need >= 1 sample");
    double wsum = 0.0;
    for (const ensemble_atom& a : spec.atoms) {
        check_measure(ts, a.nu, "atom");
        if (!(a.weight >= 0.0)) throw validation_error("NegativeEntry", "atom weight < 0");
        wsum += a.weight;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw validation_error("NotNormalized", "atom weights must sum to 1");

    // Largest-remainder split of the sample budget.
    const std::size_t A = spec.atoms.size();
    std::vector<long long> alloc(A);
    std::vector<double> rem(A);
    long long got = 0;
    for (std::size_t a = 0; a < A; ++a) {
        const double x = spec.atoms[a].weight * static_cast<double>(spec.samples);
        alloc[a] = static_cast<long long>(std::floor(x));
        rem[a] = x - static_cast<double>(alloc[a]);
        got += alloc[a];
    }
    std::vector<std::size_t> order(A);
    for (std::size_t a = 0; a < A; ++a) order[a] = a;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return rem[x] > rem[y]; });
    for (long long k = 0; k < spec.samples - got; ++k) alloc[order[static_cast<std::size_t>(k) % A]] += 1;

    superposition_report rep;
    rep.samples = spec.samples;
    double i_sum = 0.0, i_sumsq = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
        if (alloc[a] == 0) continue;
        const mf_trajectory traj = solve_mf(ts, kp, spec.atoms[a].nu, T, opts);
        const mf_edp_report edp = edp_mf(ts, kp, traj);
        if (!edp.I.finite() || !edp.F_final.finite() || !edp.R_integral.finite() ||
            !edp.D_integral.finite())
            throw numeric_error("InfiniteFunctional", "ensemble atom with infinite balance parts");
        const double w = static_cast<double>(alloc[a]) / static_cast<double>(spec.samples);
        rep.I_estimate += w * edp.I.value();
        rep.F_initial += w * edp.F_initial.value();
        rep.F_final += w * edp.F_final.value();
        rep.R_integral += w * edp.R_integral.value();
        rep.D_integral += w * edp.D_integral.value();
        i_sum += static_cast<double>(alloc[a]) * edp.I.value();
        i_sumsq += static_cast<double>(alloc[a]) * edp.I.value() * edp.I.value();
    }
    if (spec.samples > 1) {
        const double m = static_cast<double>(spec.samples);
        const double mean = i_sum / m;
        const double var = std::max(0.0, (i_sumsq - m * mean * mean) / (m - 1.0));
        rep.I_stderr = std::sqrt(var / m);
    }
    return rep;
}

} // namespace bpdl
