#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/ext_real.hpp"
#include "bpdl/functionals.hpp"

namespace bpdl {

/** Probability vector over configuration states, indexed like config_space::states. */
using fke_dist = std::vector<double>;

/** All configurations N in Z_{>=0}^K with 1 <= |N| <= N_max, enumerated by
 *  total count, then lexicographically. Neighbor tables hold the index of
 *  N + e_i (or -1 when the birth transition is dropped by the truncation)
 *  and of N - e_i (or -1 when N_i = 0 or |N| = 1, where no death happens).
 *  Dropping births out of |N| = N_max removes transitions in reverse pairs,
 *  so the truncated dynamics stays reversible for the restricted measure. */
struct config_space {
    int K = 0;
    int N_max = 0;
    std::vector<std::vector<int>> states;
    std::vector<int> total; // |N| per state
    std::vector<int> up;    // size S*K
    std::vector<int> down;  // size S*K

    std::size_t size() const { return states.size(); }
    int up_index(int s, int i) const { return up[static_cast<std::size_t>(s) * K + i]; }
    int down_index(int s, int i) const { return down[static_cast<std::size_t>(s) * K + i]; }

    int index_of(const std::vector<int>& N) const {
        const auto it = index_map.find(N);
        return it == index_map.end() ? -1 : it->second;
    }

    std::map<std::vector<int>, int> index_map;
};

inline double state_count_estimate(int K, int N_max) {
    // sum_{s=1}^{N_max} C(s+K-1, K-1)
    double total = 0.0, binom = 1.0; // C(K-1, K-1)
    for (int s = 1; s <= N_max; ++s) {
        binom *= static_cast<double>(s + K - 1) / static_cast<double>(s);
        total += binom;
    }
    return total;
}

inline config_space enumerate_states(int K, int N_max, double cap = 1e6) {
    if (K < 1 || N_max < 1)
        throw validation_error("BadDimension", "need K >= 1 and N_max >= 1");
    const double est = state_count_estimate(K, N_max);
    if (est > cap)
        throw validation_error("SpaceTooLarge", "configuration space would hold about " +
                                                    std::to_string(est) + " states, cap is " +
                                                    std::to_string(cap));
    config_space cs;
    cs.K = K;
    cs.N_max = N_max;

    std::vector<int> N(static_cast<std::size_t>(K), 0);
    // Lexicographic enumeration of {N : |N| = s}, recursion on the leading site.
    auto emit = [&](auto&& self, int site, int remaining) -> void {
        if (site == K - 1) {
            N[static_cast<std::size_t>(site)] = remaining;
            cs.states.push_back(N);
            return;
        }
        for (int v = 0; v <= remaining; ++v) {
            N[static_cast<std::size_t>(site)] = v;
            self(self, site + 1, remaining - v);
        }
    };
    for (int s = 1; s <= N_max; ++s) emit(emit, 0, s);

    const std::size_t S = cs.states.size();
    cs.total.resize(S);
    for (std::size_t s = 0; s < S; ++s) {
        int tot = 0;
        for (int v : cs.states[s]) tot += v;
        cs.total[s] = tot;
        cs.index_map[cs.states[s]] = static_cast<int>(s);
    }
    cs.up.assign(S * static_cast<std::size_t>(K), -1);
    cs.down.assign(S * static_cast<std::size_t>(K), -1);
    for (std::size_t s = 0; s < S; ++s) {
        std::vector<int> M = cs.states[s];
        for (int i = 0; i < K; ++i) {
            if (cs.total[s] < N_max) {
                M[static_cast<std::size_t>(i)] += 1;
                cs.up[s * static_cast<std::size_t>(K) + i] = cs.index_map[M];
                M[static_cast<std::size_t>(i)] -= 1;
            }
            if (M[static_cast<std::size_t>(i)] >= 1 && cs.total[s] >= 2) {
                M[static_cast<std::size_t>(i)] -= 1;
                cs.down[s * static_cast<std::size_t>(K) + i] = cs.index_map[M];
                M[static_cast<std::size_t>(i)] += 1;
            }
        }
    }
    return cs;
}

/** Jump rates of the n-particle process on the truncated configuration
 *  space. Birth into site i from N runs at gamma_i sum_j m(j,i) N_j, death
 *  at site i at (N_i / n) sum_j c(i,j) N_j. Rates are tabulated for every
 *  (state, site); a transition takes part in the dynamics only where the
 *  matching neighbor index exists. */
struct fke_generator {
    config_space space;
    double n = 1.0;
    std::vector<double> birth; // S*K
    std::vector<double> death; // S*K
    std::vector<double> outrate; // per state, retained transitions only

    double birth_rate(int s, int i) const { return birth[static_cast<std::size_t>(s) * space.K + i]; }
    double death_rate(int s, int i) const { return death[static_cast<std::size_t>(s) * space.K + i]; }
};

/** General form taking the competition matrix and the mutation matrix
 *  separately; the modeled pairing is m = c^T and anything else serves as a
 *  detailed-balance control. */
inline fke_generator build_generator_raw(const config_space& cs,
                                         const trait_space& ts,
                                         const std::vector<std::vector<double>>& c,
                                         const std::vector<std::vector<double>>& m, double n) {
    if (ts.K != cs.K)
        throw validation_error("DimensionMismatch", "trait space and configuration space disagree");
    if (static_cast<int>(c.size()) != ts.K || static_cast<int>(m.size()) != ts.K)
        throw validation_error("DimensionMismatch", "kernel matrices must be K x K");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");

    fke_generator g;
    g.space = cs;
    g.n = n;
    const std::size_t S = cs.size();
    const int K = cs.K;
    g.birth.assign(S * static_cast<std::size_t>(K), 0.0);
    g.death.assign(S * static_cast<std::size_t>(K), 0.0);
    g.outrate.assign(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        const std::vector<int>& N = cs.states[s];
        for (int i = 0; i < K; ++i) {
            double grow = 0.0, press = 0.0;
            for (int j = 0; j < K; ++j) {
                grow += m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] *
                        static_cast<double>(N[static_cast<std::size_t>(j)]);
                press += c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                         static_cast<double>(N[static_cast<std::size_t>(j)]);
            }
            const double b = ts.gamma[static_cast<std::size_t>(i)] * grow;
            const double d = (static_cast<double>(N[static_cast<std::size_t>(i)]) / n) * press;
            g.birth[s * static_cast<std::size_t>(K) + i] = b;
            g.death[s * static_cast<std::size_t>(K) + i] = d;
            if (cs.up[s * static_cast<std::size_t>(K) + i] >= 0) g.outrate[s] += b;
            if (cs.down[s * static_cast<std::size_t>(K) + i] >= 0) g.outrate[s] += d;
        }
    }
    return g;
}

inline fke_generator build_generator(const config_space& cs, const trait_space& ts,
                                     const kernel_pair& kp, double n) {
    validate_model(ts, kp);
    std::vector<std::vector<double>> c(static_cast<std::size_t>(kp.K),
                                       std::vector<double>(static_cast<std::size_t>(kp.K)));
    std::vector<std::vector<double>> m = c;
    for (int i = 0; i < kp.K; ++i)
        for (int j = 0; j < kp.K; ++j) {
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = kp.c(i, j);
            m[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = kp.c(i, j);
        }
    return build_generator_raw(cs, ts, c, m, n);
}

namespace detail {

inline fke_dist normalized_from_log_weights(const std::vector<double>& logw) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double w : logw) mx = std::max(mx, w);
    if (!(mx > -std::numeric_limits<double>::infinity()))
        throw validation_error("ZeroMass", "all configuration weights vanish");
    double z = 0.0;
    for (double w : logw) z += std::exp(w - mx);
    const double logz = mx + std::log(z);
    fke_dist out(logw.size());
    for (std::size_t s = 0; s < logw.size(); ++s) out[s] = std::exp(logw[s] - logz);
    return out;
}

inline std::vector<double> poissonized_log_weights(const config_space& cs, const measure& rho,
                                                   double n) {
    std::vector<double> logw(cs.size());
    for (std::size_t s = 0; s < cs.size(); ++s) {
        double w = static_cast<double>(cs.total[s]) * std::log(n);
        for (int i = 0; i < cs.K; ++i) {
            const int Ni = cs.states[s][static_cast<std::size_t>(i)];
            if (Ni == 0) continue;
            if (rho[static_cast<std::size_t>(i)] <= 0.0) {
                w = -std::numeric_limits<double>::infinity();
                break;
            }
            w += static_cast<double>(Ni) * std::log(rho[static_cast<std::size_t>(i)]) -
                 std::lgamma(static_cast<double>(Ni) + 1.0);
        }
        logw[s] = w;
    }
    return logw;
}

} // namespace detail

/** Invariant measure of the detailed-balance dynamics, restricted to the
 *  truncated space and renormalized: Pi_n(N) proportional to
 *  n^{|N|} prod_i gamma_i^{N_i} / N_i!. Log-space throughout. */
inline fke_dist stationary_pi(const config_space& cs, const trait_space& ts, double n) {
    if (ts.K != cs.K) throw validation_error("DimensionMismatch", "K mismatch");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    return detail::normalized_from_log_weights(detail::poissonized_log_weights(cs, ts.gamma, n));
}

/** Poissonized measure tilted to intensity n*nu instead of n*gamma. */
inline fke_dist tilted_pi(const config_space& cs, const measure& nu, double n) {
    if (static_cast<int>(nu.size()) != cs.K)
        throw validation_error("DimensionMismatch", "nu size != K");
    if (!(mass(nu) > 0.0)) throw validation_error("ZeroMass", "tilted_pi needs nu with mass > 0");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    return detail::normalized_from_log_weights(detail::poissonized_log_weights(cs, nu, n));
}

/** Forward operator (master equation right side): out = Q* P. */
inline void apply_adjoint(const fke_generator& g, const fke_dist& P, fke_dist& out) {
    const config_space& cs = g.space;
    const std::size_t S = cs.size();
    const int K = cs.K;
    out.assign(S, 0.0);
    for (std::size_t s = 0; s < S; ++s) {
        double acc = -P[s] * g.outrate[s];
        for (int i = 0; i < K; ++i) {
            const int d = cs.down_index(static_cast<int>(s), i);
            if (d >= 0) acc += P[static_cast<std::size_t>(d)] * g.birth_rate(d, i);
            const int u = cs.up_index(static_cast<int>(s), i);
            if (u >= 0) acc += P[static_cast<std::size_t>(u)] * g.death_rate(u, i);
        }
        out[s] = acc;
    }
}

/** Max relative detailed-balance defect over retained birth transitions:
 *  | Pi(N) b(N,i) - Pi(N+e_i) d(N+e_i,i) | / max(Pi(N) b(N,i), tiny). */
inline double detailed_balance_residual(const fke_generator& g, const fke_dist& pi) {
    const config_space& cs = g.space;
    double worst = 0.0;
    for (std::size_t s = 0; s < cs.size(); ++s) {
        for (int i = 0; i < cs.K; ++i) {
            const int u = cs.up_index(static_cast<int>(s), i);
            if (u < 0) continue;
            const double fwd = pi[s] * g.birth_rate(static_cast<int>(s), i);
            const double bwd = pi[static_cast<std::size_t>(u)] * g.death_rate(u, i);
            const double res = std::abs(fwd - bwd) / std::max(fwd, 1e-300);
            worst = std::max(worst, res);
        }
    }
    return worst;
}

struct fke_options {
    double dt = 1e-3;
    double leak_budget = 1e-6; // abort when the integrated boundary leak passes this
    double drift_tol = 1e-13;  // renormalize when |sum P - 1| drifts past this
};

struct fke_trajectory {
    std::vector<double> t;
    std::vector<fke_dist> P;
    std::vector<double> leak; // cumulative boundary leak at each node
    double max_drift = 0.0;   // worst |sum P - 1| seen before renormalization

    double leak_total() const { return leak.empty() ? 0.0 : leak.back(); }
};

namespace detail {

inline double boundary_leak_rate(const fke_generator& g, const fke_dist& P) {
    const config_space& cs = g.space;
    double rate = 0.0;
    for (std::size_t s = 0; s < cs.size(); ++s) {
        if (cs.total[s] != cs.N_max) continue;
        double b = 0.0;
        for (int i = 0; i < cs.K; ++i) b += g.birth_rate(static_cast<int>(s), i);
        rate += P[s] * b;
    }
    return rate;
}

} // namespace detail

/** Integrates dP/dt = Q* P with the classic 4th-order one-step method on a
 *  fixed grid. Mass is conserved by the truncated generator exactly, so the
 *  per-step drift is a roundoff monitor; states are renormalized only when
 *  it trips. The probability-weighted rate of dropped boundary births is
 *  integrated alongside as the truncation-leak diagnostic. */
inline fke_trajectory solve_fke(const fke_generator& g, const fke_dist& P0, double T,
                                const fke_options& opts = {}) {
    const std::size_t S = g.space.size();
    if (P0.size() != S) throw validation_error("DimensionMismatch", "P0 size != state count");
    double p0sum = 0.0;
    for (double p : P0) {
        if (!(p >= 0.0)) throw validation_error("NegativeEntry", "P0 must be nonnegative");
        p0sum += p;
    }
    if (std::abs(p0sum - 1.0) > 1e-10)
        throw validation_error("NotNormalized", "P0 must sum to 1 (got " + std::to_string(p0sum) + ")");
    if (!(T >= 0.0) || std::isinf(T)) throw validation_error("BadHorizon", "T must be finite, >= 0");
    if (!(opts.dt > 0.0)) throw validation_error("BadStep", "dt must be > 0");

    double max_out = 0.0;
    for (double r : g.outrate) max_out = std::max(max_out, r);
    if (opts.dt * max_out > 2.5)
        throw numeric_error("StepTooLarge", "dt * max transition rate = " +
                                                std::to_string(opts.dt * max_out) +
                                                " exceeds the one-step stability range");

    fke_trajectory traj;
    traj.t.push_back(0.0);
    traj.P.push_back(P0);
    traj.leak.push_back(0.0);
    if (T == 0.0) return traj;

    const auto steps = static_cast<std::size_t>(std::ceil(T / opts.dt - 1e-12));
    fke_dist k1, k2, k3, k4, tmp(S);
    fke_dist P = P0;
    double leak_rate_prev = detail::boundary_leak_rate(g, P);
    double leak_acc = 0.0;

    for (std::size_t step = 1; step <= steps; ++step) {
        const double tk = std::min(static_cast<double>(step) * opts.dt, T);
        const double h = tk - traj.t.back();

        apply_adjoint(g, P, k1);
        for (std::size_t s = 0; s < S; ++s) tmp[s] = P[s] + 0.5 * h * k1[s];
        apply_adjoint(g, tmp, k2);
        for (std::size_t s = 0; s < S; ++s) tmp[s] = P[s] + 0.5 * h * k2[s];
        apply_adjoint(g, tmp, k3);
        for (std::size_t s = 0; s < S; ++s) tmp[s] = P[s] + h * k3[s];
        apply_adjoint(g, tmp, k4);
        double sum = 0.0, mn = 0.0;
        for (std::size_t s = 0; s < S; ++s) {
            P[s] += (h / 6.0) * (k1[s] + 2.0 * k2[s] + 2.0 * k3[s] + k4[s]);
            mn = std::min(mn, P[s]);
            sum += P[s];
        }
        if (std::isnan(sum) || mn < -1e-9)
            throw numeric_error("StepTooLarge", "solution left the probability simplex at t = " +
                                                    std::to_string(tk));
        traj.max_drift = std::max(traj.max_drift, std::abs(sum - 1.0));
        if (mn < 0.0) {
            sum = 0.0;
            for (std::size_t s = 0; s < S; ++s) {
                P[s] = std::max(P[s], 0.0);
                sum += P[s];
            }
        }
        if (std::abs(sum - 1.0) > opts.drift_tol)
            for (std::size_t s = 0; s < S; ++s) P[s] /= sum;

        const double leak_rate = detail::boundary_leak_rate(g, P);
        leak_acc += 0.5 * h * (leak_rate_prev + leak_rate);
        leak_rate_prev = leak_rate;
        if (leak_acc > opts.leak_budget)
            throw numeric_error("TruncationLeak",
                                "integrated boundary leak " + std::to_string(leak_acc) +
                                    " exceeded the budget " + std::to_string(opts.leak_budget) +
                                    "; raise N_max or the budget");

        traj.t.push_back(tk);
        traj.P.push_back(P);
        traj.leak.push_back(leak_acc);
    }
    return traj;
}

/** Free energy F_n(P) = (1/2n) Ent(P | Pi). */
inline ext_real fke_free_energy(const fke_dist& P, const fke_dist& pi, double n) {
    const ext_real e = relative_entropy(P, pi);
    if (!e.finite()) return e;
    return ext_real(e.value() / (2.0 * n));
}

namespace detail {

/** Fisher information sum over retained birth pairs:
 *  sum (sqrt(U(N+e_i)) - sqrt(U(N)))^2 Pi(N) kappa+_i(N/n); death_side
 *  reindexes the same sum through the death transitions, equal under
 *  detailed balance. */
inline double fke_fisher(const fke_generator& g, const fke_dist& pi, const fke_dist& P,
                         bool death_side) {
    const config_space& cs = g.space;
    double acc = 0.0;
    for (std::size_t s = 0; s < cs.size(); ++s) {
        for (int i = 0; i < cs.K; ++i) {
            if (!death_side) {
                const int u = cs.up_index(static_cast<int>(s), i);
                if (u < 0) continue;
                const double w = pi[s] * g.birth_rate(static_cast<int>(s), i) / g.n;
                if (w == 0.0) continue;
                const double a = std::sqrt(P[s] / pi[s]);
                const double b = std::sqrt(P[static_cast<std::size_t>(u)] / pi[static_cast<std::size_t>(u)]);
                acc += (b - a) * (b - a) * w;
            } else {
                const int d = cs.down_index(static_cast<int>(s), i);
                if (d < 0) continue;
                const double w = pi[s] * g.death_rate(static_cast<int>(s), i) / g.n;
                if (w == 0.0) continue;
                const double a = std::sqrt(P[s] / pi[s]);
                const double b = std::sqrt(P[static_cast<std::size_t>(d)] / pi[static_cast<std::size_t>(d)]);
                acc += (b - a) * (b - a) * w;
            }
        }
    }
    return acc;
}

} // namespace detail

inline double fisher_information(const fke_generator& g, const fke_dist& pi, const fke_dist& P) {
    return detail::fke_fisher(g, pi, P, false);
}

inline double fisher_information_death_side(const fke_generator& g, const fke_dist& pi,
                                            const fke_dist& P) {
    return detail::fke_fisher(g, pi, P, true);
}

/** One-way probability fluxes over (state, site) pairs, in kappa units
 *  (rate / n), as carried by the continuity equation. */
struct flux_field {
    std::vector<double> J_plus;  // S*K
    std::vector<double> J_minus; // S*K
};

inline flux_field solution_fluxes(const fke_generator& g, const fke_dist& P,
                                  double scale_plus = 1.0, double scale_minus = 1.0) {
    const config_space& cs = g.space;
    flux_field f;
    f.J_plus.assign(cs.size() * static_cast<std::size_t>(cs.K), 0.0);
    f.J_minus.assign(cs.size() * static_cast<std::size_t>(cs.K), 0.0);
    for (std::size_t s = 0; s < cs.size(); ++s)
        for (int i = 0; i < cs.K; ++i) {
            const std::size_t at = s * static_cast<std::size_t>(cs.K) + i;
            if (cs.up_index(static_cast<int>(s), i) >= 0)
                f.J_plus[at] = scale_plus * P[s] * g.birth_rate(static_cast<int>(s), i) / g.n;
            if (cs.down_index(static_cast<int>(s), i) >= 0)
                f.J_minus[at] = scale_minus * P[s] * g.death_rate(static_cast<int>(s), i) / g.n;
        }
    return f;
}

/** Rate functional R_n(P; J) = Ent(J+ | Theta+) + Ent(J- | Theta-), with
 *  Theta the geometric mean of the forward flux and the detailed-balance
 *  partner flux of P. Evaluated as a sum of Upsilon(J | theta_fwd, theta_bwd)
 *  over retained transitions; a J charging a pair whose partner fluxes both
 *  vanish makes it +infinity (domination failure), reported not thrown. */
inline ext_real rate_functional_fke(const fke_generator& g, const fke_dist& P,
                                    const flux_field& flux) {
    const config_space& cs = g.space;
    ext_real acc(0.0);
    for (std::size_t s = 0; s < cs.size(); ++s) {
        for (int i = 0; i < cs.K; ++i) {
            const std::size_t at = s * static_cast<std::size_t>(cs.K) + i;
            const int u = cs.up_index(static_cast<int>(s), i);
            if (u >= 0) {
                const double fwd = P[s] * g.birth_rate(static_cast<int>(s), i) / g.n;
                const double bwd = P[static_cast<std::size_t>(u)] * g.death_rate(u, i) / g.n;
                acc += upsilon(flux.J_plus[at], fwd, bwd);
                if (!acc.finite()) return acc;
            }
            const int d = cs.down_index(static_cast<int>(s), i);
            if (d >= 0) {
                const double fwd = P[s] * g.death_rate(static_cast<int>(s), i) / g.n;
                const double bwd = P[static_cast<std::size_t>(d)] * g.birth_rate(d, i) / g.n;
                acc += upsilon(flux.J_minus[at], fwd, bwd);
                if (!acc.finite()) return acc;
            }
        }
    }
    return acc;
}

struct fke_edp_report {
    ext_real R_integral;
    ext_real F_initial;
    ext_real F_final;
    ext_real D_integral;
    ext_real I;
    double leak = 0.0;
};

/** Energy-dissipation balance along a solved trajectory, with the solution
 *  fluxes optionally rescaled (scale 1 probes the null minimizer, anything
 *  else must push I strictly positive). Trapezoid quadrature on the grid. */
inline fke_edp_report edp_fke(const fke_generator& g, const fke_dist& pi,
                              const fke_trajectory& traj, double scale_plus = 1.0,
                              double scale_minus = 1.0) {
    if (traj.P.empty()) throw validation_error("EmptyTrajectory", "edp_fke needs nodes");
    fke_edp_report rep;
    rep.leak = traj.leak_total();
    rep.F_initial = fke_free_energy(traj.P.front(), pi, g.n);
    if (!rep.F_initial.finite())
        throw numeric_error("InfiniteInitialEnergy", "Ent(P_0 | Pi) = +inf; the balance is vacuous");
    rep.F_final = fke_free_energy(traj.P.back(), pi, g.n);

    const std::size_t nodes = traj.P.size();
    std::vector<ext_real> R(nodes), D(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        const flux_field flux = solution_fluxes(g, traj.P[k], scale_plus, scale_minus);
        R[k] = rate_functional_fke(g, traj.P[k], flux);
        D[k] = ext_real(fisher_information(g, pi, traj.P[k]));
    }
    rep.R_integral = detail::trapezoid_ext(traj.t, R);
    rep.D_integral = detail::trapezoid_ext(traj.t, D);
    ext_real tail = rep.R_integral + rep.D_integral;
    if (!tail.finite() || !rep.F_final.finite())
        rep.I = ext_real::infinity();
    else
        rep.I = ext_real(tail.value() + rep.F_final.value() - rep.F_initial.value());
    return rep;
}

/** Weighted total-variation distance
 *  d(P1, P2) = sum_N (1 + (|N|/n)^2)^{-1} |P1(N) - P2(N)|. */
inline double d_tvw(const config_space& cs, const fke_dist& P1, const fke_dist& P2, double n) {
    if (P1.size() != cs.size() || P2.size() != cs.size())
        throw validation_error("DimensionMismatch", "d_tvw: distribution size != state count");
    double acc = 0.0;
    for (std::size_t s = 0; s < cs.size(); ++s) {
        const double m = static_cast<double>(cs.total[s]) / n;
        acc += std::abs(P1[s] - P2[s]) / (1.0 + m * m);
    }
    return acc;
}

struct net_flux_report {
    double j_plus = 0.0;  // argmin
    double minimum = 0.0; // min of phi(j/theta) theta + phi((j-s)/theta) theta
    double psi_value = 0.0; // theta * psi(s / theta)
    double gap = 0.0;       // |minimum - psi_value|
};

/** Contracts the two-flux entropy cost onto a net flux s at geometric mean
 *  theta by brute force: coarse grid bracket, then golden-section refinement
 *  of j+ -> phi(j+/theta) theta + phi((j+-s)/theta) theta over
 *  j+ >= max(s, 0). The closed form of this minimum is theta psi(s/theta);
 *  the gap between the two is what the caller asserts on. */
inline net_flux_report net_flux_contraction_check(double theta, double s) {
    if (!(theta > 0.0)) throw validation_error("NegativeArgument", "theta must be > 0");
    auto cost = [&](double j) {
        return phi(j / theta) * theta + phi((j - s) / theta) * theta;
    };
    const double lo = std::max(s, 0.0);
    const double span = 2.0 * theta + std::abs(s) + 1.0;

    // Coarse bracket of the (convex) minimum.
    const int grid = 4000;
    double best = lo, bestv = cost(lo);
    for (int k = 1; k <= grid; ++k) {
        const double j = lo + span * static_cast<double>(k) / grid;
        const double v = cost(j);
        if (v < bestv) {
            bestv = v;
            best = j;
        }
    }
    double a = std::max(lo, best - span / grid);
    double b = best + span / grid;

    // Golden-section refinement.
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = cost(x1), f2 = cost(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-14 * (1.0 + std::abs(best)); ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = cost(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = cost(x2);
        }
    }
    net_flux_report rep;
    rep.j_plus = 0.5 * (a + b);
    rep.minimum = cost(rep.j_plus);
    rep.psi_value = theta * psi(s / theta);
    rep.gap = std::abs(rep.minimum - rep.psi_value);
    return rep;
}

} // namespace bpdl
