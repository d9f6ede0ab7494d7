#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/rng.hpp"

namespace bpdl {

/** Configuration counts N (one entry per site) at system size n; the
 *  rescaled empirical measure is nu = N / n. */
struct particle_state {
    std::vector<long long> counts;
    double n = 1.0;

    long long total() const {
        long long s = 0;
        for (long long c : counts) s += c;
        return s;
    }

    measure to_measure() const {
        measure nu(counts.size());
        for (std::size_t i = 0; i < counts.size(); ++i)
            nu[i] = static_cast<double>(counts[i]) / n;
        return nu;
    }
};

/** Deterministic initial counts for a target measure: N_i = round(n nu_i),
 *  corrected by largest remainder so the total hits round(n nu(T)) (or the
 *  prescribed total), ties broken toward lower site index. */
inline std::vector<long long> initial_counts(const trait_space& ts, const measure& nu0, double n,
                                             long long total_override = -1) {
    check_measure(ts, nu0, "nu0");
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    const long long target = total_override >= 0
                                 ? total_override
                                 : static_cast<long long>(std::llround(n * mass(nu0)));
    std::vector<long long> base(ts.K);
    std::vector<double> rem(ts.K);
    long long got = 0;
    for (int i = 0; i < ts.K; ++i) {
        const double x = n * nu0[i];
        base[i] = static_cast<long long>(std::floor(x));
        rem[i] = x - static_cast<double>(base[i]);
        got += base[i];
    }
    long long missing = target - got;
    if (missing < 0 || missing > ts.K)
        throw validation_error("BadTotal", "prescribed total " + std::to_string(target) +
                                               " is unreachable by rounding n*nu0");
    std::vector<int> order(ts.K);
    for (int i = 0; i < ts.K; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return rem[a] > rem[b]; });
    for (long long k = 0; k < missing; ++k) base[order[static_cast<std::size_t>(k)]] += 1;
    return base;
}

struct event_rates_result {
    measure birth; // per site, n * kappa^+_i(N/n) = gamma_i sum_j c(i,j) N_j
    measure death; // per site, n * kappa^-_i(N/n) = (N_i / n) sum_j c(i,j) N_j
    double total = 0.0;
};

inline event_rates_result event_rates(const trait_space& ts, const kernel_pair& kp,
                                      const std::vector<long long>& counts, double n) {
    event_rates_result r;
    r.birth.assign(ts.K, 0.0);
    r.death.assign(ts.K, 0.0);
    for (int i = 0; i < ts.K; ++i) {
        double pressure = 0.0; // sum_j c(i,j) N_j
        for (int j = 0; j < ts.K; ++j) pressure += kp.c(i, j) * static_cast<double>(counts[j]);
        r.birth[i] = ts.gamma[i] * pressure;
        r.death[i] = (static_cast<double>(counts[i]) / n) * pressure;
        r.total += r.birth[i] + r.death[i];
    }
    if (std::isnan(r.total) || std::isinf(r.total))
        throw numeric_error("RateOverflow", "event rates left the finite range");
    return r;
}

struct sim_event {
    double t = 0.0;
    int site = 0;   // 0-based
    int kind = +1;  // +1 birth, -1 death
};

/** Full record of one simulated path: every event, the per-site one-way
 *  event counts, and enough metadata to replay the state at any time. */
struct event_log {
    int K = 0;
    double n = 1.0;
    double T = 0.0;
    rng_spec rng;
    std::vector<long long> initial;
    std::vector<long long> final_counts;
    std::vector<long long> birth_events; // per site
    std::vector<long long> death_events; // per site
    std::vector<sim_event> events;
    double lone_death_rate_max = 0.0; // diagnostic: must stay 0 for valid kernels

    /** Integrated one-way mass fluxes, events weighted by 1/n. */
    measure w_plus() const {
        measure w(K);
        for (int i = 0; i < K; ++i) w[i] = static_cast<double>(birth_events[i]) / n;
        return w;
    }
    measure w_minus() const {
        measure w(K);
        for (int i = 0; i < K; ++i) w[i] = static_cast<double>(death_events[i]) / n;
        return w;
    }

    /** Replays the counts at time t (0 <= t <= T). */
    std::vector<long long> state_at(double t) const {
        std::vector<long long> c = initial;
        for (const sim_event& e : events) {
            if (e.t > t) break;
            c[e.site] += e.kind;
        }
        return c;
    }
};

/** Exact stochastic simulation, direct method: at each step draw one
 *  exponential waiting time at the total rate and pick the event by a single
 *  uniform against the cumulative rates (half-open intervals). Death rates
 *  vanish identically at |N| = 1 because the competition diagonal is zero;
 *  the simulator monitors that as a diagnostic rather than trusting it. */
inline event_log simulate(const trait_space& ts, const kernel_pair& kp,
                          const std::vector<long long>& counts0, double n, double T,
                          rng_spec spec) {
    validate_model(ts, kp);
    if (!(n > 0.0)) throw validation_error("BadSystemSize", "n must be > 0");
    if (!(T >= 0.0) || std::isinf(T)) throw validation_error("BadHorizon", "T must be finite, >= 0");
    if (static_cast<int>(counts0.size()) != ts.K)
        throw validation_error("DimensionMismatch", "counts0 size != K");
    long long tot0 = 0;
    for (long long c : counts0) {
        if (c < 0) throw validation_error("NegativeEntry", "counts must be >= 0");
        tot0 += c;
    }
    if (tot0 < 1) throw validation_error("EmptyConfiguration", "need at least one particle");

    event_log log;
    log.K = ts.K;
    log.n = n;
    log.T = T;
    log.rng = spec;
    log.initial = counts0;
    log.birth_events.assign(ts.K, 0);
    log.death_events.assign(ts.K, 0);

    pcg32 gen(spec);
    std::vector<long long> counts = counts0;
    long long total_particles = tot0;
    double t = 0.0;

    for (;;) {
        const event_rates_result r = event_rates(ts, kp, counts, n);
        if (total_particles == 1)
            log.lone_death_rate_max = std::max(log.lone_death_rate_max, mass(r.death));
        if (r.total <= 0.0) break; // frozen configuration
        t += gen.exponential(r.total);
        if (t > T) break;

        // One uniform; births occupy [0, sum birth), deaths follow.
        const double x = gen.uniform01() * r.total;
        double acc = 0.0;
        int site = -1, kind = 0;
        for (int i = 0; i < ts.K && kind == 0; ++i) {
            acc += r.birth[i];
            if (x < acc) {
                site = i;
                kind = +1;
            }
        }
        for (int i = 0; i < ts.K && kind == 0; ++i) {
            acc += r.death[i];
            if (x < acc) {
                site = i;
                kind = -1;
            }
        }
        if (kind == 0) { // x landed on the far edge by roundoff: take the last live rate
            for (int i = ts.K - 1; i >= 0; --i) {
                if (r.death[i] > 0.0) {
                    site = i;
                    kind = -1;
                    break;
                }
                if (r.birth[i] > 0.0) {
                    site = i;
                    kind = +1;
                    break;
                }
            }
        }

        counts[site] += kind;
        total_particles += kind;
        (kind > 0 ? log.birth_events : log.death_events)[site] += 1;
        log.events.push_back(sim_event{t, site, kind});
    }

    log.final_counts = counts;
    return log;
}

struct ensemble_summary {
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
    double stderr_mean = 0.0;
    std::size_t runs = 0;
};

/** Mean / variance / standard error of <f, nu_t> over an ensemble of paths,
 *  replaying each log at time t. All logs must share (K, n). */
inline ensemble_summary ensemble_stats(const std::vector<event_log>& logs, const measure& f,
                                       double t) {
    if (logs.empty()) throw validation_error("EmptyEnsemble", "ensemble_stats needs >= 1 path");
    const int K = logs.front().K;
    const double n = logs.front().n;
    if (static_cast<int>(f.size()) != K)
        throw validation_error("DimensionMismatch", "observable f size != K");
    double s = 0.0, s2 = 0.0;
    for (const event_log& log : logs) {
        if (log.K != K || log.n != n)
            throw validation_error("DimensionMismatch", "ensemble mixes (K, n) setups");
        const std::vector<long long> c = log.state_at(t);
        double v = 0.0;
        for (int i = 0; i < K; ++i) v += f[i] * static_cast<double>(c[i]) / n;
        s += v;
        s2 += v * v;
    }
    ensemble_summary out;
    out.runs = logs.size();
    const double m = static_cast<double>(logs.size());
    out.mean = s / m;
    out.variance = logs.size() > 1 ? std::max(0.0, (s2 - m * out.mean * out.mean) / (m - 1.0)) : 0.0;
    out.stderr_mean = std::sqrt(out.variance / m);
    return out;
}

} // namespace bpdl
