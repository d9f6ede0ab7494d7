#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "bpdl/errors.hpp"

namespace bpdl {

/** A finite nonnegative measure on {1,...,K}, stored as per-site weights. */
using measure = std::vector<double>;

inline double mass(const measure& nu) {
    double s = 0.0;
    for (double v : nu) s += v;
    return s;
}

/** Finite trait space: K sites carrying the reference weights gamma. */
struct trait_space {
    int K = 0;
    measure gamma;

    double gamma_total() const { return mass(gamma); }
};

inline trait_space make_trait_space(int K, measure gamma) {
    if (K < 1)
        throw validation_error("BadDimension", "trait space needs K >= 1, got K=" + std::to_string(K));
    if (static_cast<int>(gamma.size()) != K)
        throw validation_error("DimensionMismatch",
                               "gamma has " + std::to_string(gamma.size()) + " entries, expected " +
                                   std::to_string(K));
    for (int i = 0; i < K; ++i) {
        if (!(gamma[i] >= 0.0) || std::isinf(gamma[i]))
            throw validation_error("NegativeEntry",
                                   "gamma[" + std::to_string(i + 1) + "] must be finite and >= 0");
    }
    return trait_space{K, std::move(gamma)};
}

/** Competition kernel c together with the mutation kernel m it induces.
 *
 *  The model assumptions are baked in at construction: c is a square
 *  nonnegative matrix with zero diagonal (no natural death), and the
 *  mutation kernel is its transpose, m(y,x) = c(x,y), so births at x driven
 *  by mass at y mirror the competition x feels from y. Both matrices are
 *  row-major K*K.
 */
struct kernel_pair {
    int K = 0;
    std::vector<double> c_data;

    double c(int i, int j) const { return c_data[static_cast<std::size_t>(i) * K + j]; }
    /** m(j, i) = c(i, j). */
    double m(int j, int i) const { return c(i, j); }

    double c_max() const {
        double mx = 0.0;
        for (double v : c_data) mx = std::max(mx, v);
        return mx;
    }
};

inline kernel_pair make_kernel_pair(const std::vector<std::vector<double>>& c) {
    const int K = static_cast<int>(c.size());
    if (K < 1) throw validation_error("BadDimension", "competition matrix is empty");
    kernel_pair kp;
    kp.K = K;
    kp.c_data.assign(static_cast<std::size_t>(K) * K, 0.0);
    for (int i = 0; i < K; ++i) {
        if (static_cast<int>(c[i].size()) != K)
            throw validation_error("NonSquare", "competition matrix row " + std::to_string(i + 1) +
                                                    " has " + std::to_string(c[i].size()) +
                                                    " entries, expected " + std::to_string(K));
        for (int j = 0; j < K; ++j) {
            const double v = c[i][j];
            if (!(v >= 0.0) || std::isinf(v) || std::isnan(v))
                throw validation_error("NegativeEntry", "c[" + std::to_string(i + 1) + "][" +
                                                            std::to_string(j + 1) +
                                                            "] must be finite and >= 0");
            if (i == j && v != 0.0)
                throw validation_error(
                    "NonzeroDiagonal",
                    "c[" + std::to_string(i + 1) + "][" + std::to_string(i + 1) +
                        "] = " + std::to_string(v) +
                        " violates the no natural death assumption (zero diagonal)");
            kp.c_data[static_cast<std::size_t>(i) * K + j] = v;
        }
    }
    return kp;
}

inline void check_measure(const trait_space& ts, const measure& nu, const char* name) {
    if (static_cast<int>(nu.size()) != ts.K)
        throw validation_error("DimensionMismatch", std::string(name) + " has " +
                                                        std::to_string(nu.size()) +
                                                        " entries, expected " + std::to_string(ts.K));
    for (int i = 0; i < ts.K; ++i)
        if (!(nu[i] >= 0.0) || std::isinf(nu[i]) || std::isnan(nu[i]))
            throw validation_error("NegativeEntry", std::string(name) + "[" + std::to_string(i + 1) +
                                                        "] must be finite and >= 0");
}

/** (c_nu)_i = sum_j c(i,j) nu_j, the competition pressure felt at site i. */
inline measure competition_field(const kernel_pair& kp, const measure& nu) {
    measure out(kp.K, 0.0);
    for (int i = 0; i < kp.K; ++i) {
        double s = 0.0;
        for (int j = 0; j < kp.K; ++j) s += kp.c(i, j) * nu[j];
        out[i] = s;
    }
    return out;
}

/** Birth intensity kappa^+[nu]_i = (c_nu)_i gamma_i.
 *  Under m = c^T this equals gamma_i * sum_j m(j,i) nu_j. */
inline measure birth_intensity(const trait_space& ts, const kernel_pair& kp, const measure& nu) {
    measure f = competition_field(kp, nu);
    for (int i = 0; i < ts.K; ++i) f[i] *= ts.gamma[i];
    return f;
}

/** Death intensity kappa^-[nu]_i = (c_nu)_i nu_i. */
inline measure death_intensity(const kernel_pair& kp, const measure& nu) {
    measure f = competition_field(kp, nu);
    for (int i = 0; i < kp.K; ++i) f[i] *= nu[i];
    return f;
}

/** Geometric-mean intensity theta_nu = sqrt(kappa^+ kappa^-), taken as a
 *  product of square roots so an exact zero on either side gives an exact
 *  zero, never a NaN or a denormal artifact. */
inline measure geometric_mean_intensity(const trait_space& ts, const kernel_pair& kp,
                                        const measure& nu) {
    const measure kp_ = birth_intensity(ts, kp, nu);
    const measure km_ = death_intensity(kp, nu);
    measure th(ts.K, 0.0);
    for (int i = 0; i < ts.K; ++i)
        th[i] = (kp_[i] > 0.0 && km_[i] > 0.0) ? std::sqrt(kp_[i]) * std::sqrt(km_[i]) : 0.0;
    return th;
}

/** Full model validation: shapes line up, gamma carries positive total mass,
 *  and the kernel assumptions hold (they are also enforced at construction). */
inline void validate_model(const trait_space& ts, const kernel_pair& kp) {
    if (ts.K != kp.K)
        throw validation_error("DimensionMismatch", "trait space has K=" + std::to_string(ts.K) +
                                                        " but kernel is " + std::to_string(kp.K) +
                                                        "x" + std::to_string(kp.K));
    if (!(ts.gamma_total() > 0.0))
        throw validation_error("ZeroMass", "gamma must carry positive total mass");
}

/** M = ||c||_inf (1 + gamma(T)), the uniform bound constant for the
 *  intensity estimates below. */
inline double bound_constant(const trait_space& ts, const kernel_pair& kp) {
    return kp.c_max() * (1.0 + ts.gamma_total());
}

struct intensity_bound_report {
    double birth_total = 0.0;
    double death_total = 0.0;
    double bound = 0.0;
    bool ok = false;
};

/** Checks kappa^{+/-}[nu](T) <= M (1 + nu(T)^2) for the given nu. */
inline intensity_bound_report intensity_bound_check(const trait_space& ts, const kernel_pair& kp,
                                                    const measure& nu) {
    check_measure(ts, nu, "nu");
    intensity_bound_report r;
    r.birth_total = mass(birth_intensity(ts, kp, nu));
    r.death_total = mass(death_intensity(kp, nu));
    const double m = mass(nu);
    r.bound = bound_constant(ts, kp) * (1.0 + m * m);
    r.ok = r.birth_total <= r.bound && r.death_total <= r.bound;
    return r;
}

} // namespace bpdl
