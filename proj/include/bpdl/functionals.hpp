#pragma once

#include <cmath>
#include <vector>

#include "bpdl/core_space.hpp"
#include "bpdl/errors.hpp"
#include "bpdl/ext_real.hpp"

namespace bpdl {

/** phi(s) = s log s - s + 1 on [0, inf), with phi(0) = 1.
 *  Convex, nonnegative, zero exactly at s = 1. */
inline double phi(double s) {
    if (!(s >= 0.0)) throw validation_error("NegativeArgument", "phi needs s >= 0");
    if (s == 0.0) return 1.0;
    return s * std::log(s) - s + 1.0;
}

/** Legendre dual of phi: phi*(z) = e^z - 1. */
inline double phi_star(double z) { return std::expm1(z); }

/** psi*(z) = 2(cosh z - 1), evaluated as expm1(z) + expm1(-z) so it stays
 *  accurate (and exactly zero) near z = 0. */
inline double psi_star(double z) { return std::expm1(z) + std::expm1(-z); }

/** Legendre dual of psi*: psi(s) = s asinh(s/2) - sqrt(s^2+4) + 2.
 *  The subtraction is rearranged so psi(s) ~ s^2/4 comes out clean for
 *  small s instead of cancelling to noise. */
inline double psi(double s) {
    const double root = std::sqrt(s * s + 4.0);
    return s * std::asinh(0.5 * s) - (s * s) / (root + 2.0);
}

/** The cost integrand Upsilon(w | u, v):
 *    sqrt(uv)                      if w = 0,
 *    phi(w / sqrt(uv)) sqrt(uv)    if u > 0 and v > 0,
 *    +infinity                     if w > 0 and uv = 0.
 *  Jointly convex; the two finite branches agree where they overlap. */
inline ext_real upsilon(double w, double u, double v) {
    if (!(w >= 0.0) || !(u >= 0.0) || !(v >= 0.0))
        throw validation_error("NegativeArgument", "upsilon needs w, u, v >= 0");
    const double theta = (u > 0.0 && v > 0.0) ? std::sqrt(u) * std::sqrt(v) : 0.0;
    if (w == 0.0) return ext_real(theta);
    if (theta == 0.0) return ext_real::infinity();
    return ext_real(phi(w / theta) * theta);
}

/** Relative entropy Ent(nu | mu) = sum_i phi(nu_i/mu_i) mu_i, with the usual
 *  conventions: a site with nu_i > 0 but mu_i = 0 makes it +infinity, a site
 *  with nu_i = 0 contributes mu_i (that is phi(0) mu_i), and 0|0 contributes
 *  nothing. Always >= 0; zero iff nu = mu. */
inline ext_real relative_entropy(const measure& nu, const measure& mu) {
    if (nu.size() != mu.size())
        throw validation_error("DimensionMismatch", "relative_entropy: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const double x = nu[i], y = mu[i];
        if (!(x >= 0.0) || !(y >= 0.0))
            throw validation_error("NegativeArgument", "relative_entropy needs nonnegative entries");
        if (x == 0.0) {
            acc += y;
        } else if (y == 0.0) {
            return ext_real::infinity();
        } else {
            acc += x * std::log(x / y) - x + y;
        }
    }
    return ext_real(acc);
}

/** Squared Hellinger distance H^2(nu, mu) = 1/2 sum_i (sqrt(nu_i) - sqrt(mu_i))^2. */
inline double hellinger_sq(const measure& nu, const measure& mu) {
    if (nu.size() != mu.size())
        throw validation_error("DimensionMismatch", "hellinger_sq: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (!(nu[i] >= 0.0) || !(mu[i] >= 0.0))
            throw validation_error("NegativeArgument", "hellinger_sq needs nonnegative entries");
        const double d = std::sqrt(nu[i]) - std::sqrt(mu[i]);
        acc += d * d;
    }
    return 0.5 * acc;
}

/** Total-variation norm of a signed vector, sum_i |x_i|. */
inline double tv_norm(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += std::abs(v);
    return acc;
}

/** Mean-field rate functional
 *  R(nu; lam+, lam-) = Ent(lam+ | theta_nu) + Ent(lam- | theta_nu). */
inline ext_real rate_functional_mf(const trait_space& ts, const kernel_pair& kp, const measure& nu,
                                   const measure& lam_plus, const measure& lam_minus) {
    const measure theta = geometric_mean_intensity(ts, kp, nu);
    return relative_entropy(lam_plus, theta) + relative_entropy(lam_minus, theta);
}

/** Mean-field free energy F(nu) = 1/2 Ent(nu | gamma). */
inline ext_real free_energy_mf(const trait_space& ts, const measure& nu) {
    const ext_real e = relative_entropy(nu, ts.gamma);
    if (!e.finite()) return e;
    return ext_real(0.5 * e.value());
}

/** Mean-field dissipation
 *  D(nu) = sum_i (c_nu)_i (sqrt(u_i) - 1)^2 gamma_i  with u = dnu/dgamma,
 *  +infinity when nu is not absolutely continuous w.r.t. gamma.
 *  Equals 2 H^2(kappa^+[nu], kappa^-[nu]) on its finite domain. */
inline ext_real dissipation_mf(const trait_space& ts, const kernel_pair& kp, const measure& nu) {
    const measure field = competition_field(kp, nu);
    double acc = 0.0;
    for (int i = 0; i < ts.K; ++i) {
        if (ts.gamma[i] == 0.0) {
            if (nu[i] > 0.0) return ext_real::infinity();
            continue;
        }
        const double u = nu[i] / ts.gamma[i];
        const double d = std::sqrt(u) - 1.0;
        acc += field[i] * d * d * ts.gamma[i];
    }
    return ext_real(acc);
}

/** One-sided variant: the same sum restricted to sites where the density
 *  dnu/dgamma is strictly positive. Along curves this is the descending
 *  slope; it drops the contribution of sites nu has not yet reached. */
inline ext_real dissipation_mf_minus(const trait_space& ts, const kernel_pair& kp,
                                     const measure& nu) {
    const measure field = competition_field(kp, nu);
    double acc = 0.0;
    for (int i = 0; i < ts.K; ++i) {
        if (ts.gamma[i] == 0.0) {
            if (nu[i] > 0.0) return ext_real::infinity();
            continue;
        }
        const double u = nu[i] / ts.gamma[i];
        if (u <= 0.0) continue;
        const double d = std::sqrt(u) - 1.0;
        acc += field[i] * d * d * ts.gamma[i];
    }
    return ext_real(acc);
}

namespace detail {

/** Trapezoid rule on a (possibly nonuniform) grid, saturating to +infinity
 *  as soon as any node with positive weight is infinite. */
inline ext_real trapezoid_ext(const std::vector<double>& t, const std::vector<ext_real>& f) {
    ext_real acc(0.0);
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double h = t[k + 1] - t[k];
        acc += (0.5 * h) * (f[k] + f[k + 1]);
    }
    return acc;
}

} // namespace detail

/** Lagrangian L(nu; lam+, lam-) = Ent(lam+ | kappa+[nu]) + Ent(lam- | kappa-[nu]).
 *  Symmetrizing it in (lam+, lam-) recovers R + D; the antisymmetric part is
 *  the exact time derivative 1/2 d/dt Ent(nu_t | gamma) along solutions. */
inline ext_real lagrangian_mf(const trait_space& ts, const kernel_pair& kp, const measure& nu,
                              const measure& lam_plus, const measure& lam_minus) {
    return relative_entropy(lam_plus, birth_intensity(ts, kp, nu)) +
           relative_entropy(lam_minus, death_intensity(kp, nu));
}

} // namespace bpdl
