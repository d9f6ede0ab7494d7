#pragma once

#include <cmath>
#include <cstdint>

#include "bpdl/errors.hpp"

namespace bpdl {

/** Identifies one reproducible random stream. Equal (seed, stream) pairs
 *  give bitwise-identical draws on every platform. */
struct rng_spec {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/** PCG XSH-RR 64/32 (O'Neill's pcg32): 64-bit LCG state, 32-bit output via
 *  xorshift-high + random rotation. Chosen because the generator family is
 *  tiny, fully specified (unlike std:: distributions), and natively keyed by
 *  a (seed, stream) pair: the stream selects the LCG increment, so distinct
 *  streams are distinct sequences of the same period 2^64.
 */
class pcg32 {
public:
    explicit pcg32(rng_spec spec) : pcg32(spec.seed, spec.stream) {}

    pcg32(std::uint64_t seed, std::uint64_t stream)
        : state_(0u), inc_((stream << 1u) | 1u) {
        next_u32();
        state_ += seed;
        next_u32();
    }

    std::uint32_t next_u32() {
        const std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        const auto xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        const auto rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((32u - rot) & 31u));
    }

    /** Uniform on [0, 1) with the full 53-bit mantissa. */
    double uniform01() {
        const std::uint64_t hi = next_u32();
        const std::uint64_t lo = next_u32();
        const std::uint64_t bits = (hi << 32u) | lo;
        return static_cast<double>(bits >> 11u) * 0x1.0p-53;
    }

    /** Exponential waiting time with the given rate, by inversion.
     *  log1p keeps the u -> 0 corner exact and u < 1 keeps it finite. */
    double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/** Exact Poisson sample by Knuth's product-of-uniforms method, applied to
 *  the rate in chunks small enough that e^{-chunk} stays comfortably inside
 *  the normal range (a Poisson rate splits into an independent sum). Costs
 *  O(rate) uniforms but is exact for every finite rate and, unlike
 *  std::poisson_distribution (whose algorithm is implementation-defined),
 *  draws the same value from the same stream on every platform — the
 *  bitwise-reproducibility contract of the run manifests depends on that. */
inline long long poisson_sample(pcg32& gen, double rate) {
    if (!(rate >= 0.0) || std::isinf(rate))
        throw validation_error("BadRate", "poisson_sample needs a finite rate >= 0");
    long long total = 0;
    double remaining = rate;
    while (remaining > 0.0) {
        const double chunk = remaining > 8.0 ? 8.0 : remaining;
        remaining -= chunk; // exact 0 on the last pass: chunk == remaining
        const double limit = std::exp(-chunk);
        double prod = gen.uniform01();
        while (prod > limit) {
            ++total;
            prod *= gen.uniform01();
        }
    }
    return total;
}

} // namespace bpdl
