#pragma once

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "bpdl/errors.hpp"

namespace bpdl {

/** A real number extended with +infinity.
 *
 *  Entropies and rate functionals legitimately take the value +infinity
 *  (absolute continuity failures), and downstream code must be able to tell
 *  a genuine infinity from an overflowed float. The infinite state is a tag,
 *  never a stored HUGE_VAL, and addition saturates: inf + x = inf.
 */
class ext_real {
public:
    ext_real() : value_(0.0), finite_(true) {}
    ext_real(double v) : value_(v), finite_(true) {
        if (std::isnan(v) || std::isinf(v))
            throw numeric_error("NonFiniteValue", "ext_real fed a NaN or IEEE infinity");
    }

    static ext_real infinity() {
        ext_real r;
        r.finite_ = false;
        r.value_ = 0.0;
        return r;
    }

    bool finite() const noexcept { return finite_; }

    /** Finite value; throws if called on +infinity. */
    double value() const {
        if (!finite_) throw std::logic_error("ext_real::value() on +infinity");
        return value_;
    }

    /** Finite value, or the IEEE +inf when infinite. For printing only. */
    double value_or_inf() const noexcept {
        return finite_ ? value_ : std::numeric_limits<double>::infinity();
    }

    ext_real& operator+=(const ext_real& o) {
        if (!finite_ || !o.finite_) {
            finite_ = false;
            value_ = 0.0;
        } else {
            value_ += o.value_;
        }
        return *this;
    }

    friend ext_real operator+(ext_real a, const ext_real& b) { return a += b; }

    /** Scale by a nonnegative finite factor; 0 * inf is deliberately rejected. */
    friend ext_real operator*(double s, const ext_real& a) {
        if (!(s >= 0.0) || std::isinf(s))
            throw numeric_error("BadScale", "ext_real scale factor must be finite and >= 0");
        if (!a.finite_) {
            if (s == 0.0)
                throw numeric_error("ZeroTimesInfinity", "0 * infinity is undefined");
            return infinity();
        }
        return ext_real(s * a.value_);
    }

    friend bool operator==(const ext_real& a, const ext_real& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend bool operator<(const ext_real& a, const ext_real& b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const ext_real& a, const ext_real& b) { return a < b || a == b; }
    friend bool operator>(const ext_real& a, const ext_real& b) { return b < a; }
    friend bool operator>=(const ext_real& a, const ext_real& b) { return b <= a; }

    friend std::ostream& operator<<(std::ostream& os, const ext_real& a) {
        if (a.finite_) return os << a.value_;
        return os << "inf";
    }

private:
    double value_;
    bool finite_;
};

} // namespace bpdl
