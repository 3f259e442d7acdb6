#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace surf {

// Nonnegative big real stored as log2(value); the value zero is represented
// by log2 = -infinity.  Covers combinatorial magnitudes (binomial(15400,2940)
// and the like) that overflow every hardware float format.  Addition uses
// log-sum-exp; back-conversion to double is refused once |log2| >= 1000 so
// overflow/underflow can never be silent.
class LogReal {
public:
    LogReal() = default; // zero

    static LogReal zero() { return LogReal(); }
    static LogReal one() { return from_log2(0.0L); }
    static LogReal from_log2(long double lg) {
        LogReal v;
        v.lg_ = lg;
        return v;
    }
    static LogReal from_real(long double x) {
        if (x < 0.0L || std::isnan(static_cast<double>(x))) {
            throw std::domain_error("LogReal::from_real: value must be >= 0");
        }
        return x == 0.0L ? zero() : from_log2(log2l(x));
    }

    long double log2_value() const { return lg_; }
    bool is_zero() const { return std::isinf(static_cast<double>(lg_)) && lg_ < 0.0L; }

    double to_double() const {
        if (is_zero()) return 0.0;
        if (fabsl(lg_) >= 1000.0L) {
            throw std::domain_error("LogReal::to_double: |log2| >= 1000");
        }
        return static_cast<double>(exp2l(lg_));
    }

    LogReal operator*(const LogReal& o) const {
        if (is_zero() || o.is_zero()) return zero();
        return from_log2(lg_ + o.lg_);
    }
    LogReal operator/(const LogReal& o) const {
        if (o.is_zero()) throw std::domain_error("LogReal: division by zero");
        if (is_zero()) return zero();
        return from_log2(lg_ - o.lg_);
    }
    LogReal operator+(const LogReal& o) const {
        if (is_zero()) return o;
        if (o.is_zero()) return *this;
        long double hi = lg_;
        long double lo = o.lg_;
        if (hi < lo) std::swap(hi, lo);
        return from_log2(hi + log1pl(exp2l(lo - hi)) * INV_LN2);
    }
    LogReal& operator*=(const LogReal& o) { return *this = *this * o; }
    LogReal& operator+=(const LogReal& o) { return *this = *this + o; }

    bool operator<(const LogReal& o) const { return lg_ < o.lg_; }
    bool operator>(const LogReal& o) const { return o < *this; }
    bool operator<=(const LogReal& o) const { return !(o < *this); }
    bool operator>=(const LogReal& o) const { return !(*this < o); }
    bool operator==(const LogReal& o) const { return lg_ == o.lg_ || (is_zero() && o.is_zero()); }

private:
    static constexpr long double INV_LN2 = 1.4426950408889634073599246810018921L;
    long double lg_ = -std::numeric_limits<long double>::infinity();
};

} // namespace surf
