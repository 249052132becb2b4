#pragma once

// Directed-rounding real intervals over nonnegative long doubles (64-bit
// significand on x86-64). Products of many factors are accumulated in
// round-to-nearest and inflated once by a counted (1 +- N*u) envelope, which
// keeps the hot loops cheap; scalar transcendentals go through MPFR with
// explicit rounding modes so no step ever claims more than containment.

#include <gmpxx.h>
#include <mpfr.h>

#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>

namespace singseries {

inline long double ld_down(long double x) {
    return std::nextafterl(x, -std::numeric_limits<long double>::infinity());
}
inline long double ld_up(long double x) {
    return std::nextafterl(x, std::numeric_limits<long double>::infinity());
}

struct Interval {
    long double lo = 0.0L;
    long double hi = 0.0L;

    bool contains(long double x) const { return lo <= x && x <= hi; }
    long double width() const { return hi - lo; }
};

// a, b >= 0 componentwise.
inline Interval mul(const Interval& a, const Interval& b) {
    assert(a.lo >= 0 && b.lo >= 0);
    return {ld_down(a.lo * b.lo), ld_up(a.hi * b.hi)};
}

// a >= 0, b.lo > 0.
inline Interval div(const Interval& a, const Interval& b) {
    assert(a.lo >= 0 && b.lo > 0);
    return {ld_down(a.lo / b.hi), ld_up(a.hi / b.lo)};
}

// Envelope for a value computed from `ops` round-to-nearest long double
// operations: true/computed ratio lies in [1-1.01*ops*u, 1+1.01*ops*u].
inline Interval envelope(long double computed, uint64_t ops) {
    assert(computed >= 0);
    const long double u = std::ldexp(1.0L, -64);  // unit roundoff, 64-bit significand
    long double slack = 1.01L * static_cast<long double>(ops + 2) * u;
    assert(slack < 0.5L);
    return {ld_down(computed * (1.0L - slack)), ld_up(computed * (1.0L + slack))};
}

namespace detail {

class MpfrReal {
  public:
    explicit MpfrReal(mpfr_prec_t prec = 128) { mpfr_init2(x_, prec); }
    ~MpfrReal() { mpfr_clear(x_); }
    MpfrReal(const MpfrReal&) = delete;
    MpfrReal& operator=(const MpfrReal&) = delete;
    mpfr_ptr get() { return x_; }

  private:
    mpfr_t x_;
};

} // namespace detail

// exp(x) with outward rounding at every step.
inline Interval exp_interval(const Interval& x) {
    detail::MpfrReal lo, hi;
    mpfr_set_ld(lo.get(), x.lo, MPFR_RNDD);
    mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_ld(hi.get(), x.hi, MPFR_RNDU);
    mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
    return {mpfr_get_ld(lo.get(), MPFR_RNDD), mpfr_get_ld(hi.get(), MPFR_RNDU)};
}

inline long double rational_to_ld(const mpq_class& q, mpfr_rnd_t dir) {
    detail::MpfrReal x;
    mpfr_set_q(x.get(), q.get_mpq_t(), dir);
    return mpfr_get_ld(x.get(), dir);
}

inline Interval rational_interval(const mpq_class& q) {
    return {rational_to_ld(q, MPFR_RNDD), rational_to_ld(q, MPFR_RNDU)};
}

inline double rational_to_double(const mpq_class& q) {
    detail::MpfrReal x;
    mpfr_set_q(x.get(), q.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_d(x.get(), MPFR_RNDN);
}

} // namespace singseries
