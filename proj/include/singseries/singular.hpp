#pragma once

// Offset tuples and their singular series.
//
// For a tuple h_1 < ... < h_r and prime p, nu_p counts the residue classes
// mod p the tuple occupies. The singular series is the infinite product of
// local factors (1 - nu_p/p)(1 - 1/p)^{-r}. Past every prime dividing a
// pairwise difference (and past r) each nu_p equals r, so the product splits
// into an exact rational head over p <= T and a tuple-independent tail that
// we enclose rigorously:
//
//   * over (T, T2] the tail factors are multiplied out in long double and
//     wrapped in a counted rounding envelope;
//   * past T2 we use  0 <= -log[(1-r/p)(1-1/p)^{-r}] <= c_r/p^2  with
//     c_r = (r^2-r)/2 + r^3/(3(pmin-r)), pmin = T2+1 (tail of the exact
//     log series, all of whose terms are nonnegative), together with
//     sum_{p>T} 1/p^2 <= 1.51012/(T ln T) for T >= 17, which follows by
//     partial summation from pi(x) < 1.25506 x/ln x (x > 1) and
//     pi(x) > x/ln x (x >= 17).
//
// Hence the far tail lies in [exp(-U), 1] and every factor of the enclosure
// is a certified bound, never an estimate.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "singseries/arith.hpp"
#include "singseries/errors.hpp"
#include "singseries/interval.hpp"
#include "singseries/prime_stream.hpp"
#include "singseries/rational.hpp"

namespace singseries {

class OffsetTuple {
  public:
    explicit OffsetTuple(std::vector<uint64_t> offsets) : offsets_(std::move(offsets)) {
        if (offsets_.empty()) throw usage_error("tuple: need at least one offset");
        std::sort(offsets_.begin(), offsets_.end());
        if (std::adjacent_find(offsets_.begin(), offsets_.end()) != offsets_.end())
            throw usage_error("tuple: offsets must be distinct");
    }

    const std::vector<uint64_t>& offsets() const { return offsets_; }
    int r() const { return static_cast<int>(offsets_.size()); }

  private:
    std::vector<uint64_t> offsets_;  // strictly ascending
};

namespace detail {

inline int nu_p_unchecked(const OffsetTuple& t, uint64_t p) {
    std::vector<uint64_t> res;
    res.reserve(t.offsets().size());
    for (uint64_t h : t.offsets()) res.push_back(h % p);
    std::sort(res.begin(), res.end());
    res.erase(std::unique(res.begin(), res.end()), res.end());
    return static_cast<int>(res.size());
}

} // namespace detail

// Number of residue classes mod p occupied by the offsets.
inline int nu_p(const OffsetTuple& t, uint64_t p) {
    if (!is_prime(p)) throw usage_error("nu_p: " + std::to_string(p) + " is not prime");
    return detail::nu_p_unchecked(t, p);
}

// The primes dividing some pairwise difference of the tuple (empty for r=1).
inline std::vector<uint64_t> difference_support(const OffsetTuple& t) {
    std::vector<uint64_t> out;
    const auto& h = t.offsets();
    for (size_t i = 0; i < h.size(); ++i)
        for (size_t j = i + 1; j < h.size(); ++j)
            for (uint64_t p : prime_factors(h[j] - h[i])) out.push_back(p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct LocalFactor {
    uint64_t p;
    int nu;
    ExactRational factor;  // (1 - nu/p)(1 - 1/p)^{-r} = (p-nu) p^{r-1} / (p-1)^r
};

namespace detail {

inline LocalFactor local_factor_unchecked(const OffsetTuple& t, uint64_t p) {
    int r = t.r();
    int nu = nu_p_unchecked(t, p);
    mpz_class num(static_cast<unsigned long>(p - static_cast<uint64_t>(nu)));
    mpz_class pw;
    mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(r - 1));
    num *= pw;
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p - 1), static_cast<unsigned long>(r));
    return {p, nu, make_rational(num, den)};
}

} // namespace detail

inline LocalFactor local_factor(const OffsetTuple& t, uint64_t p) {
    if (!is_prime(p)) throw usage_error("local_factor: " + std::to_string(p) + " is not prime");
    return detail::local_factor_unchecked(t, p);
}

// prod over p <= y of (1 - nu_p/p), times (1 - 1/p)^{-r} when normalized.
inline ExactRational truncated_product(const OffsetTuple& t, uint64_t y, bool normalized) {
    PrimeList primes = sieve_primes(y);
    ExactRational acc(1);
    for (uint64_t p : primes.primes) {
        if (normalized) {
            acc *= detail::local_factor_unchecked(t, p).factor;
        } else {
            int nu = detail::nu_p_unchecked(t, p);
            acc *= make_rational(mpz_class(static_cast<unsigned long>(p - uint64_t(nu))),
                                 mpz_class(static_cast<unsigned long>(p)));
        }
    }
    return acc;
}

// nu_p < p for every prime p <= r (for p > r, nu_p <= r < p holds anyway).
inline bool is_admissible(const OffsetTuple& t) {
    int r = t.r();
    for (uint64_t p : sieve_primes(static_cast<uint64_t>(r)).primes)
        if (detail::nu_p_unchecked(t, p) == static_cast<int>(p)) return false;
    return true;
}

namespace detail {

// Upper bound on sum_{p > T} 1/p^2, rounded up. Below 1e4 the primes are
// summed directly; past the switch point the Rosser-Schoenfeld form applies.
inline long double prime_square_sum_bound(uint64_t T) {
    constexpr uint64_t kSwitch = 10'000;
    auto rs_bound = [](uint64_t x) {
        long double lx = std::log(static_cast<long double>(x));
        for (int i = 0; i < 4; ++i) lx = ld_down(lx);  // a few ulps for logl
        return ld_up(1.510125L / ld_down(static_cast<long double>(x) * lx));
    };
    if (T >= kSwitch) return rs_bound(T);
    static const PrimeList small = sieve_primes(kSwitch);
    long double acc = rs_bound(kSwitch);
    for (auto it = small.primes.rbegin(); it != small.primes.rend(); ++it) {
        uint64_t p = *it;
        if (p <= T) break;
        acc = ld_up(acc + ld_up(1.0L / static_cast<long double>(p * p)));
    }
    return acc;
}

} // namespace detail

// U >= sum_{p > T} -log[(1-r/p)(1-1/p)^{-r}], rounded up. Requires T >= r.
inline long double tail_log_upper_bound(int r, uint64_t T) {
    if (r == 1) return 0.0L;
    if (T < static_cast<uint64_t>(r)) throw usage_error("tail_log_upper_bound: T < r");
    long double rr = static_cast<long double>(r);
    long double c = (rr * rr - rr) / 2.0L;
    c = ld_up(c + ld_up(rr * rr * rr / (3.0L * (static_cast<long double>(T) + 1.0L - rr))));
    return ld_up(c * detail::prime_square_sum_bound(T));
}

namespace detail {

// prod over primes p in (lo, hi] of (1-r/p)(1-1/p)^{-r}, with a counted
// rounding envelope. Factors are formed as (p-r) p^{r-1} / (p-1)^r.
inline Interval nu_r_factor_product(int r, uint64_t lo_excl, uint64_t hi_incl) {
    long double acc = 1.0L;
    uint64_t n_primes = 0;
    for_primes_in(lo_excl, hi_incl, [&](uint64_t p) {
        long double num = static_cast<long double>(p - static_cast<uint64_t>(r));
        long double den = static_cast<long double>(p - 1);
        long double pl = static_cast<long double>(p);
        long double dl = den;
        for (int k = 1; k < r; ++k) {
            num *= pl;
            den *= dl;
        }
        acc = acc * (num / den);
        ++n_primes;
    });
    return envelope(acc, n_primes * (2 * static_cast<uint64_t>(r)));
}

// Shared big tail products, keyed by (r, bound). The product over (T, T2]
// for a particular tuple is recovered by one interval division.
inline Interval cached_nu_r_product(int r, uint64_t hi_incl) {
    static std::map<std::pair<int, uint64_t>, Interval> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(r, hi_incl);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Interval v = nu_r_factor_product(r, static_cast<uint64_t>(r), hi_incl);
    cache.emplace(key, v);
    return v;
}

// A-priori estimate of the achievable relative enclosure width at bound T2.
inline long double enclosure_width_estimate(int r, uint64_t T2) {
    long double U = tail_log_upper_bound(r, T2);
    long double pi_est = 1.26L * static_cast<long double>(T2) /
                         std::log(static_cast<long double>(T2));
    long double u = std::ldexp(1.0L, -64);
    long double slack = 2.02L * (2.0L * r * pi_est + 64.0L) * u;
    return U + slack;
}

} // namespace detail

struct SingularSeriesValue {
    uint64_t truncation_bound = 0;  // T: exact local factors cover p <= T
    uint64_t enclosure_bound = 0;   // T2: tail factors multiplied out to T2, bounded beyond
    ExactRational truncated;        // exact product over p <= T
    long double tail_lo = 1.0L;     // [tail_lo, tail_hi] contains prod_{p > T} of the factors;
    long double tail_hi = 1.0L;     // the neutral [1,1] when the head vanishes (value is 0 anyway)
    long double value_lo = 0.0L;    // truncated * tail, outward
    long double value_hi = 0.0L;

    long double width() const { return value_hi - value_lo; }
};

// Exact head plus certified tail enclosure; guarantees
// value_hi - value_lo < eps * value_hi for admissible tuples.
inline SingularSeriesValue singular_series(const OffsetTuple& t, double eps) {
    if (!(eps > 0)) throw usage_error("eps must be > 0");
    const int r = t.r();

    SingularSeriesValue out;
    if (r == 1) {
        // every local factor is (1-1/p)(1-1/p)^{-1} = 1
        out.truncation_bound = 2;
        out.enclosure_bound = 2;
        out.truncated = ExactRational(1);
        out.tail_lo = out.tail_hi = 1.0L;
        out.value_lo = out.value_hi = 1.0L;
        return out;
    }

    std::vector<uint64_t> support = difference_support(t);
    uint64_t T = static_cast<uint64_t>(r) + 1;
    if (!support.empty()) T = std::max(T, support.back());
    out.truncation_bound = T;
    out.truncated = truncated_product(t, T, /*normalized=*/true);

    if (sgn(out.truncated) == 0) {
        out.enclosure_bound = T;
        out.tail_lo = out.tail_hi = 1.0L;
        out.value_lo = out.value_hi = 0.0L;
        return out;
    }

    Interval head = rational_interval(out.truncated);
    Interval head_tail_prod = detail::nu_r_factor_product(r, static_cast<uint64_t>(r), T);

    uint64_t T2 = std::max<uint64_t>(T, 1000);
    for (;;) {
        if (detail::enclosure_width_estimate(r, T2) <= 0.9L * static_cast<long double>(eps)) {
            Interval big = detail::cached_nu_r_product(r, T2);
            Interval mid = div(big, head_tail_prod);  // product over (T, T2]
            long double U = tail_log_upper_bound(r, T2);
            Interval far{exp_interval({-U, -U}).lo, 1.0L};
            Interval tail = mul(mid, far);
            Interval value = mul(head, tail);
            if (value.hi - value.lo < static_cast<long double>(eps) * value.hi) {
                out.enclosure_bound = T2;
                out.tail_lo = tail.lo;
                out.tail_hi = tail.hi;
                out.value_lo = value.lo;
                out.value_hi = value.hi;
                return out;
            }
        }
        if (T2 >= kStreamLimit)
            throw resource_error("eps " + std::to_string(eps) +
                                 " needs a tail bound past the streaming budget " +
                                 std::to_string(kStreamLimit));
        T2 = std::min(T2 * 2, kStreamLimit);
    }
}

} // namespace singseries
