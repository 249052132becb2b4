#pragma once

// Exact evaluation of the Gallagher average at finite h.
//
// With P the primorial of the primes up to y, the bare truncated product of
// a tuple equals (1/P) * #{0 <= n < P : every n+h_i is coprime to P} (CRT,
// one residue count per prime). Summing that count over all tuples in
// [0,h]^r and exchanging the two sums turns the tuple sum into moments of
//
//   g(n) = #{0 <= m <= h : gcd(n+m, P) = 1},
//
// because for fixed n each coordinate independently picks one of the g(n)
// coprime positions. Hence, exactly,
//
//   B' (all tuples)      = (1/P) sum_n g(n)^r
//   B  (distinct tuples) = (1/P) sum_n g(n)(g(n)-1)...(g(n)-r+1),
//
// and the truncated Gallagher sum factors as S_trunc = A_exact * B with
// A_exact = prod_{p<=y} (1-1/p)^{-r}. b_direct keeps the literal tuple sum
// as an independent oracle for both moments.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singseries/arith.hpp"
#include "singseries/errors.hpp"
#include "singseries/interval.hpp"
#include "singseries/rational.hpp"
#include "singseries/singular.hpp"

namespace singseries {

inline constexpr int kMaxR = 8;
inline constexpr uint64_t kMaxH = 1'000'000'000'000'000ULL;  // 1e15

struct PrimeBasis {
    uint64_t h = 0;     // tuple coordinates range over [0, h]
    double y = 0.0;     // truncation level; primes p <= y
    PrimeList primes;
    mpz_class P;        // primorial of the primes
};

// y = y_override if given, else max(2, 0.5 ln h).
inline PrimeBasis make_basis(uint64_t h, std::optional<double> y_override = std::nullopt) {
    if (h < 1) throw usage_error("h must be >= 1");
    if (h > kMaxH) throw resource_error("h " + std::to_string(h) + " exceeds " + std::to_string(kMaxH));
    PrimeBasis b;
    b.h = h;
    if (y_override) {
        if (!(*y_override >= 2.0)) throw usage_error("y override must be >= 2");
        b.y = *y_override;
    } else {
        b.y = std::max(2.0, 0.5 * std::log(static_cast<double>(h)));
    }
    b.primes = sieve_primes(static_cast<uint64_t>(std::floor(b.y)));
    b.P = primorial(b.primes);
    return b;
}

// entry n is true iff gcd(n, P) = 1; exactly phi(P) entries are true.
inline std::vector<uint8_t> coprime_pattern(const PrimeBasis& basis) {
    if (basis.P > kPatternBudget)
        throw resource_error("P = " + basis.P.get_str() + " exceeds pattern budget " +
                             std::to_string(kPatternBudget));
    uint64_t P = basis.P.get_ui();
    std::vector<uint8_t> pat(P, 1);
    for (uint64_t p : basis.primes.primes)
        for (uint64_t m = 0; m < P; m += p) pat[m] = 0;
    return pat;
}

struct WindowCounts {
    PrimeBasis basis;
    std::vector<uint64_t> g;  // g[n] = #{0 <= m <= h : gcd(n+m, P) = 1}
};

// O(P) via periodicity: with h+1 = q*P + s, g(n) = q*phi(P) plus the number
// of coprime residues in the cyclic window [n, n+s), maintained by sliding.
inline WindowCounts window_counts(const PrimeBasis& basis) {
    std::vector<uint8_t> pat = coprime_pattern(basis);
    uint64_t P = pat.size();
    uint64_t phi = 0;
    for (uint8_t b : pat) phi += b;

    uint64_t hp1 = basis.h + 1;
    uint64_t q = hp1 / P;
    uint64_t s = hp1 % P;

    WindowCounts out;
    out.basis = basis;
    out.g.resize(P);
    uint64_t w = 0;
    for (uint64_t j = 0; j < s; ++j) w += pat[j];
    for (uint64_t n = 0; n < P; ++n) {
        out.g[n] = q * phi + w;
        w -= pat[n];
        w += pat[(n + s) % P];
    }
    return out;
}

namespace detail {

inline mpz_class mpz_from_u128(unsigned __int128 v) {
    mpz_class hi(static_cast<unsigned long>(v >> 64));
    mpz_class lo(static_cast<unsigned long>(v));
    return (hi << 64) + lo;
}

inline void check_r(int r) {
    if (r < 1 || r > kMaxR)
        throw usage_error("r must be in [1, " + std::to_string(kMaxR) + "]");
}

// True when sum_n f(g(n)) with f a product of r factors <= g_max fits __int128.
inline bool fits_u128(const std::vector<uint64_t>& g, int r) {
    uint64_t g_max = 0;
    for (uint64_t v : g) g_max = std::max(g_max, v);
    double bits = r * std::log2(static_cast<double>(g_max) + 2.0) +
                  std::log2(static_cast<double>(g.size()) + 2.0);
    return bits < 120.0;
}

} // namespace detail

// B' = (1/P) sum_n g(n)^r; equals the sum over all tuples in [0,h]^r of the
// bare truncated product.
inline ExactRational b_prime_moment(const WindowCounts& counts, int r) {
    detail::check_r(r);
    mpz_class sum;
    if (detail::fits_u128(counts.g, r)) {
        unsigned __int128 acc = 0;
        for (uint64_t v : counts.g) {
            unsigned __int128 t = 1;
            for (int k = 0; k < r; ++k) t *= v;
            acc += t;
        }
        sum = detail::mpz_from_u128(acc);
    } else {
        mpz_class t;
        for (uint64_t v : counts.g) {
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(v),
                          static_cast<unsigned long>(r));
            sum += t;
        }
    }
    return make_rational(sum, counts.basis.P);
}

// B = (1/P) sum_n g(n)(g(n)-1)...(g(n)-r+1); equals the sum over distinct
// ordered tuples. Windows with g(n) < r contribute a zero factor.
inline ExactRational b_distinct_falling_moment(const WindowCounts& counts, int r) {
    detail::check_r(r);
    mpz_class sum;
    if (detail::fits_u128(counts.g, r)) {
        unsigned __int128 acc = 0;
        for (uint64_t v : counts.g) {
            if (v < static_cast<uint64_t>(r)) continue;
            unsigned __int128 t = 1;
            for (int k = 0; k < r; ++k) t *= (v - static_cast<uint64_t>(k));
            acc += t;
        }
        sum = detail::mpz_from_u128(acc);
    } else {
        for (uint64_t v : counts.g) {
            if (v < static_cast<uint64_t>(r)) continue;
            mpz_class t = 1;
            for (int k = 0; k < r; ++k) t *= static_cast<unsigned long>(v - uint64_t(k));
            sum += t;
        }
    }
    return make_rational(sum, counts.basis.P);
}

// Literal sum over tuples of the bare truncated product: the brute-force
// oracle for the moment identities. Budget: (h+1)^r <= 1e8 tuples.
inline ExactRational b_direct(const PrimeBasis& basis, int r, bool distinct) {
    detail::check_r(r);
    mpz_class count;
    mpz_ui_pow_ui(count.get_mpz_t(), static_cast<unsigned long>(basis.h + 1),
                  static_cast<unsigned long>(r));
    if (count > kDirectBudget)
        throw resource_error("(h+1)^r = " + count.get_str() + " exceeds direct budget " +
                             std::to_string(kDirectBudget));
    mpz_class two96 = mpz_class(1) << 96;
    if (basis.P >= two96) throw resource_error("P too large for direct accumulation");

    const auto& ps = basis.primes.primes;
    std::vector<uint64_t> idx(static_cast<size_t>(r), 0);
    std::vector<uint64_t> res(static_cast<size_t>(r));
    unsigned __int128 acc = 0;
    for (;;) {
        bool skip = false;
        if (distinct)
            for (int i = 0; i < r && !skip; ++i)
                for (int j = i + 1; j < r; ++j)
                    if (idx[i] == idx[j]) { skip = true; break; }
        if (!skip) {
            unsigned __int128 term = 1;
            for (uint64_t p : ps) {
                for (int i = 0; i < r; ++i) res[i] = idx[i] % p;
                std::sort(res.begin(), res.end());
                uint64_t nu = 1;
                for (int i = 1; i < r; ++i) nu += (res[i] != res[i - 1]);
                term *= (p - nu);
                if (term == 0) break;
            }
            acc += term;
        }
        int pos = r - 1;
        while (pos >= 0 && idx[pos] == basis.h) idx[pos--] = 0;
        if (pos < 0) break;
        ++idx[pos];
    }
    return make_rational(detail::mpz_from_u128(acc), basis.P);
}

enum class Strategy { direct, moment };

struct DecompositionReport {
    uint64_t h = 0;
    double y = 0.0;
    mpz_class P;
    int r = 1;
    ExactRational A_exact;     // prod_{p<=y} (1-1/p)^{-r}
    ExactRational B;           // distinct tuples
    ExactRational B_prime;     // all tuples
    ExactRational S_trunc;     // A_exact * B, the truncated Gallagher sum
    ExactRational main_term;   // h^r
    double ratio_to_hr = 0.0;  // S_trunc / h^r
};

inline DecompositionReport evaluate(const PrimeBasis& basis, int r, Strategy strategy) {
    detail::check_r(r);
    DecompositionReport rep;
    rep.h = basis.h;
    rep.y = basis.y;
    rep.P = basis.P;
    rep.r = r;
    mpz_class phi = euler_phi_squarefree(basis.primes);
    rep.A_exact = rational_pow(make_rational(basis.P, phi), static_cast<unsigned long>(r));
    if (strategy == Strategy::direct) {
        rep.B = b_direct(basis, r, /*distinct=*/true);
        rep.B_prime = b_direct(basis, r, /*distinct=*/false);
    } else {
        WindowCounts wc = window_counts(basis);
        rep.B = b_distinct_falling_moment(wc, r);
        rep.B_prime = b_prime_moment(wc, r);
    }
    rep.S_trunc = rep.A_exact * rep.B;
    mpz_class hr;
    mpz_ui_pow_ui(hr.get_mpz_t(), static_cast<unsigned long>(basis.h),
                  static_cast<unsigned long>(r));
    rep.main_term = make_rational(hr, mpz_class(1));
    rep.ratio_to_hr = rational_to_double(rep.S_trunc / rep.main_term);
    return rep;
}

// Interval containing, for every distinct tuple with offsets in [0, h], the
// ratio (full singular series) / (product truncated at y). At most
// K = floor(log(h^{r(r-1)/2}) / log(q)) primes p > y divide a pairwise
// difference product (q = least prime > y); each such factor lies in
// [1-(r-1)/q, (1-1/q)^{1-r}], and the remaining nu=r factors lie in
// [exp(-U(y)), 1].
inline Interval tail_enclosure_uniform(const PrimeBasis& basis, int r) {
    detail::check_r(r);
    if (r == 1) return {1.0L, 1.0L};
    if (!(basis.y > static_cast<double>(r)))
        throw usage_error("tail_enclosure_uniform requires y > r");

    uint64_t yfloor = static_cast<uint64_t>(std::floor(basis.y));
    PrimeList around = sieve_primes(2 * yfloor + 32);
    uint64_t q = 0;
    for (uint64_t p : around.primes)
        if (static_cast<double>(p) > basis.y) { q = p; break; }

    // K: upper bound on the number of primes > y dividing any difference product
    long double lh = std::log(static_cast<long double>(basis.h));
    for (int i = 0; i < 4; ++i) lh = ld_up(lh);
    long double num = ld_up(static_cast<long double>(r) * (r - 1) / 2.0L * lh);
    long double den = std::log(static_cast<long double>(q));
    for (int i = 0; i < 4; ++i) den = ld_down(den);
    uint64_t K = (num <= 0.0L) ? 0 : static_cast<uint64_t>(std::floor(num / den));

    long double U = tail_log_upper_bound(r, yfloor);
    long double lo = exp_interval({-U, -U}).lo;
    long double hi = 1.0L;
    if (K > 0) {
        detail::MpfrReal t(128), m(128);
        // lo *= (1 - (r-1)/q)^K, rounded down
        mpfr_set_ui(t.get(), static_cast<unsigned long>(q - (r - 1)), MPFR_RNDD);
        mpfr_div_ui(t.get(), t.get(), static_cast<unsigned long>(q), MPFR_RNDD);
        mpfr_pow_ui(t.get(), t.get(), static_cast<unsigned long>(K), MPFR_RNDD);
        lo = ld_down(lo * mpfr_get_ld(t.get(), MPFR_RNDD));
        // hi = (q/(q-1))^{(r-1)K}, rounded up
        mpfr_set_ui(m.get(), static_cast<unsigned long>(q), MPFR_RNDU);
        mpfr_div_ui(m.get(), m.get(), static_cast<unsigned long>(q - 1), MPFR_RNDU);
        mpfr_pow_ui(m.get(), m.get(), static_cast<unsigned long>((r - 1) * K), MPFR_RNDU);
        hi = mpfr_get_ld(m.get(), MPFR_RNDU);
    }
    return {lo, hi};
}

} // namespace singseries
