#include <catch2/catch_amalgamated.hpp>

#include <mpfr.h>

#include <random>
#include <set>

#include "singseries/singular.hpp"

using namespace singseries;

namespace {

OffsetTuple T(std::initializer_list<uint64_t> v) { return OffsetTuple(std::vector<uint64_t>(v)); }

// independent nu oracle: enumerate residues into a set
int nu_brute(const std::vector<uint64_t>& offsets, uint64_t p) {
    std::set<uint64_t> s;
    for (uint64_t h : offsets) s.insert(h % p);
    return static_cast<int>(s.size());
}

// independent factoring oracle for difference supports
std::set<uint64_t> support_brute(const std::vector<uint64_t>& offsets) {
    std::set<uint64_t> out;
    for (size_t i = 0; i < offsets.size(); ++i)
        for (size_t j = i + 1; j < offsets.size(); ++j) {
            uint64_t d = offsets[j] - offsets[i];
            for (uint64_t p = 2; p * p <= d; ++p)
                while (d % p == 0) { out.insert(p); d /= p; }
            if (d > 1) out.insert(d);
        }
    return out;
}

} // namespace

TEST_CASE("OffsetTuple validation and sorting") {
    CHECK_THROWS_AS(OffsetTuple({}), usage_error);
    CHECK_THROWS_AS(T({0, 2, 2}), usage_error);
    OffsetTuple t(std::vector<uint64_t>{6, 0, 2});
    CHECK(t.offsets() == std::vector<uint64_t>{0, 2, 6});
    CHECK(t.r() == 3);
}

TEST_CASE("nu_p examples") {
    CHECK(nu_p(T({0, 2, 4}), 3) == 3);  // residues {0,2,1}
    CHECK(nu_p(T({0, 2}), 2) == 1);     // residues {0,0}; consistent with local_factor = 2
    CHECK(nu_p(T({0, 1}), 2) == 2);     // residues {0,1}
    CHECK(nu_p(T({0, 6, 12}), 7) == nu_brute({0, 6, 12}, 7));
    CHECK(nu_p(T({0, 6, 12}), 7) == 3);
    CHECK(nu_p(T({0, 6, 12}), 3) == 1);
    CHECK_THROWS_AS(nu_p(T({0, 2}), 6), usage_error);
}

TEST_CASE("nu_p equals r past the largest pairwise difference") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 50; ++i) {
        int r = 2 + static_cast<int>(gen() % 4);
        std::set<uint64_t> s;
        while (static_cast<int>(s.size()) < r) s.insert(gen() % 200);
        std::vector<uint64_t> off(s.begin(), s.end());
        OffsetTuple t(off);
        uint64_t maxdiff = off.back() - off.front();
        for (uint64_t p : sieve_primes(5 * maxdiff + 100).primes)
            if (p > maxdiff) {
                CHECK(nu_p(t, p) == r);
                break;
            }
    }
}

TEST_CASE("difference_support examples") {
    CHECK(difference_support(T({0, 2, 6})) == std::vector<uint64_t>{2, 3});
    CHECK(difference_support(T({0, 1})).empty());
    CHECK(difference_support(T({5})).empty());
    auto sup = difference_support(T({0, 4, 6, 10}));
    CHECK(sup == std::vector<uint64_t>{2, 3, 5});
    std::set<uint64_t> brute = support_brute({0, 4, 6, 10});
    CHECK(std::set<uint64_t>(sup.begin(), sup.end()) == brute);
}

TEST_CASE("difference_support matches factoring oracle on random tuples") {
    std::mt19937_64 gen(13);
    for (int i = 0; i < 30; ++i) {
        int r = 2 + static_cast<int>(gen() % 3);
        std::set<uint64_t> s;
        while (static_cast<int>(s.size()) < r) s.insert(gen() % 500);
        std::vector<uint64_t> off(s.begin(), s.end());
        auto sup = difference_support(OffsetTuple(off));
        CHECK(std::set<uint64_t>(sup.begin(), sup.end()) == support_brute(off));
    }
}

TEST_CASE("local_factor examples") {
    CHECK(local_factor(T({0, 2}), 2).factor == 2);
    CHECK(local_factor(T({0, 2}), 3).factor == make_rational(3, 4));
    CHECK(local_factor(T({0, 1}), 2).factor == 0);
    CHECK(local_factor(T({0, 1}), 2).nu == 2);
    CHECK_THROWS_AS(local_factor(T({0, 2}), 4), usage_error);
}

TEST_CASE("truncated_product examples and factor identity") {
    CHECK(truncated_product(T({0, 2}), 3, true) == make_rational(3, 2));
    CHECK(truncated_product(T({0, 2}), 3, false) == make_rational(1, 6));
    CHECK(truncated_product(T({0, 1}), 2, true) == 0);

    std::mt19937_64 gen(17);
    for (int i = 0; i < 20; ++i) {
        int r = 1 + static_cast<int>(gen() % 3);
        std::set<uint64_t> s;
        while (static_cast<int>(s.size()) < r) s.insert(gen() % 60);
        OffsetTuple t(std::vector<uint64_t>(s.begin(), s.end()));
        uint64_t y = 2 + gen() % 12;
        ExactRational prod(1);
        for (uint64_t p : sieve_primes(y).primes) prod *= local_factor(t, p).factor;
        CHECK(truncated_product(t, y, true) == prod);
    }
}

TEST_CASE("is_admissible examples") {
    CHECK(is_admissible(T({0, 2})));
    CHECK_FALSE(is_admissible(T({0, 1})));
    CHECK_FALSE(is_admissible(T({0, 2, 4})));  // nu_3 = 3
    CHECK(is_admissible(T({0, 2, 6})));
    CHECK(is_admissible(T({0})));
}

TEST_CASE("singular_series exact degenerate cases") {
    SingularSeriesValue one = singular_series(T({0}), 1e-12);
    CHECK(one.truncated == 1);
    CHECK(one.value_lo == 1.0L);
    CHECK(one.value_hi == 1.0L);

    SingularSeriesValue shifted = singular_series(T({4}), 1e-12);
    CHECK(shifted.value_lo == 1.0L);

    SingularSeriesValue zero = singular_series(T({0, 1}), 1e-3);
    CHECK(zero.truncated == 0);
    CHECK(zero.value_lo == 0.0L);
    CHECK(zero.value_hi == 0.0L);

    SingularSeriesValue zero3 = singular_series(T({0, 2, 4}), 1e-3);
    CHECK(zero3.value_hi == 0.0L);
}

TEST_CASE("singular_series twin tuple matches the high-precision oracle") {
    SingularSeriesValue v = singular_series(T({0, 2}), 1e-8);
    CHECK(v.truncated == make_rational(3, 2));
    CHECK(v.value_hi - v.value_lo < 1e-8L * v.value_hi);
    CHECK(v.value_hi - v.value_lo < 1e-8L);
    // pinned decimal and the oracle's certified interval
    CHECK(v.value_lo <= 1.3203236316L);
    CHECK(1.3203236316L <= v.value_hi);
    CHECK(v.value_lo <= 1.32032363169373L);
    CHECK(1.32032363169373L <= v.value_hi);
    // relative contract at a looser eps too
    SingularSeriesValue w = singular_series(T({0, 2}), 1e-4);
    CHECK(w.value_hi - w.value_lo < 1e-4L * w.value_hi);
    CHECK(w.value_lo <= 1.3203236316L);
    CHECK(1.3203236316L <= w.value_hi);
}

TEST_CASE("singular_series respects shift invariance and known constants") {
    // S(0,4) = S(0,2) = 2*C2; S(0,6) = 2*S(0,2)  [factor (p-1)/(p-2) at p=3]
    SingularSeriesValue a = singular_series(T({0, 2}), 1e-9);
    SingularSeriesValue b = singular_series(T({1, 3}), 1e-9);
    CHECK(a.truncated == b.truncated);
    CHECK(a.value_lo == b.value_lo);
    SingularSeriesValue c = singular_series(T({0, 6}), 1e-9);
    CHECK(c.value_lo > 2.0L * a.value_lo * 0.9999999L);
    CHECK(c.value_hi < 2.0L * a.value_hi * 1.0000001L);
}

TEST_CASE("singular_series interval contains extended truncations") {
    // every exact truncation past the enclosure bound must land inside
    OffsetTuple t = T({0, 2, 6});
    SingularSeriesValue v = singular_series(t, 1e-3);
    REQUIRE(v.enclosure_bound >= 1000);
    REQUIRE(v.enclosure_bound <= 4000);  // eps 1e-3 stays at the ladder floor
    for (uint64_t extra : {1ull, 97ull, 501ull, 1999ull}) {
        ExactRational part = truncated_product(t, v.enclosure_bound + extra, true);
        Interval pi = rational_interval(part);
        CHECK(v.value_lo <= pi.lo);
        CHECK(pi.hi <= v.value_hi);
    }
}

TEST_CASE("singular_series nests as eps shrinks") {
    OffsetTuple t = T({0, 4, 6});
    SingularSeriesValue coarse = singular_series(t, 1e-4);
    SingularSeriesValue fine = singular_series(t, 1e-7);
    CHECK(coarse.value_lo <= fine.value_lo);
    CHECK(fine.value_hi <= coarse.value_hi);
    CHECK(fine.value_hi - fine.value_lo < 1e-7L * fine.value_hi);
}

TEST_CASE("singular_series eps beyond the stream budget is a resource error") {
    CHECK_THROWS_AS(singular_series(T({0, 2}), 1e-13), resource_error);
    CHECK_THROWS_AS(singular_series(T({0, 2}), -1.0), usage_error);
}

TEST_CASE("tail_log_upper_bound dominates high-precision direct products") {
    // direct product over (T, 1e6] at 256-bit precision; its -log is a lower
    // bound on the true tail sum, so U(T) must exceed it; U(T) should also
    // stay within a small factor of it (observed ~1.7).
    PrimeList ps = sieve_primes(1'000'000);
    for (int r : {2, 3}) {
        for (uint64_t T : {100ull, 1000ull, 10000ull}) {
            mpfr_t acc, t, num, den;
            mpfr_inits2(256, acc, t, num, den, (mpfr_ptr)0);
            mpfr_set_ui(acc, 1, MPFR_RNDN);
            for (uint64_t p : ps.primes) {
                if (p <= T) continue;
                mpfr_set_ui(num, p - r, MPFR_RNDN);
                for (int k = 1; k < r; ++k) mpfr_mul_ui(num, num, p, MPFR_RNDN);
                mpfr_set_ui(den, p - 1, MPFR_RNDN);
                for (int k = 1; k < r; ++k) mpfr_mul_ui(den, den, p - 1, MPFR_RNDN);
                mpfr_div(t, num, den, MPFR_RNDN);
                mpfr_mul(acc, acc, t, MPFR_RNDN);
            }
            mpfr_log(acc, acc, MPFR_RNDN);
            long double direct = -mpfr_get_ld(acc, MPFR_RNDN);
            mpfr_clears(acc, t, num, den, (mpfr_ptr)0);

            long double U = tail_log_upper_bound(r, T);
            CHECK(U >= direct);
            CHECK(U <= 3.0L * direct);
        }
    }
}

TEST_CASE("nu_r_factor_product envelope brackets an exact small product") {
    // exact rational product over (2, 200] for r=2 vs the float envelope
    ExactRational exact(1);
    for (uint64_t p : sieve_primes(200).primes) {
        if (p == 2) continue;
        exact *= make_rational(mpz_class((long)(p - 2)) * (long)p,
                               mpz_class((long)(p - 1)) * (long)(p - 1));
    }
    Interval env = detail::nu_r_factor_product(2, 2, 200);
    Interval ex = rational_interval(exact);
    CHECK(env.lo <= ex.lo);
    CHECK(ex.hi <= env.hi);
    CHECK(env.width() < 1e-12L);
}
