#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "singseries/arith.hpp"
#include "singseries/prime_stream.hpp"
#include "singseries/rational.hpp"

using namespace singseries;

namespace {

// independent oracle: trial division
std::vector<uint64_t> trial_primes(uint64_t limit) {
    std::vector<uint64_t> out;
    for (uint64_t n = 2; n <= limit; ++n) {
        bool prime = true;
        for (uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) { prime = false; break; }
        if (prime) out.push_back(n);
    }
    return out;
}

} // namespace

TEST_CASE("sieve_primes basic values") {
    CHECK(sieve_primes(10).primes == std::vector<uint64_t>{2, 3, 5, 7});
    CHECK(sieve_primes(1).primes.empty());
    CHECK(sieve_primes(0).primes.empty());
    CHECK(sieve_primes(2).primes == std::vector<uint64_t>{2});
    CHECK(sieve_primes(100).primes.size() == 25);  // trial-division count
    CHECK(sieve_primes(100).primes == trial_primes(100));
}

TEST_CASE("sieve_primes matches trial division on sampled limits") {
    for (uint64_t L : {0ull, 1ull, 2ull, 3ull, 4ull, 30ull, 1000ull, 4096ull, 10000ull})
        CHECK(sieve_primes(L).primes == trial_primes(L));
    // spot-check a large limit by count only (pi(10^6) = 78498)
    CHECK(sieve_primes(1'000'000).primes.size() == 78498);
}

TEST_CASE("sieve_primes enforces its budget") {
    CHECK_THROWS_AS(sieve_primes(kSieveLimit + 1), resource_error);
}

TEST_CASE("primorial") {
    CHECK(primorial(sieve_primes(3)) == 6);
    CHECK(primorial(sieve_primes(5)) == 30);
    CHECK(primorial(sieve_primes(1)) == 1);
    // independent multiply
    mpz_class expect = mpz_class(2) * 3 * 5 * 7 * 11 * 13;
    CHECK(primorial(sieve_primes(13)) == expect);
    CHECK(expect == 30030);
}

TEST_CASE("euler_phi_squarefree closed values") {
    CHECK(euler_phi_squarefree(sieve_primes(3)) == 2);
    CHECK(euler_phi_squarefree(sieve_primes(1)) == 1);
    CHECK(euler_phi_squarefree(sieve_primes(5)) == 8);
}

TEST_CASE("euler_phi_squarefree counts coprime residues") {
    for (uint64_t y : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull}) {
        PrimeList ps = sieve_primes(y);
        uint64_t P = primorial(ps).get_ui();
        REQUIRE(P <= 1'000'000);
        uint64_t count = 0;
        for (uint64_t n = 0; n < P; ++n)
            if (std::gcd(n, P) == 1) ++count;
        CHECK(euler_phi_squarefree(ps) == count);
    }
}

TEST_CASE("squarefree_divisors examples") {
    auto divs = squarefree_divisors(sieve_primes(3));
    REQUIRE(divs.size() == 4);
    CHECK(divs[0].d == 1);
    CHECK(divs[0].mu == 1);
    CHECK(divs[1].d == 2);
    CHECK(divs[1].mu == -1);
    CHECK(divs[2].d == 3);
    CHECK(divs[2].mu == -1);
    CHECK(divs[3].d == 6);
    CHECK(divs[3].mu == 1);

    auto none = squarefree_divisors(sieve_primes(1));
    REQUIRE(none.size() == 1);
    CHECK(none[0].d == 1);
    CHECK(none[0].mu == 1);
}

TEST_CASE("squarefree_divisors mu sums and sizes") {
    for (uint64_t y : {1ull, 2ull, 3ull, 5ull, 7ull, 13ull, 19ull}) {
        PrimeList ps = sieve_primes(y);
        auto divs = squarefree_divisors(ps);
        CHECK(divs.size() == (size_t(1) << ps.primes.size()));
        long musum = 0;
        for (const auto& d : divs) musum += d.mu;
        CHECK(musum == (ps.primes.empty() ? 1 : 0));
        for (size_t i = 1; i < divs.size(); ++i) CHECK(divs[i - 1].d < divs[i].d);
    }
}

TEST_CASE("prime_factors") {
    CHECK(prime_factors(432) == std::vector<uint64_t>{2, 3});
    CHECK(prime_factors(97) == std::vector<uint64_t>{97});
    CHECK(prime_factors(1).empty());
    // prime and prime-square cofactors past the trial-division bound
    CHECK(prime_factors(uint64_t(1'000'003) * 1'000'003) == std::vector<uint64_t>{1'000'003});
    CHECK(prime_factors(2 * uint64_t(1'000'003)) == std::vector<uint64_t>{2, 1'000'003});
    // two distinct primes past the bound cannot be separated
    CHECK_THROWS_AS(prime_factors(uint64_t(1'000'003) * 1'000'033), resource_error);
}

TEST_CASE("is_prime") {
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
}

TEST_CASE("for_primes_in streams exactly the primes in range") {
    auto collect = [](uint64_t lo, uint64_t hi) {
        std::vector<uint64_t> out;
        for_primes_in(lo, hi, [&](uint64_t p) { out.push_back(p); });
        return out;
    };
    CHECK(collect(0, 10) == std::vector<uint64_t>{2, 3, 5, 7});
    CHECK(collect(2, 3) == std::vector<uint64_t>{3});
    CHECK(collect(10, 10) == std::vector<uint64_t>{});
    CHECK(collect(7, 7) == std::vector<uint64_t>{});

    // cross segment boundaries against the dense sieve
    PrimeList ref = sieve_primes(5'000'000);
    std::vector<uint64_t> expect;
    for (uint64_t p : ref.primes)
        if (p > 1000) expect.push_back(p);
    CHECK(collect(1000, 5'000'000) == expect);

    uint64_t count = 0, last = 0;
    for_primes_in(0, 5'000'000, [&](uint64_t p) { ++count; last = p; });
    CHECK(count == ref.primes.size());
    CHECK(last == ref.primes.back());
}

TEST_CASE("ExactRational inverse product and normalization") {
    std::mt19937_64 gen(42);
    for (int i = 0; i < 200; ++i) {
        long num = static_cast<long>(gen() % 2000) - 1000;
        long den = static_cast<long>(gen() % 999) + 1;
        if (num == 0) num = 7;
        ExactRational q = make_rational(num, den);
        ExactRational inv = make_rational(den, num);
        CHECK(q * inv == 1);
        // canonical: gcd(num, den) = 1, den > 0
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        CHECK(g == 1);
        CHECK(q.get_den() > 0);
        // normalization idempotent
        ExactRational again = make_rational(q.get_num(), q.get_den());
        CHECK(again == q);
        CHECK(again.get_num() == q.get_num());
    }
}

TEST_CASE("decimal_string round-trips through parse_decimal") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 200; ++i) {
        ExactRational q = make_rational(static_cast<long>(gen() % 1'000'000),
                                        static_cast<long>(gen() % 9999) + 1);
        std::string s = decimal_string(q, 12);
        CHECK(decimal_string(parse_decimal(s), 12) == s);
    }
    CHECK(decimal_string(make_rational(3, 2), 12) == "1.500000000000");
    CHECK(decimal_string(make_rational(1, 3), 6) == "0.333333");
    CHECK(decimal_string(make_rational(2, 3), 6) == "0.666667");
    CHECK(decimal_string(make_rational(-1, 8), 3) == "-0.125");
    CHECK(decimal_string(ExactRational(0), 3) == "0.000");
}
