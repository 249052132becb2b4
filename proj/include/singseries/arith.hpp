#pragma once

// Number-theoretic substrate: prime sieving, primorials, squarefree divisor
// enumeration with Mobius signs, and small primality/factoring helpers.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "singseries/errors.hpp"
#include "singseries/rational.hpp"

namespace singseries {

// Hard budgets. Sieving stops at 1e8; dense per-residue tables stop at 1e8
// entries; direct tuple enumeration stops at 2^27 tuples (the (h+1)^r oracle
// scale, sized to admit h = 10^4 at r = 2).
inline constexpr uint64_t kSieveLimit = 100'000'000;
inline constexpr uint64_t kPatternBudget = 100'000'000;
inline constexpr uint64_t kDirectBudget = uint64_t(1) << 27;

struct PrimeList {
    uint64_t limit = 0;                // inclusive sieve bound
    std::vector<uint64_t> primes;      // ascending, exactly the primes <= limit
};

// Eratosthenes bit sieve. limit < 2 yields an empty list.
inline PrimeList sieve_primes(uint64_t limit) {
    if (limit > kSieveLimit)
        throw resource_error("sieve limit " + std::to_string(limit) + " exceeds budget " +
                             std::to_string(kSieveLimit));
    PrimeList out;
    out.limit = limit;
    if (limit < 2) return out;
    std::vector<uint64_t> words((limit / 2) / 64 + 1, 0);  // bit i = odd number 2i+1 composite
    auto set = [&](uint64_t i) { words[i >> 6] |= uint64_t(1) << (i & 63); };
    auto get = [&](uint64_t i) { return (words[i >> 6] >> (i & 63)) & 1; };
    out.primes.push_back(2);
    for (uint64_t n = 3; n <= limit; n += 2) {
        if (get(n / 2)) continue;
        out.primes.push_back(n);
        if (n <= limit / n)
            for (uint64_t m = n * n; m <= limit; m += 2 * n) set(m / 2);
    }
    return out;
}

inline mpz_class primorial(const PrimeList& primes) {
    mpz_class p = 1;
    for (uint64_t q : primes.primes) p *= static_cast<unsigned long>(q);
    return p;
}

// prod (p-1) over the list; counts the residues mod primorial coprime to it.
inline mpz_class euler_phi_squarefree(const PrimeList& primes) {
    mpz_class p = 1;
    for (uint64_t q : primes.primes) p *= static_cast<unsigned long>(q - 1);
    return p;
}

struct SquarefreeDivisor {
    mpz_class d;
    int mu;  // (-1)^(number of prime factors)
};

// All 2^k subset products of the listed primes, ascending by d.
inline std::vector<SquarefreeDivisor> squarefree_divisors(const PrimeList& primes) {
    size_t k = primes.primes.size();
    if (k > 24)
        throw resource_error("squarefree divisor enumeration over " + std::to_string(k) +
                             " primes exceeds 2^24 budget");
    std::vector<SquarefreeDivisor> out;
    out.reserve(size_t(1) << k);
    out.push_back({mpz_class(1), +1});
    for (size_t i = 0; i < k; ++i) {
        size_t n = out.size();
        for (size_t j = 0; j < n; ++j)
            out.push_back({out[j].d * static_cast<unsigned long>(primes.primes[i]), -out[j].mu});
    }
    std::sort(out.begin(), out.end(),
              [](const SquarefreeDivisor& a, const SquarefreeDivisor& b) { return a.d < b.d; });
    return out;
}

inline bool is_prime(uint64_t n) {
    mpz_class z(static_cast<unsigned long>(n));
    return mpz_probab_prime_p(z.get_mpz_t(), 30) != 0;
}

// Distinct prime factors of n, ascending. Trial division by primes <= 1e6,
// then the cofactor is either a prime (accepted) or a composite with all
// factors > 1e6, which is past the trial-division budget.
inline std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> out;
    if (n < 2) return out;
    for (uint64_t p = 2; p <= 3; ++p)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    for (uint64_t p = 5, step = 2; p <= 1'000'000 && p * p <= n; p += step, step = 6 - step)
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    if (n > 1) {
        // No factor <= 1e6, so n <= 1e12 is necessarily prime.
        if (n > uint64_t(1'000'000) * 1'000'000 && !is_prime(n)) {
            uint64_t root = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
            while (root * root > n) --root;
            while ((root + 1) * (root + 1) <= n) ++root;
            if (root * root == n && is_prime(root)) {
                out.push_back(root);
                return out;
            }
            throw resource_error("cofactor " + std::to_string(n) +
                                 " is composite beyond trial-division budget");
        }
        out.push_back(n);
    }
    return out;
}

} // namespace singseries
