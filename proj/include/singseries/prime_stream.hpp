#pragma once

// Segmented prime enumeration for tail products. This deliberately goes past
// the dense-sieve budget of sieve_primes: it streams primes in (lo, hi] with
// O(segment) memory, ascending, without materializing them.

#include <cstdint>
#include <vector>

#include "singseries/arith.hpp"

namespace singseries {

// Largest bound the tail machinery will stream to. Chosen so p*p and
// (p-1)^2 stay exactly representable in a 64-bit significand.
inline constexpr uint64_t kStreamLimit = uint64_t(4096) * 1'000'000;

template <class F>
void for_primes_in(uint64_t lo_excl, uint64_t hi_incl, F&& f) {
    if (hi_incl <= lo_excl) return;
    if (lo_excl < 2 && hi_incl >= 2) f(uint64_t(2));

    uint64_t root = 2;
    while (root * root < hi_incl) ++root;  // hi <= 4.1e9 so this is cheap enough
    PrimeList base = sieve_primes(root);

    constexpr uint64_t kSegOdds = 1u << 20;  // odds per segment (2 MiB span)
    std::vector<uint64_t> words(kSegOdds / 64);

    uint64_t start = lo_excl + 1;
    if (start < 3) start = 3;
    if (start % 2 == 0) ++start;

    for (uint64_t seg_lo = start; seg_lo <= hi_incl; seg_lo += 2 * kSegOdds) {
        uint64_t seg_hi = seg_lo + 2 * (kSegOdds - 1);  // last odd in segment
        if (seg_hi > hi_incl) seg_hi = hi_incl | 1;     // may exceed hi by one; filtered below
        std::fill(words.begin(), words.end(), 0);
        for (uint64_t p : base.primes) {
            if (p == 2) continue;
            if (p * p > seg_hi) break;
            uint64_t m = ((seg_lo + p - 1) / p) * p;  // first multiple >= seg_lo
            if (m < p * p) m = p * p;
            if (m % 2 == 0) m += p;
            for (; m <= seg_hi; m += 2 * p) {
                uint64_t i = (m - seg_lo) / 2;
                words[i >> 6] |= uint64_t(1) << (i & 63);
            }
        }
        uint64_t count = (seg_hi >= seg_lo) ? (seg_hi - seg_lo) / 2 + 1 : 0;
        for (uint64_t i = 0; i < count; ++i) {
            if ((words[i >> 6] >> (i & 63)) & 1) continue;
            uint64_t n = seg_lo + 2 * i;
            if (n > hi_incl) break;
            f(n);
        }
    }
}

} // namespace singseries
