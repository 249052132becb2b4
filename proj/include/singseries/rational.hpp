#pragma once

// Exact rational values. All identity-bearing quantities in this library are
// ExactRational; floating point only appears in reports and in enclosure
// endpoints. mpq_class already maintains the invariants we need: canonical
// form (lowest terms) and positive denominator.

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "singseries/errors.hpp"

namespace singseries {

using ExactRational = mpq_class;

inline ExactRational make_rational(const mpz_class& num, const mpz_class& den) {
    ExactRational q(num, den);
    q.canonicalize();
    return q;
}

inline ExactRational make_rational(long num, long den = 1) {
    return make_rational(mpz_class(num), mpz_class(den));
}

// q^e for small nonnegative e.
inline ExactRational rational_pow(const ExactRational& q, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), q.get_den().get_mpz_t(), e);
    return make_rational(num, den);
}

// Fixed-point decimal rendering with `frac_digits` fractional digits,
// rounded half away from zero. Deterministic; used by all report formats.
inline std::string decimal_string(const ExactRational& q, int frac_digits = 12) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    mpz_class num = abs(q.get_num()) * scale;
    mpz_class quot, rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(), q.get_den().get_mpz_t());
    if (2 * rem >= q.get_den()) quot += 1;
    mpz_class ipart = quot / scale;
    mpz_class fpart = quot % scale;
    std::string frac = fpart.get_str();
    frac.insert(0, static_cast<size_t>(frac_digits) - frac.size(), '0');
    std::string out;
    if (sgn(q) < 0 && quot != 0) out += '-';
    out += ipart.get_str();
    out += '.';
    out += frac;
    return out;
}

// Exact inverse of decimal_string's grammar: [-]digits.digits
inline ExactRational parse_decimal(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) {
        return make_rational(mpz_class(s, 10), mpz_class(1));
    }
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw usage_error("malformed decimal: " + s);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return make_rational(mpz_class(digits, 10), den);
}

} // namespace singseries
