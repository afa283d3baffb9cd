#pragma once

// Directed decimal rendering: lower endpoints are printed rounded down and
// upper endpoints rounded up, so a printed interval still encloses the value.

#include <mpfr.h>
#include <gmpxx.h>

#include <string>

#include "illum/enclosure.hpp"

namespace illum {

enum class Direction { down, up };

/// v rounded to `digits` decimals in the given direction.
inline std::string to_decimal(mpfr_srcptr v, int digits, Direction dir) {
    if (digits < 0 || digits > 200) throw ContractError("decimal digit count out of range");
    if (!mpfr_number_p(v)) throw DomainError("cannot print a non-finite value");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
    const mpfr_rnd_t rnd = dir == Direction::up ? MPFR_RNDU : MPFR_RNDD;
    detail::MpfrScratch t(mpfr_get_prec(v) + 4 * digits + 8);
    mpfr_mul_z(t, v, scale.get_mpz_t(), rnd);
    mpz_class q;
    mpfr_get_z(q.get_mpz_t(), t, rnd);  // ceil / floor

    const bool negative = q < 0;
    if (negative) q = -q;
    std::string s = q.get_str();
    if (digits > 0) {
        if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, static_cast<std::size_t>(digits) + 1 - s.size(), '0');
        s.insert(s.size() - static_cast<std::size_t>(digits), ".");
    }
    return negative ? "-" + s : s;
}

inline std::string decimal_lo(const Enclosure& e, int digits = 6) { return to_decimal(e.lo(), digits, Direction::down); }
inline std::string decimal_hi(const Enclosure& e, int digits = 6) { return to_decimal(e.hi(), digits, Direction::up); }

/// floor(v) as an exact integer.
inline mpz_class floor_to_integer(mpfr_srcptr v) {
    mpz_class q;
    mpfr_get_z(q.get_mpz_t(), v, MPFR_RNDD);
    return q;
}

}  // namespace illum
