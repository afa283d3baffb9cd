#pragma once

// Closed-form constants of the unit ball, the regular simplex circumscribed
// about it, and the cube [-1, 1]^n.  Combinatorial factors are exact GMP
// integers; each quantity picks up at most one irrational factor (sqrt(pi) or
// the square root of an integer).

#include <gmpxx.h>

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "illum/enclosure.hpp"

namespace illum {

class Dimension {
public:
    static constexpr int kMax = 64;

    explicit Dimension(int n) : n_(n) {
        if (n < 1 || n > kMax)
            throw ContractError("dimension must lie in [1, 64], got " + std::to_string(n));
    }
    constexpr int value() const { return n_; }
    constexpr operator int() const { return n_; }

private:
    int n_;
};

enum class BodyClass { general, symmetric };

inline std::string_view to_string(BodyClass c) {
    return c == BodyClass::general ? "general" : "symmetric";
}

inline mpz_class factorial(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline mpz_class binomial(unsigned long n, unsigned long k) {
    if (k > n) throw ContractError("binomial requires k <= n");
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

/// Gamma(two_m / 2).  Integer arguments are exact factorials; half-integers
/// use Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!).
inline Enclosure gamma_half_integer(unsigned long two_m, Precision p = {}) {
    if (two_m == 0) throw ContractError("gamma_half_integer needs a positive argument");
    if (two_m % 2 == 0) return Enclosure::point(factorial(two_m / 2 - 1), p);
    const unsigned long k = (two_m - 1) / 2;
    mpz_class four_k;
    mpz_ui_pow_ui(four_k.get_mpz_t(), 4, k);
    const Precision wp(p.bits() + 16);
    Enclosure coeff = Enclosure::rational(factorial(2 * k), four_k * factorial(k), wp);
    Enclosure r = coeff * illum::sqrt(pi_enclosure(wp));
    Enclosure out(p);
    mpfr_set(out.lo_mut(), r.lo(), MPFR_RNDD);
    mpfr_set(out.hi_mut(), r.hi(), MPFR_RNDU);
    return out;
}

/// |B_2^n| = pi^(n/2) / Gamma(n/2 + 1).  n = 0 gives 1 (the point).
inline Enclosure ball_volume(int n, Precision p = {}) {
    if (n < 0) throw ContractError("ball_volume needs n >= 0");
    if (n == 0) return Enclosure::point(1, p);
    const Precision wp(p.bits() + 16);
    const Enclosure pi = pi_enclosure(wp);
    Enclosure r(wp);
    if (n % 2 == 0) {
        r = pow(pi, n / 2) / gamma_half_integer(static_cast<unsigned long>(n) + 2, wp);
    } else {
        // the sqrt(pi) in Gamma(n/2 + 1) cancels: 2^n ((n-1)/2)! / n! * pi^((n-1)/2)
        const auto m = static_cast<unsigned long>(n);
        mpz_class two_n;
        mpz_ui_pow_ui(two_n.get_mpz_t(), 2, m);
        const mpq_class c(two_n * factorial((m - 1) / 2), factorial(m));
        r = Enclosure::rational(c, wp) * pow(pi, (n - 1) / 2);
    }
    Enclosure out(p);
    mpfr_set(out.lo_mut(), r.lo(), MPFR_RNDD);
    mpfr_set(out.hi_mut(), r.hi(), MPFR_RNDU);
    return out;
}

namespace detail {

/// m^(e/2) as (exact integer part) * sqrt(m) when e is odd.
inline Enclosure half_power(unsigned long m, unsigned long e, Precision p) {
    mpz_class whole;
    mpz_ui_pow_ui(whole.get_mpz_t(), m, e / 2);
    Enclosure r = Enclosure::point(whole, p);
    if (e % 2 == 1) r = r * illum::sqrt(Enclosure::point(static_cast<long>(m), p));
    return r;
}

inline Enclosure round_to(const Enclosure& r, Precision p) {
    Enclosure out(p);
    mpfr_set(out.lo_mut(), r.lo(), MPFR_RNDD);
    mpfr_set(out.hi_mut(), r.hi(), MPFR_RNDU);
    return out;
}

}  // namespace detail

/// W_0 of the regular simplex whose inscribed ball is B_2^n:
/// n^(n/2) (n+1)^((n+1)/2) / n!.
inline Enclosure simplex_volume_bound(Dimension dim, Precision p = {}) {
    const auto n = static_cast<unsigned long>(dim.value());
    const Precision wp(p.bits() + 16);
    Enclosure r = detail::half_power(n, n, wp) * detail::half_power(n + 1, n + 1, wp) /
                  Enclosure::point(factorial(n), wp);
    return detail::round_to(r, p);
}

struct CubeConstants {
    Enclosure w0;           // 2^n
    Enclosure wn_minus_1;   // 2 |B_2^(n-1)|
};

inline CubeConstants cube_constants(Dimension dim, Precision p = {}) {
    mpz_class two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, static_cast<unsigned long>(dim.value()));
    return {Enclosure::point(two_n, p), 2 * ball_volume(dim.value() - 1, p)};
}

/// sum_j binom(n, j) W_j, accumulated in ascending j.
inline Enclosure steiner_sum(Dimension dim, std::span<const Enclosure> w) {
    const int n = dim.value();
    if (static_cast<int>(w.size()) != n + 1)
        throw ContractError("steiner_sum needs n+1 = " + std::to_string(n + 1) + " entries, got " +
                            std::to_string(w.size()));
    Precision p = w[0].precision();
    for (const auto& e : w) {
        if (!e.nonnegative()) throw ContractError("steiner_sum entries must be nonnegative");
        if (e.bits() > p.bits()) p = e.precision();
    }
    Enclosure acc(p);
    for (int j = 0; j <= n; ++j)
        acc = acc + Enclosure::point(binomial(static_cast<unsigned long>(n), static_cast<unsigned long>(j)), p) * w[j];
    return acc;
}

}  // namespace illum
