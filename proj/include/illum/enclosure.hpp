#pragma once

// Outward-rounded interval arithmetic on MPFR floats.
//
// Every Enclosure [lo, hi] is a pair of MPFR numbers.  Each operation rounds
// its lower endpoint toward -inf and its upper endpoint toward +inf, so the
// true value of a computation on values inside the operands always lies
// inside the result.  Rounding is per operation and never touches the FPU
// control word, which makes results bit-reproducible.

#include <mpfr.h>
#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "illum/errors.hpp"

namespace illum {

/// Working mantissa precision in bits.
class Precision {
public:
    static constexpr unsigned kDefaultBits = 128;
    static constexpr unsigned kMinBits = 53;

    constexpr Precision() = default;
    explicit Precision(unsigned bits) : bits_(bits) {
        if (bits < kMinBits || bits > 1u << 20)
            throw ContractError("precision must be at least 53 bits, got " + std::to_string(bits));
    }
    constexpr unsigned bits() const { return bits_; }
    Precision doubled() const { return Precision(bits_ * 2); }
    Precision times(unsigned k) const { return Precision(bits_ * k); }

    friend constexpr bool operator==(Precision, Precision) = default;

private:
    unsigned bits_ = kDefaultBits;
};

class Enclosure {
public:
    /// The point interval [0, 0].
    explicit Enclosure(Precision p = {}) {
        mpfr_init2(lo_, p.bits());
        mpfr_init2(hi_, p.bits());
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }

    Enclosure(const Enclosure& o) {
        mpfr_init2(lo_, mpfr_get_prec(o.lo_));
        mpfr_init2(hi_, mpfr_get_prec(o.hi_));
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Enclosure(Enclosure&& o) noexcept : Enclosure(Precision(Precision::kMinBits)) { swap(o); }
    Enclosure& operator=(Enclosure o) noexcept {
        swap(o);
        return *this;
    }
    ~Enclosure() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }
    void swap(Enclosure& o) noexcept {
        mpfr_swap(lo_, o.lo_);
        mpfr_swap(hi_, o.hi_);
    }

    static Enclosure point(long v, Precision p = {}) {
        Enclosure e(p);
        mpfr_set_si(e.lo_, v, MPFR_RNDD);
        mpfr_set_si(e.hi_, v, MPFR_RNDU);
        return e;
    }
    static Enclosure point(const mpz_class& v, Precision p = {}) {
        Enclosure e(p);
        mpfr_set_z(e.lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(e.hi_, v.get_mpz_t(), MPFR_RNDU);
        return e;
    }
    /// Exact binary64 value, widened outward if `p` is narrower than 53 bits.
    static Enclosure from_double(double v, Precision p = {}) {
        if (!std::isfinite(v)) throw DomainError("non-finite double");
        Enclosure e(p);
        mpfr_set_d(e.lo_, v, MPFR_RNDD);
        mpfr_set_d(e.hi_, v, MPFR_RNDU);
        return e;
    }
    static Enclosure rational(const mpq_class& q, Precision p = {}) {
        Enclosure e(p);
        mpfr_set_q(e.lo_, q.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(e.hi_, q.get_mpq_t(), MPFR_RNDU);
        return e;
    }
    static Enclosure rational(const mpz_class& num, const mpz_class& den, Precision p = {}) {
        if (den == 0) throw DomainError("rational with zero denominator");
        mpq_class q(num, den);
        q.canonicalize();
        return rational(q, p);
    }
    /// Decimal text such as "2.464801" or "5e-6", rounded outward.
    static Enclosure decimal(const std::string& text, Precision p = {}) {
        Enclosure e(p);
        char* end = nullptr;
        if (mpfr_strtofr(e.lo_, text.c_str(), &end, 10, MPFR_RNDD), end == text.c_str() || *end != '\0')
            throw ContractError("not a decimal number: '" + text + "'");
        mpfr_strtofr(e.hi_, text.c_str(), &end, 10, MPFR_RNDU);
        if (!mpfr_number_p(e.lo_) || !mpfr_number_p(e.hi_))
            throw ContractError("not a finite decimal number: '" + text + "'");
        return e;
    }
    /// [lo, hi] from two already-certified endpoint values.
    static Enclosure bounds(mpfr_srcptr lo, mpfr_srcptr hi, Precision p) {
        if (mpfr_nan_p(lo) || mpfr_nan_p(hi) || mpfr_cmp(lo, hi) > 0)
            throw ContractError("enclosure bounds out of order");
        Enclosure e(p);
        mpfr_set(e.lo_, lo, MPFR_RNDD);
        mpfr_set(e.hi_, hi, MPFR_RNDU);
        return e;
    }
    static Enclosure hull(const Enclosure& a, const Enclosure& b) {
        Enclosure e(Precision(std::max(a.bits(), b.bits())));
        mpfr_min(e.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(e.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return e;
    }

    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    mpfr_ptr lo_mut() { return lo_; }
    mpfr_ptr hi_mut() { return hi_; }

    unsigned bits() const {
        return static_cast<unsigned>(std::max(mpfr_get_prec(lo_), mpfr_get_prec(hi_)));
    }
    Precision precision() const { return Precision(bits()); }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid_double() const { return 0.5 * (mpfr_get_d(lo_, MPFR_RNDN) + mpfr_get_d(hi_, MPFR_RNDN)); }
    /// hi - lo, rounded up.
    double width_double() const {
        mpfr_t w;
        mpfr_init2(w, 64);
        mpfr_sub(w, hi_, lo_, MPFR_RNDU);
        double d = mpfr_get_d(w, MPFR_RNDU);
        mpfr_clear(w);
        return d;
    }

    bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
    bool contains(mpfr_srcptr v) const { return mpfr_lessequal_p(lo_, v) && mpfr_lessequal_p(v, hi_); }
    bool contains(const mpq_class& q) const {
        return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
    }
    bool contains(const Enclosure& o) const {
        return mpfr_lessequal_p(lo_, o.lo_) && mpfr_lessequal_p(o.hi_, hi_);
    }
    bool contains_double(double v) const {
        return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0;
    }
    bool intersects(const Enclosure& o) const {
        return mpfr_lessequal_p(lo_, o.hi_) && mpfr_lessequal_p(o.lo_, hi_);
    }
    bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
    bool nonnegative() const { return mpfr_sgn(lo_) >= 0; }
    bool positive() const { return mpfr_sgn(lo_) > 0; }

    /// Shrink to [max(lo, a), min(hi, b)]; used for range clamps that hold
    /// mathematically (e.g. erf in [-1, 1]).
    void clamp(long a, long b) {
        if (mpfr_cmp_si(lo_, a) < 0) mpfr_set_si(lo_, a, MPFR_RNDD);
        if (mpfr_cmp_si(hi_, b) > 0) mpfr_set_si(hi_, b, MPFR_RNDU);
        if (mpfr_cmp_si(lo_, b) > 0) mpfr_set_si(lo_, b, MPFR_RNDD);
        if (mpfr_cmp_si(hi_, a) < 0) mpfr_set_si(hi_, a, MPFR_RNDU);
    }

private:
    mpfr_t lo_;
    mpfr_t hi_;
};

inline Precision result_precision(const Enclosure& x, const Enclosure& y) {
    return Precision(std::max(x.bits(), y.bits()));
}

// ---------------------------------------------------------------------------
// Arithmetic

inline Enclosure operator-(const Enclosure& x) {
    Enclosure r(x.precision());
    mpfr_neg(r.lo_mut(), x.hi(), MPFR_RNDD);
    mpfr_neg(r.hi_mut(), x.lo(), MPFR_RNDU);
    return r;
}

inline Enclosure operator+(const Enclosure& x, const Enclosure& y) {
    Enclosure r(result_precision(x, y));
    mpfr_add(r.lo_mut(), x.lo(), y.lo(), MPFR_RNDD);
    mpfr_add(r.hi_mut(), x.hi(), y.hi(), MPFR_RNDU);
    return r;
}

inline Enclosure operator-(const Enclosure& x, const Enclosure& y) {
    Enclosure r(result_precision(x, y));
    mpfr_sub(r.lo_mut(), x.lo(), y.hi(), MPFR_RNDD);
    mpfr_sub(r.hi_mut(), x.hi(), y.lo(), MPFR_RNDU);
    return r;
}

namespace detail {

/// Owned mpfr_t scratch value.
class MpfrScratch {
public:
    explicit MpfrScratch(mpfr_prec_t p) { mpfr_init2(v_, p); }
    MpfrScratch(const MpfrScratch&) = delete;
    MpfrScratch& operator=(const MpfrScratch&) = delete;
    ~MpfrScratch() { mpfr_clear(v_); }
    mpfr_ptr get() { return v_; }
    operator mpfr_ptr() { return v_; }

private:
    mpfr_t v_;
};

// min/max over the four endpoint products, each rounded in the needed direction.
inline void mul_general(mpfr_ptr lo, mpfr_ptr hi, const Enclosure& x, const Enclosure& y) {
    mpfr_prec_t p = mpfr_get_prec(lo);
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr xs[2] = {x.lo(), x.hi()};
    mpfr_srcptr ys[2] = {y.lo(), y.hi()};
    mpfr_mul(lo, xs[0], ys[0], MPFR_RNDD);
    mpfr_mul(hi, xs[0], ys[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0) continue;
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDD);
            mpfr_min(lo, lo, t, MPFR_RNDD);
            mpfr_mul(t, xs[i], ys[j], MPFR_RNDU);
            mpfr_max(hi, hi, t, MPFR_RNDU);
        }
    mpfr_clear(t);
}

}  // namespace detail

inline Enclosure operator*(const Enclosure& x, const Enclosure& y) {
    Enclosure r(result_precision(x, y));
    if (x.nonnegative() && y.nonnegative()) {
        mpfr_mul(r.lo_mut(), x.lo(), y.lo(), MPFR_RNDD);
        mpfr_mul(r.hi_mut(), x.hi(), y.hi(), MPFR_RNDU);
    } else {
        detail::mul_general(r.lo_mut(), r.hi_mut(), x, y);
    }
    // 0 * anything must stay exactly 0 (mpfr yields -0 for some sign mixes).
    if (mpfr_zero_p(r.lo_mut())) mpfr_set_zero(r.lo_mut(), 1);
    if (mpfr_zero_p(r.hi_mut())) mpfr_set_zero(r.hi_mut(), 1);
    return r;
}

inline Enclosure operator/(const Enclosure& x, const Enclosure& y) {
    if (y.contains_zero()) throw DomainError("division by an enclosure containing zero");
    Enclosure r(result_precision(x, y));
    mpfr_prec_t p = r.bits();
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr xs[2] = {x.lo(), x.hi()};
    mpfr_srcptr ys[2] = {y.lo(), y.hi()};
    mpfr_div(r.lo_mut(), xs[0], ys[0], MPFR_RNDD);
    mpfr_div(r.hi_mut(), xs[0], ys[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            if (i == 0 && j == 0) continue;
            mpfr_div(t, xs[i], ys[j], MPFR_RNDD);
            mpfr_min(r.lo_mut(), r.lo_mut(), t, MPFR_RNDD);
            mpfr_div(t, xs[i], ys[j], MPFR_RNDU);
            mpfr_max(r.hi_mut(), r.hi_mut(), t, MPFR_RNDU);
        }
    mpfr_clear(t);
    if (mpfr_zero_p(r.lo_mut())) mpfr_set_zero(r.lo_mut(), 1);
    if (mpfr_zero_p(r.hi_mut())) mpfr_set_zero(r.hi_mut(), 1);
    return r;
}

inline Enclosure operator+(const Enclosure& x, long v) { return x + Enclosure::point(v, x.precision()); }
inline Enclosure operator+(long v, const Enclosure& x) { return Enclosure::point(v, x.precision()) + x; }
inline Enclosure operator-(const Enclosure& x, long v) { return x - Enclosure::point(v, x.precision()); }
inline Enclosure operator-(long v, const Enclosure& x) { return Enclosure::point(v, x.precision()) - x; }
inline Enclosure operator*(const Enclosure& x, long v) { return x * Enclosure::point(v, x.precision()); }
inline Enclosure operator*(long v, const Enclosure& x) { return Enclosure::point(v, x.precision()) * x; }
inline Enclosure operator/(const Enclosure& x, long v) { return x / Enclosure::point(v, x.precision()); }
inline Enclosure operator/(long v, const Enclosure& x) { return Enclosure::point(v, x.precision()) / x; }

enum class ArithOp { add, sub, mul, div };

inline Enclosure arith(const Enclosure& x, const Enclosure& y, ArithOp op) {
    switch (op) {
        case ArithOp::add: return x + y;
        case ArithOp::sub: return x - y;
        case ArithOp::mul: return x * y;
        case ArithOp::div: return x / y;
    }
    throw ContractError("unknown arithmetic operation");
}

// ---------------------------------------------------------------------------
// Elementary functions (monotone, so evaluated at endpoints)

inline Enclosure exp(const Enclosure& x) {
    Enclosure r(x.precision());
    mpfr_exp(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_exp(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

inline Enclosure log(const Enclosure& x) {
    if (!x.positive()) throw DomainError("log of an enclosure not strictly positive");
    Enclosure r(x.precision());
    mpfr_log(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_log(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

inline Enclosure sqrt(const Enclosure& x) {
    if (!x.nonnegative()) throw DomainError("sqrt of an enclosure with negative part");
    Enclosure r(x.precision());
    mpfr_sqrt(r.lo_mut(), x.lo(), MPFR_RNDD);
    mpfr_sqrt(r.hi_mut(), x.hi(), MPFR_RNDU);
    return r;
}

inline Enclosure pow(const Enclosure& x, long k) {
    if (k < 0) return 1 / pow(x, -k);
    if (k == 0) return Enclosure::point(1, x.precision());
    Enclosure r(x.precision());
    const unsigned long uk = static_cast<unsigned long>(k);
    if (x.nonnegative()) {
        mpfr_pow_ui(r.lo_mut(), x.lo(), uk, MPFR_RNDD);
        mpfr_pow_ui(r.hi_mut(), x.hi(), uk, MPFR_RNDU);
    } else if (mpfr_sgn(x.hi()) <= 0) {
        // x <= 0: mirror onto the nonnegative axis.
        Enclosure m = pow(-x, k);
        return (k % 2 == 0) ? m : -m;
    } else if (k % 2 == 0) {
        mpfr_t a, b;
        mpfr_init2(a, r.bits());
        mpfr_init2(b, r.bits());
        mpfr_pow_ui(a, x.lo(), uk, MPFR_RNDU);
        mpfr_pow_ui(b, x.hi(), uk, MPFR_RNDU);
        mpfr_set_zero(r.lo_mut(), 1);
        mpfr_max(r.hi_mut(), a, b, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
    } else {
        mpfr_pow_ui(r.lo_mut(), x.lo(), uk, MPFR_RNDD);
        mpfr_pow_ui(r.hi_mut(), x.hi(), uk, MPFR_RNDU);
    }
    return r;
}

/// base^expo for a strictly positive base, as exp(expo * log(base)).
inline Enclosure pow(const Enclosure& base, const Enclosure& expo) {
    if (!base.positive()) throw DomainError("real power of an enclosure not strictly positive");
    return exp(expo * log(base));
}

enum class Elementary { exp, ln, sqrt };

inline Enclosure elementary(const Enclosure& x, Elementary f) {
    switch (f) {
        case Elementary::exp: return illum::exp(x);
        case Elementary::ln: return illum::log(x);
        case Elementary::sqrt: return illum::sqrt(x);
    }
    throw ContractError("unknown elementary function");
}

/// Smaller upper endpoint wins; ties keep `a`.
inline const Enclosure& min_by_hi(const Enclosure& a, const Enclosure& b) {
    return mpfr_lessequal_p(a.hi(), b.hi()) ? a : b;
}

// ---------------------------------------------------------------------------
// Constants

inline Enclosure pi_enclosure(Precision p = {}) {
    Enclosure r(p);
    mpfr_const_pi(r.lo_mut(), MPFR_RNDD);
    mpfr_const_pi(r.hi_mut(), MPFR_RNDU);
    return r;
}

}  // namespace illum
