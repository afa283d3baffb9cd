#pragma once

// Certified error function and standard normal CDF.
//
// erf(z) for 0 <= z <= 8 comes from the alternating Maclaurin series
//     erf(z) = 2/sqrt(pi) * sum_k (-1)^k z^(2k+1) / (k! (2k+1)),
// summed with both-sided rounding and closed off by the first omitted term.
// The largest term is about e^(z^2), so the sum runs with z^2*log2(e) guard
// bits to absorb the cancellation.
//
// For z > 8 the Mills-ratio bounds on the normal tail give
//     2z e^(-z^2) / (sqrt(pi)(1+2z^2)) <= erfc(z) <= e^(-z^2) / (sqrt(pi) z),
// which stays tight where the series would cancel catastrophically.

#include <mpfr.h>

#include <cmath>

#include "illum/enclosure.hpp"

namespace illum {

namespace detail {

inline constexpr double kSeriesLimit = 8.0;

/// Evaluates erf at point arguments.  Holds the constants that every
/// evaluation at a given precision shares; cheap to build, used per call site.
class ErfKernel {
public:
    explicit ErfKernel(Precision p)
        : p_(p),
          two_over_sqrt_pi_(2 / illum::sqrt(pi_enclosure(Precision(p.bits() + 32)))),
          sqrt_pi_(illum::sqrt(pi_enclosure(Precision(p.bits() + 32)))) {}

    Precision precision() const { return p_; }

    /// Encloses erf(z) for an exactly representable z.
    Enclosure at_point(mpfr_srcptr z) const {
        if (mpfr_zero_p(z)) return Enclosure(p_);
        if (mpfr_sgn(z) < 0) {
            MpfrScratch m(mpfr_get_prec(z));
            mpfr_neg(m, z, MPFR_RNDN);  // exact
            return -at_point(m.get());
        }
        Enclosure r = mpfr_cmp_d(z, kSeriesLimit) <= 0 ? series(z) : mills(z);
        r.clamp(-1, 1);
        return r;
    }

    /// erf is increasing, so the image of [lo, hi] is [erf(lo).lo, erf(hi).hi].
    /// For very thin x the upper end comes from erf' <= 2/sqrt(pi) instead
    /// of a second series evaluation.
    Enclosure operator()(const Enclosure& x) const {
        Enclosure a = at_point(x.lo());
        if (x.is_point()) return a;
        MpfrScratch w(64), thin(32);
        mpfr_sub(w, x.hi(), x.lo(), MPFR_RNDU);
        mpfr_set_ui_2exp(thin, 1, -static_cast<mpfr_exp_t>(p_.bits() / 2), MPFR_RNDN);
        if (mpfr_lessequal_p(w, thin)) {
            Enclosure r = Enclosure::bounds(a.lo(), a.hi(), p_);
            mpfr_mul(w, w, two_over_sqrt_pi_.hi(), MPFR_RNDU);
            mpfr_add(r.hi_mut(), r.hi_mut(), w, MPFR_RNDU);
            r.clamp(-1, 1);
            return r;
        }
        Enclosure b = at_point(x.hi());
        return Enclosure::bounds(a.lo(), b.hi(), p_);
    }

private:
    Enclosure series(mpfr_srcptr z) const {
        const double zd = mpfr_get_d(z, MPFR_RNDU);
        const auto guard = static_cast<mpfr_prec_t>(std::ceil(zd * zd * 1.4426950408889634)) + 24;
        const mpfr_prec_t wp = std::max<mpfr_prec_t>(p_.bits() + guard, mpfr_get_prec(z));

        MpfrScratch z2l(wp), z2u(wp), tl(wp), tu(wp), al(wp), au(wp), slo(wp), shi(wp), eps(32);
        mpfr_sqr(z2l, z, MPFR_RNDD);
        mpfr_sqr(z2u, z, MPFR_RNDU);
        mpfr_set(tl, z, MPFR_RNDD);
        mpfr_set(tu, z, MPFR_RNDU);
        mpfr_set(slo, z, MPFR_RNDD);
        mpfr_set(shi, z, MPFR_RNDU);
        mpfr_set_ui_2exp(eps, 1, -static_cast<mpfr_exp_t>(p_.bits() + 8), MPFR_RNDN);
        const double z2 = mpfr_get_d(z2u, MPFR_RNDU);

        for (unsigned long k = 1;; ++k) {
            // t_k = z^(2k+1)/k!, a_k = t_k/(2k+1), carried as [lower, upper] magnitudes.
            mpfr_mul(tl, tl, z2l, MPFR_RNDD);
            mpfr_div_ui(tl, tl, k, MPFR_RNDD);
            mpfr_mul(tu, tu, z2u, MPFR_RNDU);
            mpfr_div_ui(tu, tu, k, MPFR_RNDU);
            mpfr_div_ui(al, tl, 2 * k + 1, MPFR_RNDD);
            mpfr_div_ui(au, tu, 2 * k + 1, MPFR_RNDU);

            // From here on the terms decrease, so the tail of the alternating
            // series is bounded by the first omitted term and has its sign.
            if (static_cast<double>(k) >= z2 && mpfr_less_p(au, eps)) {
                if (k % 2 == 1)
                    mpfr_sub(slo, slo, au, MPFR_RNDD);
                else
                    mpfr_add(shi, shi, au, MPFR_RNDU);
                break;
            }
            if (k % 2 == 1) {
                mpfr_sub(slo, slo, au, MPFR_RNDD);
                mpfr_sub(shi, shi, al, MPFR_RNDU);
            } else {
                mpfr_add(slo, slo, al, MPFR_RNDD);
                mpfr_add(shi, shi, au, MPFR_RNDU);
            }
        }
        Enclosure sum = Enclosure::bounds(slo.get(), shi.get(), Precision(static_cast<unsigned>(wp)));
        Enclosure out(p_);
        Enclosure prod = sum * two_over_sqrt_pi_;
        mpfr_set(out.lo_mut(), prod.lo(), MPFR_RNDD);
        mpfr_set(out.hi_mut(), prod.hi(), MPFR_RNDU);
        return out;
    }

    Enclosure mills(mpfr_srcptr z) const {
        const Precision wp(p_.bits() + 32);
        Enclosure zz(wp);
        mpfr_set(zz.lo_mut(), z, MPFR_RNDD);
        mpfr_set(zz.hi_mut(), z, MPFR_RNDU);
        const Enclosure z2 = zz * zz;
        const Enclosure e = illum::exp(-z2);
        const Enclosure erfc_hi = e / (sqrt_pi_ * zz);
        const Enclosure erfc_lo = 2 * zz * e / (sqrt_pi_ * (1 + 2 * z2));
        const Enclosure lower = 1 - erfc_hi;
        const Enclosure upper = 1 - erfc_lo;
        Enclosure out(p_);
        mpfr_set(out.lo_mut(), lower.lo(), MPFR_RNDD);
        mpfr_set(out.hi_mut(), upper.hi(), MPFR_RNDU);
        return out;
    }

    Precision p_;
    Enclosure two_over_sqrt_pi_;
    Enclosure sqrt_pi_;
};

}  // namespace detail

/// Encloses erf over x, clamped to [-1, 1].
inline Enclosure erf_enclosure(const Enclosure& x, Precision p = {}) {
    return detail::ErfKernel(p)(x);
}

/// Standard normal CDF, F(x) = 1/2 + erf(x/sqrt(2))/2, clamped to [0, 1].
class NormalCdf {
public:
    explicit NormalCdf(Precision p)
        : erf_(p), inv_sqrt2_(1 / illum::sqrt(Enclosure::point(2, Precision(p.bits() + 32)))) {}

    Enclosure operator()(const Enclosure& x) const {
        const Precision p = erf_.precision();
        Enclosure z = x * inv_sqrt2_;
        Enclosure f = (erf_(z) + 1) / 2;
        Enclosure out(p);
        mpfr_set(out.lo_mut(), f.lo(), MPFR_RNDD);
        mpfr_set(out.hi_mut(), f.hi(), MPFR_RNDU);
        out.clamp(0, 1);
        return out;
    }

private:
    detail::ErfKernel erf_;
    Enclosure inv_sqrt2_;
};

inline Enclosure std_normal_cdf(const Enclosure& x, Precision p = {}) {
    return NormalCdf(p)(x);
}

}  // namespace illum
