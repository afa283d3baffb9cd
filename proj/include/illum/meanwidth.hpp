#pragma once

// Certified mean width of the unit-edge regular simplex T^n.
//
//   w(T^n) = Gamma(n/2) / (2 Gamma((n+1)/2)) * int_0^inf g_{n+1}(x) dx,
//   g_{n+1}(x) = 1 - F(x)^(n+1) - (1 - F(x))^(n+1),
//
// with F the standard normal CDF.  g_{n+1} is positive and decreasing on
// [0, inf), so on [0, a] the right-endpoint Riemann sum is a lower bound and
// the left-endpoint sum an upper bound; the tail beyond a > 2 is at most
// (n+1)/sqrt(2 pi) * e^(-a).

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "illum/enclosure.hpp"
#include "illum/geometry.hpp"
#include "illum/special.hpp"

namespace illum {

struct QuadratureParams {
    static constexpr double kDefaultCutoff = 20.0;
    static constexpr std::uint64_t kDefaultSubdivisions = 50'000;
    static constexpr std::uint64_t kFineSubdivisions = 1'000'000;

    double cutoff = kDefaultCutoff;  // a, used exactly as this binary64 value
    std::uint64_t subdivisions = kDefaultSubdivisions;

    void validate() const {
        if (!(cutoff > 2.0) || !std::isfinite(cutoff))
            throw ContractError("quadrature cutoff must be a finite number > 2");
        if (subdivisions < 1) throw ContractError("quadrature needs at least one subdivision");
    }
};

struct MeanWidthResult {
    int n;
    QuadratureParams params;
    Enclosure integral;  // int_0^inf g_{n+1}
    Enclosure width;     // w(T^n)
};

/// g_{n+1} evaluated with a shared CDF kernel.
class GFunction {
public:
    GFunction(int n_plus_1, Precision p) : power_(n_plus_1), p_(p), cdf_(Precision(p.bits() + 16)) {
        if (n_plus_1 < 1) throw ContractError("g needs n+1 >= 1");
    }

    Enclosure operator()(const Enclosure& x) const {
        if (mpfr_sgn(x.lo()) < 0) throw ContractError("g is defined here for x >= 0 only");
        const Enclosure f = cdf_(x);
        const Enclosure q = 1 - f;
        Enclosure r = 1 - pow(f, power_) - pow(q, power_);
        r.clamp(0, 1);
        return detail::round_to(r, p_);
    }

private:
    int power_;
    Precision p_;
    NormalCdf cdf_;
};

inline Enclosure g(int n_plus_1, const Enclosure& x, Precision p = {}) {
    return GFunction(n_plus_1, p)(x);
}

/// (n+1)/sqrt(2 pi) * e^(-a), the bound on int_a^inf g_{n+1}.
inline Enclosure tail_upper(Dimension n, double a, Precision p = {}) {
    if (!(a > 2.0)) throw ContractError("tail bound needs a > 2");
    const Enclosure two_pi = 2 * pi_enclosure(p);
    return (n.value() + 1) * illum::exp(-Enclosure::from_double(a, p)) / illum::sqrt(two_pi);
}

namespace detail {

/// The abscissa a*k/N: a*k is exact, one rounding in the division.
inline Enclosure abscissa(mpfr_srcptr a, std::uint64_t k, std::uint64_t n_sub, Precision p) {
    MpfrScratch ak(mpfr_get_prec(a) + 64);
    mpfr_mul_ui(ak, a, static_cast<unsigned long>(k), MPFR_RNDN);  // exact at this width
    Enclosure x(p);
    mpfr_div_ui(x.lo_mut(), ak, static_cast<unsigned long>(n_sub), MPFR_RNDD);
    mpfr_div_ui(x.hi_mut(), ak, static_cast<unsigned long>(n_sub), MPFR_RNDU);
    return x;
}

}  // namespace detail

/// Encloses int_0^inf g_{n+1}.  Lower end: (a/N) sum_{k=1}^{N} g(ak/N);
/// upper end: (a/N) sum_{k=0}^{N-1} g(ak/N) + tail.  Nodes are visited in
/// ascending k and each sum is reduced sequentially, so output is
/// reproducible.
inline Enclosure riemann_enclosure(Dimension n, const QuadratureParams& params, Precision p = {}) {
    params.validate();
    const std::uint64_t N = params.subdivisions;
    const Precision acc_p(p.bits() + 32);
    const GFunction gfun(n.value() + 1, p);

    detail::MpfrScratch a(53);
    mpfr_set_d(a, params.cutoff, MPFR_RNDN);  // exact

    detail::MpfrScratch lower(acc_p.bits()), upper(acc_p.bits());
    mpfr_set_zero(lower, 1);
    mpfr_set_zero(upper, 1);
    for (std::uint64_t k = 0; k <= N; ++k) {
        const Enclosure gk = gfun(detail::abscissa(a, k, N, p));
        if (k >= 1) mpfr_add(lower, lower, gk.lo(), MPFR_RNDD);
        if (k < N) mpfr_add(upper, upper, gk.hi(), MPFR_RNDU);
    }

    Enclosure step(acc_p);  // a / N
    mpfr_div_ui(step.lo_mut(), a, static_cast<unsigned long>(N), MPFR_RNDD);
    mpfr_div_ui(step.hi_mut(), a, static_cast<unsigned long>(N), MPFR_RNDU);
    const Enclosure tail = tail_upper(n, params.cutoff, acc_p);

    Enclosure r(p);
    mpfr_mul(lower, lower, step.lo(), MPFR_RNDD);
    mpfr_mul(upper, upper, step.hi(), MPFR_RNDU);
    mpfr_add(upper, upper, tail.hi(), MPFR_RNDU);
    mpfr_set(r.lo_mut(), lower.get(), MPFR_RNDD);
    mpfr_set(r.hi_mut(), upper.get(), MPFR_RNDU);
    return r;
}

/// Gamma(n/2) / (2 Gamma((n+1)/2)).
inline Enclosure mean_width_factor(Dimension n, Precision p = {}) {
    const auto m = static_cast<unsigned long>(n.value());
    return gamma_half_integer(m, p) / (2 * gamma_half_integer(m + 1, p));
}

inline MeanWidthResult simplex_mean_width(Dimension n, const QuadratureParams& params, Precision p = {}) {
    Enclosure integral = riemann_enclosure(n, params, p);
    Enclosure width = mean_width_factor(n, p) * integral;
    return {n.value(), params, std::move(integral), std::move(width)};
}

/// W_{n-1}(Delta^n) = |B_2^n| sqrt(2n(n+1)) w(T^n).
inline Enclosure simplex_Wn_minus_1(Dimension n, const Enclosure& simplex_width, Precision p = {}) {
    const long m = n.value();
    return ball_volume(n.value(), p) * illum::sqrt(Enclosure::point(2 * m * (m + 1), p)) * simplex_width;
}

inline Enclosure simplex_Wn_minus_1(Dimension n, const MeanWidthResult& mw, Precision p = {}) {
    if (mw.n != n.value())
        throw ContractError("mean width computed for n=" + std::to_string(mw.n) + ", requested n=" +
                            std::to_string(n.value()));
    return simplex_Wn_minus_1(n, mw.width, p);
}

}  // namespace illum
