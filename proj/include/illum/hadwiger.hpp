#pragma once

// Certified upper bounds on C(K, int K) for bodies in John's position.
//
//   C(K, int K) <= theta(B_2^n) / |B_2^n| * sum_j binom(n, j) W_j(K)
//
// The W_j(K) are bounded from extremal bodies (simplex Delta^n in general,
// cube C^n for symmetric K), from W_n = |B_2^n|, and from the Bokowski-Heil
// inequality with the John outer radius R = n (general) or sqrt(n)
// (symmetric).

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "illum/covering.hpp"
#include "illum/decimal.hpp"
#include "illum/enclosure.hpp"
#include "illum/geometry.hpp"
#include "illum/meanwidth.hpp"

namespace illum {

enum class SourceKind { volume, meanwidth, exact_ball, bonnesen, monotone };

struct QuermassSource {
    SourceKind kind;
    int i = -1;  // anchor indices for bonnesen; i alone for monotone
    int k = -1;

    friend bool operator==(const QuermassSource&, const QuermassSource&) = default;
};

inline std::string to_string(const QuermassSource& s) {
    switch (s.kind) {
        case SourceKind::volume: return "volume";
        case SourceKind::meanwidth: return "meanwidth";
        case SourceKind::exact_ball: return "exact_ball";
        case SourceKind::bonnesen: return "bonnesen(" + std::to_string(s.i) + "," + std::to_string(s.k) + ")";
        case SourceKind::monotone: return "monotone(" + std::to_string(s.i) + ")";
    }
    return "?";
}

struct QuermassEntry {
    Enclosure bound;
    QuermassSource source;
};

struct QuermassBounds {
    int n;
    BodyClass cls;
    Enclosure R;
    std::vector<QuermassEntry> W;  // n+1 entries
    int iterations = 0;            // fixpoint sweeps (auto plans only)

    std::vector<Enclosure> bounds() const {
        std::vector<Enclosure> out;
        out.reserve(W.size());
        for (const auto& e : W) out.push_back(e.bound);
        return out;
    }
};

struct HadwigerBound {
    int n;
    BodyClass cls;
    Enclosure real_bound;
    mpz_class integer_bound;
    std::optional<ThetaBound> theta_used;
    std::string method;  // "john", "john-auto", "rogers", "external"
    std::vector<std::string> plan_trace;
    std::optional<MeanWidthResult> mean_width;  // general John bounds only
};

// ---------------------------------------------------------------------------

/// B_{R,i,j,k}(W_i, W_k) =
///   ((k-j)(i+1) R^i W_i + (j-i)(k+1) R^k W_k) / ((k-i)(j+1) R^j),
/// evaluated term by term as c1 R^(i-j) W_i + c2 R^(k-j) W_k so that each
/// term is monotone in R.
inline Enclosure bonnesen(Dimension dim, const Enclosure& R, int i, int j, int k, const Enclosure& Wi,
                          const Enclosure& Wk, Precision p = {}) {
    if (!(0 <= i && i < j && j < k && k <= dim.value()))
        throw ContractError("bonnesen needs 0 <= i < j < k <= n, got (" + std::to_string(i) + "," +
                            std::to_string(j) + "," + std::to_string(k) + ")");
    if (!R.positive()) throw ContractError("bonnesen needs R > 0");
    if (!Wi.nonnegative() || !Wk.nonnegative()) throw ContractError("bonnesen needs nonnegative W_i, W_k");
    const Precision wp(std::max({p.bits(), R.bits(), Wi.bits(), Wk.bits()}) + 16);
    const Enclosure Rw = detail::round_to(R, wp);
    const long den = static_cast<long>(k - i) * (j + 1);
    const Enclosure c1 = Enclosure::rational(mpz_class(static_cast<long>(k - j) * (i + 1)), mpz_class(den), wp);
    const Enclosure c2 = Enclosure::rational(mpz_class(static_cast<long>(j - i) * (k + 1)), mpz_class(den), wp);
    const Enclosure r = c1 * pow(Rw, i - j) * Wi + c2 * pow(Rw, k - j) * Wk;
    return detail::round_to(r, p);
}

/// Outer radius of a body in John's position: n in general, sqrt(n) if
/// symmetric (exactly 2 for n = 4).
inline Enclosure john_radius(Dimension dim, BodyClass cls, Precision p = {}) {
    const long n = dim.value();
    if (cls == BodyClass::general) return Enclosure::point(n, p);
    mpz_class root;
    if (mpz_root(root.get_mpz_t(), mpz_class(n).get_mpz_t(), 2) != 0) return Enclosure::point(root, p);
    return illum::sqrt(Enclosure::point(n, p));
}

inline bool has_paper_plan(int n, BodyClass cls) {
    return cls == BodyClass::general ? (n >= 5 && n <= 8) : (n >= 4 && n <= 6);
}

namespace detail {

inline QuermassBounds empty_plan(Dimension dim, BodyClass cls, Precision p) {
    QuermassBounds q{dim.value(), cls, john_radius(dim, cls, p), {}, 0};
    q.W.reserve(static_cast<std::size_t>(dim.value()) + 1);
    return q;
}

}  // namespace detail

/// Quermassintegral bounds for K in general John position, n in 5..8.
/// `simplex_width` encloses w(T^n); only its upper end matters for validity.
inline QuermassBounds plan_general(Dimension dim, const Enclosure& simplex_width, Precision p = {}) {
    const int n = dim.value();
    if (!has_paper_plan(n, BodyClass::general))
        throw NotAvailableError("no general John plan for n=" + std::to_string(n) + " (supported: 5..8)");
    QuermassBounds q = detail::empty_plan(dim, BodyClass::general, p);
    const Enclosure vol = simplex_volume_bound(dim, p);
    const Enclosure mw = simplex_Wn_minus_1(dim, simplex_width, p);

    // Indices below the first Bonnesen-bounded one use the volume bound.
    const int first_bonnesen = n <= 6 ? n - 2 : n - 3;
    for (int j = 0; j < first_bonnesen; ++j) q.W.push_back({vol, {SourceKind::volume}});
    const int anchor_i = n <= 6 ? n - 3 : n - 4;
    for (int j = first_bonnesen; j <= n - 2; ++j)
        q.W.push_back({bonnesen(dim, q.R, anchor_i, j, n - 1, vol, mw, p), {SourceKind::bonnesen, anchor_i, n - 1}});
    q.W.push_back({mw, {SourceKind::meanwidth}});
    q.W.push_back({ball_volume(n, p), {SourceKind::exact_ball}});
    return q;
}

inline QuermassBounds plan_general(Dimension dim, const MeanWidthResult& mw, Precision p = {}) {
    if (mw.n != dim.value()) throw ContractError("mean width computed for another dimension");
    return plan_general(dim, mw.width, p);
}

/// Quermassintegral bounds for symmetric K in John position, n in 4..6.
inline QuermassBounds plan_symmetric(Dimension dim, Precision p = {}) {
    const int n = dim.value();
    if (!has_paper_plan(n, BodyClass::symmetric))
        throw NotAvailableError("no symmetric John plan for n=" + std::to_string(n) + " (supported: 4..6)");
    QuermassBounds q = detail::empty_plan(dim, BodyClass::symmetric, p);
    const CubeConstants cube = cube_constants(dim, p);

    const int anchor_i = n == 4 ? 1 : 2;
    for (int j = 0; j <= anchor_i; ++j) q.W.push_back({cube.w0, {SourceKind::volume}});
    for (int j = anchor_i + 1; j <= n - 2; ++j)
        q.W.push_back({bonnesen(dim, q.R, anchor_i, j, n - 1, cube.w0, cube.wn_minus_1, p),
                       {SourceKind::bonnesen, anchor_i, n - 1}});
    q.W.push_back({cube.wn_minus_1, {SourceKind::meanwidth}});
    q.W.push_back({ball_volume(n, p), {SourceKind::exact_ball}});
    return q;
}

/// Starts from the volume, mean-width and ball anchors and lowers every
/// middle W_j by the best Bonnesen triple (i, j, k) over current bounds, plus
/// W_j <= W_i for i < j, until no upper endpoint moves by more than a few
/// ulps.  Every rule is monotone in its inputs, so bounds only decrease.
/// `simplex_width` is ignored for symmetric bodies.
inline QuermassBounds auto_plan(Dimension dim, BodyClass cls, const std::optional<Enclosure>& simplex_width,
                                Precision p = {}) {
    const int n = dim.value();
    if (n < 2) throw NotAvailableError("auto plan needs n >= 2");
    QuermassBounds q = detail::empty_plan(dim, cls, p);

    Enclosure vol(p), mw(p);
    if (cls == BodyClass::general) {
        if (!simplex_width) throw ContractError("general auto plan needs the simplex mean width");
        vol = simplex_volume_bound(dim, p);
        mw = simplex_Wn_minus_1(dim, *simplex_width, p);
    } else {
        CubeConstants cube = cube_constants(dim, p);
        vol = std::move(cube.w0);
        mw = std::move(cube.wn_minus_1);
    }
    for (int j = 0; j < n - 1; ++j) q.W.push_back({vol, {SourceKind::volume}});
    if (mpfr_less_p(mw.hi(), vol.hi()))
        q.W.push_back({mw, {SourceKind::meanwidth}});
    else
        q.W.push_back({vol, {SourceKind::volume}});
    q.W.push_back({ball_volume(n, p), {SourceKind::exact_ball}});

    detail::MpfrScratch slack(p.bits());
    const int max_sweeps = 4 * n + 8;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        bool improved = false;
        for (int j = 1; j < n; ++j) {
            std::optional<QuermassEntry> best;
            auto offer = [&](Enclosure cand, QuermassSource src) {
                if (!best || mpfr_less_p(cand.hi(), best->bound.hi())) best = QuermassEntry{std::move(cand), src};
            };
            for (int i = 0; i < j; ++i) {
                offer(q.W[i].bound, {SourceKind::monotone, i});
                for (int k = j + 1; k <= n; ++k)
                    offer(bonnesen(dim, q.R, i, j, k, q.W[i].bound, q.W[k].bound, p), {SourceKind::bonnesen, i, k});
            }
            // Only accept a change that beats the current bound by more than
            // rounding noise: hi_new < hi_old - |hi_old| 2^(4-bits).
            mpfr_mul_2si(slack, q.W[j].bound.hi(), 4 - static_cast<long>(p.bits()), MPFR_RNDU);
            mpfr_sub(slack, q.W[j].bound.hi(), slack, MPFR_RNDD);
            if (best && mpfr_less_p(best->bound.hi(), slack)) {
                q.W[j] = std::move(*best);
                improved = true;
            }
        }
        q.iterations = sweep;
        if (!improved) break;
    }
    return q;
}

/// theta / |B_2^n| * sum_j binom(n, j) W_j with a plan trace.
inline HadwigerBound assemble(Dimension dim, const QuermassBounds& q, const ThetaBound& theta, Precision p = {},
                              int digits = 6) {
    const int n = dim.value();
    if (q.n != n || theta.n != n) throw ContractError("assemble: dimension mismatch");
    const std::vector<Enclosure> w = q.bounds();
    const Enclosure sum = steiner_sum(dim, w);
    const Enclosure real = theta.value * sum / ball_volume(n, p);

    HadwigerBound hb{n, q.cls, detail::round_to(real, p), floor_to_integer(real.hi()), theta, "john", {}, std::nullopt};
    hb.plan_trace.push_back("R = " + decimal_hi(q.R, digits) + " (" + std::string(to_string(q.cls)) + " John position)");
    for (int j = 0; j <= n; ++j)
        hb.plan_trace.push_back("W_" + std::to_string(j) + " <= " + decimal_hi(q.W[j].bound, digits) + "  [" +
                                to_string(q.W[j].source) + "]");
    hb.plan_trace.push_back("theta <= " + decimal_hi(theta.value, digits) + "  [" +
                            std::string(to_string(theta.method)) + "]");
    hb.plan_trace.push_back("bound <= " + decimal_hi(real, digits));
    return hb;
}

// ---------------------------------------------------------------------------
// Selection across methods

enum class PlanKind { paper, automatic };

struct BoundOptions {
    Precision precision{};
    QuadratureParams quadrature{};
    /// The quadrature starts at quadrature.subdivisions and doubles N until
    /// the integer bound is the same at both ends of the mean-width
    /// enclosure, or until N would exceed this cap.
    std::uint64_t max_subdivisions = 3'200'000;
    PlanKind plan = PlanKind::paper;
    unsigned rogers_grid = 1000;
    DensityCatalog catalog = DensityCatalog::builtin();
    int digits = 6;
};

struct ExternalBound {
    int n;
    BodyClass cls;
    long value;
    const char* citation;
};

/// Published bounds the library does not recompute.
inline constexpr ExternalBound kExternalBounds[] = {
    {3, BodyClass::general, 14, "Prymak, SIAM J. Discrete Math. 37 (2023)"},
    {4, BodyClass::general, 96, "Prymak and Shepelska, J. Geom. 111 (2020)"},
    {3, BodyClass::symmetric, 8, "Lassak, J. London Math. Soc. 30 (1984)"},
};

inline std::optional<ExternalBound> external_bound(int n, BodyClass cls) {
    for (const auto& e : kExternalBounds)
        if (e.n == n && e.cls == cls) return e;
    return std::nullopt;
}

inline HadwigerBound external_hadwiger(Dimension dim, BodyClass cls, Precision p = {}) {
    const auto e = external_bound(dim.value(), cls);
    if (!e) throw NotAvailableError("no external bound for n=" + std::to_string(dim.value()));
    HadwigerBound hb{dim.value(), cls, Enclosure::point(e->value, p), mpz_class(e->value), std::nullopt, "external", {}, std::nullopt};
    hb.plan_trace.push_back(std::string("external: ") + e->citation);
    return hb;
}

inline HadwigerBound rogers_bound(Dimension dim, BodyClass cls, const BoundOptions& opt = {}) {
    const RogersResult r = rogers_rn(dim, opt.rogers_grid, opt.precision);
    const Enclosure real = rogers_hadwiger_real(dim, cls, r);
    HadwigerBound hb{dim.value(), cls, real, rogers_hadwiger(dim, cls, r),
                     ThetaBound{dim.value(), r.r, ThetaMethod::rogers}, "rogers", {}, std::nullopt};
    const std::string factor = cls == BodyClass::general ? "binom(2n,n)" : "2^n";
    hb.plan_trace.push_back("r_n <= " + decimal_hi(r.r, opt.digits) + "  [grid N=" + std::to_string(r.grid_N) +
                            ", j=" + std::to_string(r.best_j) + "]");
    hb.plan_trace.push_back("bound = " + factor + " * r_n <= " + decimal_hi(real, opt.digits));
    return hb;
}

namespace detail {

inline bool near_integer(mpfr_srcptr v) {
    MpfrScratch frac(mpfr_get_prec(v)), tol(32);
    mpfr_frac(frac, v, MPFR_RNDN);
    mpfr_abs(frac, frac, MPFR_RNDN);
    mpfr_set_ui_2exp(tol, 1, -20, MPFR_RNDN);
    if (mpfr_less_p(frac, tol)) return true;
    mpfr_ui_sub(frac, 1, frac, MPFR_RNDN);
    return mpfr_less_p(frac, tol);
}

inline QuermassBounds john_plan(Dimension dim, BodyClass cls, const std::optional<Enclosure>& width, PlanKind plan,
                                Precision p) {
    if (plan == PlanKind::automatic) return auto_plan(dim, cls, width, p);
    return cls == BodyClass::general ? plan_general(dim, *width, p) : plan_symmetric(dim, p);
}

/// One John assembly at fixed precision, refining the quadrature as needed.
inline HadwigerBound john_bound_at(Dimension dim, BodyClass cls, const BoundOptions& opt, Precision p) {
    const ThetaBound theta = theta_best(dim, opt.catalog, p);
    if (cls == BodyClass::symmetric) {
        HadwigerBound hb = assemble(dim, john_plan(dim, cls, std::nullopt, opt.plan, p), theta, p, opt.digits);
        if (opt.plan == PlanKind::automatic) hb.method = "john-auto";
        return hb;
    }
    QuadratureParams quad = opt.quadrature;
    for (;;) {
        const MeanWidthResult mw = simplex_mean_width(dim, quad, p);
        HadwigerBound hb = assemble(dim, john_plan(dim, cls, mw.width, opt.plan, p), theta, p, opt.digits);
        // The integer obtained from w's lower end is what an exact w would
        // give at best; once both ends agree, more subdivisions cannot help.
        const Enclosure w_lo = Enclosure::bounds(mw.width.lo(), mw.width.lo(), p);
        const HadwigerBound floor_hb = assemble(dim, john_plan(dim, cls, w_lo, opt.plan, p), theta, p, opt.digits);
        const bool settled = floor_hb.integer_bound == hb.integer_bound;
        if (settled || quad.subdivisions * 2 > opt.max_subdivisions) {
            hb.plan_trace.insert(hb.plan_trace.begin(),
                                 "w(T^" + std::to_string(dim.value()) + ") in [" + decimal_lo(mw.width, 8) + ", " +
                                     decimal_hi(mw.width, 8) + "]  [a=" + std::to_string(quad.cutoff) +
                                     ", N=" + std::to_string(quad.subdivisions) +
                                     (settled ? "" : ", integer not settled at subdivision cap") + "]");
            if (opt.plan == PlanKind::automatic) hb.method = "john-auto";
            hb.mean_width = mw;
            return hb;
        }
        quad.subdivisions *= 2;
    }
}

}  // namespace detail

/// John-ellipsoid bound for (n, cls).  Paper plans cover general n = 5..8 and
/// symmetric n = 4..6; automatic plans run for any n >= 2 and are flagged
/// experimental outside those ranges.
inline HadwigerBound john_bound(Dimension dim, BodyClass cls, const BoundOptions& opt = {}) {
    if (opt.plan == PlanKind::paper && !has_paper_plan(dim.value(), cls))
        throw NotAvailableError("no John plan for n=" + std::to_string(dim.value()) + " " +
                                std::string(to_string(cls)));
    Precision p = opt.precision;
    HadwigerBound hb = detail::john_bound_at(dim, cls, opt, p);
    for (int retry = 0; retry < 2 && detail::near_integer(hb.real_bound.hi()); ++retry) {
        p = p.doubled();
        hb = detail::john_bound_at(dim, cls, opt, p);
    }
    if (opt.plan == PlanKind::automatic && !has_paper_plan(dim.value(), cls))
        hb.plan_trace.insert(hb.plan_trace.begin(), "experimental: automatic plan outside the validated dimensions");
    return hb;
}

enum class BoundMethod { best, john, rogers, external };

/// Smallest integer bound among the applicable methods; the trace names the
/// winner first.
inline HadwigerBound best_bound(Dimension dim, BodyClass cls, const BoundOptions& opt = {}) {
    if (dim.value() < 3) throw NotAvailableError("Hadwiger bounds are computed for n >= 3");
    std::vector<HadwigerBound> cands;
    if (opt.plan == PlanKind::automatic || has_paper_plan(dim.value(), cls)) cands.push_back(john_bound(dim, cls, opt));
    cands.push_back(rogers_bound(dim, cls, opt));
    if (external_bound(dim.value(), cls)) cands.push_back(external_hadwiger(dim, cls, opt.precision));
    std::size_t best = 0;
    for (std::size_t i = 1; i < cands.size(); ++i)
        if (cands[i].integer_bound < cands[best].integer_bound) best = i;
    HadwigerBound out = std::move(cands[best]);
    out.plan_trace.insert(out.plan_trace.begin(), "selected method: " + out.method);
    return out;
}

inline HadwigerBound compute_bound(Dimension dim, BodyClass cls, BoundMethod method, const BoundOptions& opt = {}) {
    switch (method) {
        case BoundMethod::best: return best_bound(dim, cls, opt);
        case BoundMethod::john: return john_bound(dim, cls, opt);
        case BoundMethod::rogers:
            if (dim.value() < 3) throw NotAvailableError("Rogers-based Hadwiger bound needs n >= 3");
            return rogers_bound(dim, cls, opt);
        case BoundMethod::external: return external_hadwiger(dim, cls, opt.precision);
    }
    throw ContractError("unknown bound method");
}

}  // namespace illum
