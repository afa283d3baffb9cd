#pragma once

// Upper bounds on covering densities theta(B_2^n) and theta(K).
//
// Sources: the A_n^* lattice formula, the table of least known lattice
// covering densities (Schurmann and Vallentin 2006), Fary's theta <= 3/2 in
// the plane, and Rogers' bound r_n = min_{0<x<1/n} (1+x)^n (1 - n ln x),
// which bounds theta(K) for every convex body K.

#include <mpfr.h>
#include <gmpxx.h>

#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "illum/decimal.hpp"
#include "illum/enclosure.hpp"
#include "illum/geometry.hpp"

namespace illum {

enum class ThetaMethod { anstar, catalog, rogers, external };

inline std::string_view to_string(ThetaMethod m) {
    switch (m) {
        case ThetaMethod::anstar: return "anstar";
        case ThetaMethod::catalog: return "catalog";
        case ThetaMethod::rogers: return "rogers";
        case ThetaMethod::external: return "external";
    }
    return "?";
}

struct ThetaBound {
    int n;
    Enclosure value;
    ThetaMethod method;
};

/// Least known lattice covering densities by balls, six decimals.  The
/// printed values are truncations, so every row is widened by 5e-6 on use.
class DensityCatalog {
public:
    static constexpr std::string_view kMargin = "0.000005";
    static constexpr const char* kOverrideEnv = "ILLUM_DENSITY_OVERRIDE";

    static DensityCatalog builtin() {
        DensityCatalog c;
        // Schurmann & Vallentin, Discrete Comput. Geom. 35 (2006), as tabulated
        // for n = 2..13.  Rows marked A_n^* match that lattice's formula value.
        c.rows_ = {
            {2, "1.209199"},   // A_2^*
            {3, "1.463505"},   // A_3^* (formula gives 1.4635031; table prints ...505)
            {4, "1.765529"},   // A_4^*
            {5, "2.124286"},   // A_5^*
            {6, "2.464801"},   // lattice found by Schurmann-Vallentin
            {7, "2.900024"},   // lattice found by Schurmann-Vallentin
            {8, "3.142202"},   // lattice found by Schurmann-Vallentin
            {9, "4.340185"},   // non-A_n^* record
            {10, "5.251713"},  // A_10^*
            {11, "5.598338"},  // non-A_n^* record
            {12, "7.510113"},  // A_12^*
            {13, "7.864060"},  // non-A_n^* record
        };
        return c;
    }

    /// Lines of "n value"; '#' starts a comment.  Later rows replace earlier
    /// ones and extend the catalog to new dimensions.
    void apply_overrides(std::istream& in) {
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            int n = 0;
            std::string value, extra;
            if (!(ss >> n)) {
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw ContractError("density override line " + std::to_string(lineno) + ": expected 'n value'");
            }
            if (!(ss >> value) || (ss >> extra))
                throw ContractError("density override line " + std::to_string(lineno) + ": expected 'n value'");
            if (n < 2 || n > Dimension::kMax)
                throw ContractError("density override line " + std::to_string(lineno) + ": dimension out of range");
            const Enclosure v = Enclosure::decimal(value, Precision(64));
            if (mpfr_cmp_ui(v.lo(), 1) < 0)
                throw ContractError("density override line " + std::to_string(lineno) + ": density below 1");
            rows_[n] = value;
        }
    }

    void apply_override_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read density override file '" + path + "'");
        apply_overrides(in);
    }

    /// builtin() plus the file named by ILLUM_DENSITY_OVERRIDE, if set.
    static DensityCatalog from_environment() {
        DensityCatalog c = builtin();
        if (const char* path = std::getenv(kOverrideEnv); path != nullptr && *path != '\0')
            c.apply_override_file(path);
        return c;
    }

    std::optional<std::string> lookup(int n) const {
        auto it = rows_.find(n);
        if (it == rows_.end()) return std::nullopt;
        return it->second;
    }
    const std::map<int, std::string>& rows() const { return rows_; }

private:
    std::map<int, std::string> rows_;
};

/// theta(B_2^n) <= |B_2^n| sqrt(n+1) (n(n+2) / (12(n+1)))^(n/2).
inline ThetaBound theta_anstar(Dimension dim, Precision p = {}) {
    const long n = dim.value();
    if (n < 2) throw NotAvailableError("A_n^* density needs n >= 2");
    const Precision wp(p.bits() + 16);
    const mpq_class q(mpz_class(n * (n + 2)), mpz_class(12 * (n + 1)));
    mpq_class qm = 1;
    for (long i = 0; i < n / 2; ++i) qm *= q;
    qm.canonicalize();
    Enclosure power = Enclosure::rational(qm, wp);
    if (n % 2 == 1) power = power * illum::sqrt(Enclosure::rational(q, wp));
    const Enclosure value =
        ball_volume(static_cast<int>(n), wp) * illum::sqrt(Enclosure::point(n + 1, wp)) * power;
    return {static_cast<int>(n), detail::round_to(value, p), ThetaMethod::anstar};
}

/// [1, tabulated + 5e-6].
inline ThetaBound theta_catalog(Dimension dim, const DensityCatalog& catalog = DensityCatalog::builtin(),
                                Precision p = {}) {
    const auto row = catalog.lookup(dim.value());
    if (!row) throw NotAvailableError("no catalog covering density for n=" + std::to_string(dim.value()));
    Enclosure hi = Enclosure::decimal(*row, p) + Enclosure::decimal(std::string(DensityCatalog::kMargin), p);
    Enclosure value = Enclosure::point(1, p);
    mpfr_set(value.hi_mut(), hi.hi(), MPFR_RNDU);
    return {dim.value(), std::move(value), ThetaMethod::catalog};
}

/// Fary: theta(K) <= 3/2 for every planar convex body.
inline std::optional<ThetaBound> theta_external(Dimension dim, Precision p = {}) {
    if (dim.value() != 2) return std::nullopt;
    Enclosure v = Enclosure::point(1, p);
    mpfr_set_d(v.hi_mut(), 1.5, MPFR_RNDU);
    return ThetaBound{2, std::move(v), ThetaMethod::external};
}

/// f_n(x) = (1+x)^n (1 - n ln x) on 0 < x < 1/n.
inline Enclosure rogers_f(Dimension dim, const Enclosure& x, Precision p = {}) {
    const long n = dim.value();
    Enclosure nx = x * n;
    if (!x.positive() || mpfr_cmp_ui(nx.hi(), 1) >= 0)
        throw ContractError("rogers_f needs 0 < x < 1/n");
    const Enclosure xp = detail::round_to(x, Precision(std::max(p.bits(), x.bits())));
    return detail::round_to(pow(1 + xp, n) * (1 - n * illum::log(xp)), p);
}

struct RogersResult {
    int n;
    unsigned grid_N;
    unsigned best_j;
    Enclosure r;           // [1, min_j f_n(j/(N n)).hi]
    Enclosure best_value;  // f_n at the minimizing grid point
};

/// Grid minimization of f_n over x = j/(N n), 1 <= j <= N-1.  Any grid value
/// bounds r_n from above, so only upper endpoints matter.
inline RogersResult rogers_rn(Dimension dim, unsigned grid_N = 1000, Precision p = {}) {
    const long n = dim.value();
    if (grid_N < 2) throw ContractError("rogers grid needs N >= 2");
    std::optional<Enclosure> best;
    unsigned best_j = 0;
    for (unsigned j = 1; j < grid_N; ++j) {
        const Enclosure x = Enclosure::rational(mpz_class(j), mpz_class(grid_N) * n, p);
        Enclosure f = rogers_f(dim, x, p);
        if (!best || mpfr_less_p(f.hi(), best->hi())) {
            best = std::move(f);
            best_j = j;
        }
    }
    Enclosure r = Enclosure::point(1, p);
    mpfr_set(r.hi_mut(), best->hi(), MPFR_RNDU);
    return {static_cast<int>(n), grid_N, best_j, std::move(r), std::move(*best)};
}

/// The covering-number factor: binom(2n, n) for general bodies, 2^n for symmetric.
inline mpz_class difference_body_factor(Dimension dim, BodyClass cls) {
    const auto n = static_cast<unsigned long>(dim.value());
    if (cls == BodyClass::general) return binomial(2 * n, n);
    mpz_class two_n;
    mpz_ui_pow_ui(two_n.get_mpz_t(), 2, n);
    return two_n;
}

/// H_n <= binom(2n, n) r_n and H_n^s <= 2^n r_n, times r_n's upper endpoint.
inline Enclosure rogers_hadwiger_real(Dimension dim, BodyClass cls, const RogersResult& r) {
    const Precision p = r.r.precision();
    return Enclosure::point(difference_body_factor(dim, cls), p) * r.r;
}

inline mpz_class rogers_hadwiger(Dimension dim, BodyClass cls, const RogersResult& r) {
    if (dim.value() < 3) throw NotAvailableError("Rogers-based Hadwiger bound needs n >= 3");
    if (r.n != dim.value()) throw ContractError("Rogers result computed for another dimension");
    return floor_to_integer(rogers_hadwiger_real(dim, cls, r).hi());
}

inline mpz_class rogers_hadwiger(Dimension dim, BodyClass cls, Precision p = {}) {
    return rogers_hadwiger(dim, cls, rogers_rn(dim, 1000, p));
}

/// Smallest upper endpoint among the ball-covering sources available for n.
inline ThetaBound theta_best(Dimension dim, const DensityCatalog& catalog = DensityCatalog::builtin(),
                             Precision p = {}) {
    ThetaBound best = theta_anstar(dim, p);
    if (catalog.lookup(dim.value())) {
        ThetaBound c = theta_catalog(dim, catalog, p);
        if (mpfr_less_p(c.value.hi(), best.value.hi())) best = std::move(c);
    }
    if (auto e = theta_external(dim, p); e && mpfr_less_p(e->value.hi(), best.value.hi())) best = std::move(*e);
    return best;
}

}  // namespace illum
