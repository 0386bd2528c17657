#pragma once

// Certified real-root isolation and downstream interval quantities.
//
// The real root of an admissible f is isolated by exact rational bisection:
// no floating point enters the bracket, so results are identical on every
// platform.  Transcendental quantities derived from the bracket (logarithms)
// are returned as small outward-rounded double intervals.

#include <cmath>
#include <utility>

#include "cubic/base.hpp"
#include "cubic/unit_poly.hpp"

namespace cubic {

inline Rat eval_poly(const UnitPoly& p, const Rat& x) {
    // Horner: ((x - t) x + s) x - 1.
    return ((x - p.t) * x + p.s) * x - 1;
}

// Bracket [lo, hi] with f(lo) < 0 < f(hi) containing the unique real root.
// The root is irrational (f irreducible), so bisection never hits it exactly
// and the sign invariant is preserved by every refinement.
struct CertifiedRoot {
    UnitPoly p;
    Rat lo, hi;

    Rat width() const { return hi - lo; }
    double mid() const { return ((lo + hi) / 2).convert_to<double>(); }
};

inline void refine_root(CertifiedRoot& r, const Rat& width) {
    while (r.hi - r.lo > width) {
        Rat mid = (r.lo + r.hi) / 2;
        if (eval_poly(r.p, mid) < 0)
            r.lo = mid;
        else
            r.hi = mid;
    }
}

// Default bracket width 10^-12; callers refine further as needed.
inline Rat default_precision() { return Rat(1, Int("1000000000000")); }

inline CertifiedRoot isolate_real_root(const UnitPoly& p, const Rat& precision = default_precision()) {
    require_admissible(p, "isolate_real_root");
    if (precision <= 0) throw DomainError("isolate_real_root: precision must be positive");
    // The real root is positive: f(0) = -1 and the product of all roots is 1
    // with the complex pair contributing a positive factor.  Cauchy bound.
    Rat lo = 0;
    Rat hi = Rat(1) + (p.t < 0 ? -p.t : p.t) + (p.s < 0 ? -p.s : p.s);
    CertifiedRoot r{p, lo, hi};
    refine_root(r, precision);
    return r;
}

// Closed double interval guaranteed to contain a real quantity.
struct RealBound {
    double lo = 0.0, hi = 0.0;

    double mid() const { return 0.5 * (lo + hi); }
    double err() const { return 0.5 * (hi - lo); }
    RealBound operator*(double c) const { return c >= 0 ? RealBound{lo * c, hi * c} : RealBound{hi * c, lo * c}; }
};

namespace detail {
// Outward slack covering rational->long double conversion and libm error.
inline double down(double v) { return v - (std::fabs(v) + 1e-300) * 1e-15; }
inline double up(double v) { return v + (std::fabs(v) + 1e-300) * 1e-15; }
}  // namespace detail

// log of a positive rational interval, outward rounded.
inline RealBound log_bracket(const Rat& lo, const Rat& hi) {
    if (lo <= 0) throw DomainError("log_bracket: needs a positive interval");
    double llo = static_cast<double>(std::log(lo.convert_to<long double>()));
    double lhi = static_cast<double>(std::log(hi.convert_to<long double>()));
    return {detail::down(llo), detail::up(lhi)};
}

// Regulator R = |log lambda_real| and geodesic length l = 3R of the unit with
// characteristic polynomial p.  The bracket is refined until the relative
// width bounds the log error by `precision`.
inline std::pair<RealBound, RealBound> regulator_and_length(const UnitPoly& p,
                                                            const Rat& precision = default_precision()) {
    CertifiedRoot r = isolate_real_root(p, Rat(1, 4));
    // Keep the bracket away from 0 so relative refinement terminates.
    while (r.lo == 0) refine_root(r, r.width() / 2);
    refine_root(r, r.lo * precision / 2);
    // The root is never exactly 1 (f irreducible), so the bracket can always
    // be pushed off the fixed point of |log|.
    while (r.lo < 1 && r.hi > 1) refine_root(r, r.width() / 1024);
    RealBound lg = log_bracket(r.lo, r.hi);
    RealBound R = lg.lo >= 0 ? lg : RealBound{-lg.hi, -lg.lo};
    if (R.lo < 0) R.lo = 0;
    RealBound l{3 * R.lo, 3 * R.hi};
    return {R, l};
}

// Rational bracket [a, b] with a^k <= q <= b^k and b - a <= eps (q > 0).
inline std::pair<Rat, Rat> rat_kth_root(const Rat& q, unsigned k, const Rat& eps) {
    if (q <= 0) throw DomainError("rat_kth_root: needs q > 0");
    if (k == 0) throw DomainError("rat_kth_root: needs k >= 1");
    auto powk = [k](const Rat& x) {
        Rat r = 1;
        for (unsigned i = 0; i < k; ++i) r *= x;
        return r;
    };
    Rat lo = 0, hi = q < 1 ? Rat(1) : q;
    while (hi - lo > eps) {
        Rat mid = (lo + hi) / 2;
        if (powk(mid) <= q)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace cubic
