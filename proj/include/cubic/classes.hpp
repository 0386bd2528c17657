#pragma once

// Lattice classes over a cubic order: two lattices M, N are isomorphic when
// N = x*M for some field element x.  Every class of O-stable lattices has a
// representative N with O <= N and [N : O] <= C = (8/(9*pi))*sqrt(|disc O|)
// (a Minkowski-style bound, see README), so classes are enumerated by walking
// stable superlattices up to index C and reducing each to a canonical
// representative: the minimum serialization of x^{-1}M over all x in M with
// [x^{-1}M : O] <= C, searched inside one fundamental window of the unit
// ladder.  Class counts split into h_total (all classes) and h_proper
// (classes whose multiplier ring is exactly O).

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cubic/certified.hpp"
#include "cubic/order.hpp"

namespace cubic {

struct WindowUnit {
    UnitPoly q;       // characteristic polynomial of theta^k
    std::int64_t k;   // smallest power of theta lying in the ring
};

// Smallest k >= 1 with theta^k in the ring; theta^k is then a norm-one unit
// of the ring (its inverse is a polynomial in theta^k with integer
// coefficients), giving the translation ladder for window searches.
inline WindowUnit find_window_unit(const FieldCtx& F, const Lat& ring) {
    Elem th = FieldCtx::theta();
    Elem cur = th;
    for (std::int64_t k = 1; k <= 64; ++k) {
        if (elem_in_lattice(ring, cur)) return WindowUnit{newton_power(F.p, k), k};
        cur = F.mul(cur, th);
    }
    throw OverflowError("find_window_unit: no power of theta in the ring for k <= 64");
}

// Certified rational bracket lo < root < hi with lo > 1 (requires a
// canonical polynomial, whose dominant root exceeds 1).
inline std::pair<Rat, Rat> root_bracket_above_one(const UnitPoly& p) {
    CertifiedRoot r = isolate_real_root(p, Rat(1, 1000000000));
    while (r.lo <= 1 && r.hi > 1) refine_root(r, r.width() / 1024);
    if (r.lo <= 1) throw DomainError("root_bracket_above_one: root is not > 1");
    return {r.lo, r.hi};
}

struct WindowParams {
    Rat E_lo, E_hi;      // bracket for the window-unit real embedding, E_lo > 1
    Rat lam_lo, lam_hi;  // bracket for the field generator's real root, lam_lo > 1
};

inline WindowParams make_window_params(const FieldCtx& F, const Lat& ring) {
    if (!is_canonical(F.p)) throw DomainError("window search requires a canonical polynomial");
    WindowUnit wu = find_window_unit(F, ring);
    WindowParams wp;
    std::tie(wp.E_lo, wp.E_hi) = root_bracket_above_one(wu.q);
    std::tie(wp.lam_lo, wp.lam_hi) = root_bracket_above_one(F.p);
    return wp;
}

// A window search returns, for every unit-ladder orbit of x in M with
// 0 < |N(x)| <= Nmax, at least the orbit representatives lying in one
// fundamental window (normalized to positive norm; -x covers the other
// sign).  Extra elements may appear and are harmless: callers derive data
// that depends only on x up to sign and units.
struct WindowPoint {
    Vec3 num;  // numerator coordinates of x on the power basis 1, th, th^2
    Int norm;  // numerator of N(x) = norm / den^3, always > 0
};

struct WindowSet {
    std::vector<WindowPoint> pts;
    Int den = 1;  // common denominator (the lattice denominator)
};

namespace detail {

struct RatIv {
    Rat lo, hi;
};

inline RatIv iv_mul(const RatIv& x, const RatIv& y) {
    Rat a = x.lo * y.lo, b = x.lo * y.hi, c = x.hi * y.lo, d = x.hi * y.hi;
    return {std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))};
}

// Integer-coefficient arithmetic on the power basis: th^3 = t*th^2 - s*th + 1.
inline Vec3 zmul(const Vec3& a, const Vec3& b, const Int& t, const Int& s) {
    std::array<Int, 5> c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) c[i + j] += a[i] * b[j];
    c[3] += c[4] * t;  // th^4 = t*th^3 - s*th^2 + th
    c[2] -= c[4] * s;
    c[1] += c[4];
    return {c[0] + c[3], c[1] - c[3] * s, c[2] + c[3] * t};
}

// Numerator of the norm form: det of multiplication by v on the power basis.
inline Int znorm(const Vec3& v, const Int& t, const Int& s) {
    Vec3 vt = zmul(v, Vec3{0, 1, 0}, t, s);
    Vec3 vt2 = zmul(vt, Vec3{0, 1, 0}, t, s);
    return det3(Mat3{v[0], v[1], v[2], vt[0], vt[1], vt[2], vt2[0], vt2[1], vt2[2]});
}

}  // namespace detail

// Exact ellipsoid enumeration.  Writing the embeddings of x as
// (sigma, z, conj z), every x in the window region
//   { W_lo <= sigma <= W_hi, sigma * |z|^2 <= Nmax }
// satisfies Q(x) = sigma(x)^2 / W_hi^2 + |z(x)|^2 / (Nmax / W_lo) <= 2, a
// positive-definite quadratic form.  Its Gram entries are rational in the
// real root lam (Re w = (t - lam)/2, Re w^2 = (P2 - lam^2)/2, |w|^2 = 1/lam
// since N(theta) = 1), so a certified bracket for lam yields a rational
// midpoint form Qm with entrywise radius eps (the form is scaled by A2 =
// W_hi^2 so one dyadic snapping grid fits all entries).  From the exact
// bound lambda_min(Qm) >= det(Qm) / max-abs-row-sum(adj Qm) - 3*eps the
// search radius is inflated to Qm(x) <= (region bound) * (1 + 3*eps /
// lambda_min), which provably covers the region; the bracket is refined
// until the inflation is controlled (lambda_min bound > 3*eps).  Integer
// coordinates v of x = v*B/den over a size-reduced
// basis B are then enumerated level by level from the exact rational LDL^T
// decomposition, with per-level ranges decided by integer square roots --
// no floating point enters any accept/reject decision.
inline WindowSet enumerate_window_core(const FieldCtx& F, const Lat& M, const Rat& Nmax,
                                       const WindowParams& wp, std::size_t guard = 4000000) {
    WindowSet out;
    out.den = M.den;
    if (Nmax <= 0) return out;
    if (!(wp.lam_lo > 1) || !(eval_poly(F.p, wp.lam_lo) < 0) || !(eval_poly(F.p, wp.lam_hi) > 0))
        throw DomainError("enumerate_window: invalid window parameters");

    // Window bounds, rounded outward.
    Rat eps_c = std::min(Rat(1, 16), Rat(Nmax / 2));
    auto cbrt = rat_kth_root(Nmax, 3, eps_c);
    if (cbrt.first <= 0) throw DomainError("enumerate_window: degenerate window");
    auto sE = rat_kth_root(wp.E_hi, 2, Rat(1, 1024));
    Rat W_hi = cbrt.second * sE.second;
    Rat W_lo = cbrt.first / sE.second;
    Rat A2 = W_hi * W_hi;  // sigma^2 scale
    Rat B2 = Nmax / W_lo;  // |z|^2 scale
    // Work with the scaled form A2*Q (region bound A2*Q <= Bb := 2*A2): a
    // positive scaling changes no decision but keeps all Gram entries at
    // comparable magnitudes, so one dyadic grid fits every entry.
    Rat AB = A2 / B2;
    Rat Bb = 2 * A2;

    Int P1 = trace_power(F.p, 1), P2 = trace_power(F.p, 2);

    // Certified midpoint Gram matrix of A2*Q on the power basis.
    CertifiedRoot rt{F.p, wp.lam_lo, wp.lam_hi};
    std::array<Rat, 9> Qm{};
    Rat eps, lam_min;
    for (int attempt = 0;; ++attempt) {
        if (attempt > 64)
            throw OverflowError("enumerate_window: certified form did not stabilize");
        const Rat &a = rt.lo, &b = rt.hi;  // 1 < a < lam < b
        detail::RatIv S1{a, b}, S2{Rat(a * a), Rat(b * b)};
        detail::RatIv S3{Rat(S2.lo * a), Rat(S2.hi * b)}, S4{Rat(S2.lo * S2.lo), Rat(S2.hi * S2.hi)};
        detail::RatIv Rw{Rat((P1 - b) / 2), Rat((P1 - a) / 2)};        // Re w
        detail::RatIv Rw2{Rat((P2 - S2.hi) / 2), Rat((P2 - S2.lo) / 2)};  // Re w^2
        detail::RatIv Aw2{Rat(1 / b), Rat(1 / a)};                     // |w|^2
        detail::RatIv Aw4{Rat(1 / S2.hi), Rat(1 / S2.lo)};             // |w|^4
        detail::RatIv Rw12 = detail::iv_mul(Aw2, Rw);                  // Re(w conj(w)^2)
        detail::RatIv one{Rat(1), Rat(1)};
        std::array<detail::RatIv, 9> E;
        auto at = [&](int i, int j, const detail::RatIv& ss, const detail::RatIv& mz) {
            detail::RatIv q{Rat(ss.lo + AB * mz.lo), Rat(ss.hi + AB * mz.hi)};
            E[3 * i + j] = q;
            E[3 * j + i] = q;
        };
        at(0, 0, one, one);
        at(0, 1, S1, Rw);
        at(0, 2, S2, Rw2);
        at(1, 1, S2, Aw2);
        at(1, 2, S3, Rw12);
        at(2, 2, S4, Aw4);
        Rat rad = 0;
        for (int k = 0; k < 9; ++k) rad = std::max(rad, Rat((E[k].hi - E[k].lo) / 2));
        // Snap midpoints to a dyadic grid a notch finer than the certified
        // radius: every later exact operation then runs on small
        // denominators, and the snapping error is absorbed into eps.
        Int D = 1;
        {
            Int q = 4 * rat_den(rad) / rat_num(rad);  // rad > 0: bracket has width
            if (q > 0) D = Int(1) << (boost::multiprecision::msb(q) + 2);
        }
        eps = Rat(rad + Rat(1, 2 * D));
        for (int k = 0; k < 9; ++k)
            Qm[k] = Rat(floor_rat(Rat((E[k].lo + E[k].hi) / 2 * D + Rat(1, 2))), D);
        Rat det = Qm[0] * (Qm[4] * Qm[8] - Qm[5] * Qm[7]) -
                  Qm[1] * (Qm[3] * Qm[8] - Qm[5] * Qm[6]) +
                  Qm[2] * (Qm[3] * Qm[7] - Qm[4] * Qm[6]);
        Rat m2 = Qm[0] * Qm[4] - Qm[1] * Qm[3];
        if (Qm[0] > 0 && m2 > 0 && det > 0) {
            std::array<Rat, 9> adj;
            adj[0] = Qm[4] * Qm[8] - Qm[5] * Qm[7];
            adj[1] = Qm[2] * Qm[7] - Qm[1] * Qm[8];
            adj[2] = Qm[1] * Qm[5] - Qm[2] * Qm[4];
            adj[3] = Qm[5] * Qm[6] - Qm[3] * Qm[8];
            adj[4] = Qm[0] * Qm[8] - Qm[2] * Qm[6];
            adj[5] = Qm[2] * Qm[3] - Qm[0] * Qm[5];
            adj[6] = Qm[3] * Qm[7] - Qm[4] * Qm[6];
            adj[7] = Qm[1] * Qm[6] - Qm[0] * Qm[7];
            adj[8] = Qm[0] * Qm[4] - Qm[1] * Qm[3];
            Rat worst = 0;
            for (int i = 0; i < 3; ++i) {
                Rat row = 0;
                for (int j = 0; j < 3; ++j) {
                    const Rat& v = adj[3 * i + j];
                    row += v < 0 ? Rat(-v) : v;
                }
                worst = std::max(worst, row);
            }
            Rat ell = det / worst;  // 1 / |Qm^{-1}|_inf <= lambda_min(Qm)
            if (ell > 6 * eps) {
                lam_min = ell - 3 * eps;  // lower bound for the true form
                break;
            }
        }
        refine_root(rt, Rat(rt.width() / Rat(Int(1) << 16)));
    }
    // Region points satisfy (scaled) Q_true <= Bb, so on the midpoint form
    // Qm(x) <= Bb + 3*eps*|x|^2 <= Bb * (1 + 3*eps/lam_min).
    Rat rho2 = Rat(Bb * (1 + Rat(3) * eps / lam_min));
    const Int& den = M.den;
    Rat Rhat = Rat(rho2 * den * den);  // bound for v G v^T with x = v*B/den

    // Pull the form back to integer coordinates on a size-reduced basis
    // B = U * M.h (U unimodular); reduction only tightens enumeration ranges.
    auto gram_of = [&](const Mat3& rows) {
        std::array<Rat, 9> g{};
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                Rat acc = 0;
                for (int k = 0; k < 3; ++k)
                    for (int l = 0; l < 3; ++l)
                        acc += Rat(rows[3 * i + k] * rows[3 * j + l]) * Qm[3 * k + l];
                g[3 * i + j] = acc;
                g[3 * j + i] = acc;
            }
        return g;
    };
    Mat3 U{1, 0, 0, 0, 1, 0, 0, 0, 1};
    Mat3 Bred = M.h;
    auto G = gram_of(Bred);
    for (int pass = 0; pass < 64; ++pass) {
        bool changed = false;
        for (int i = 0; i < 3 && !changed; ++i)
            for (int j = 0; j < 3; ++j) {
                if (i == j) continue;
                Int mu = floor_rat(Rat(G[3 * i + j] / G[3 * j + j] + Rat(1, 2)));
                if (mu == 0) continue;
                for (int k = 0; k < 3; ++k) U[3 * i + k] -= mu * U[3 * j + k];
                changed = true;
                break;
            }
        if (!changed)  // order rows so the outer level gets the largest diagonal
            for (int i = 0; i < 2; ++i)
                if (G[3 * (i + 1) + (i + 1)] < G[3 * i + i]) {
                    for (int k = 0; k < 3; ++k) std::swap(U[3 * i + k], U[3 * (i + 1) + k]);
                    changed = true;
                    break;
                }
        if (!changed) break;
        Bred = mul33(U, M.h);
        G = gram_of(Bred);
    }

    // Exact LDL^T: Q(v) = d0*(v0 + u01 v1 + u02 v2)^2 + d1*(v1 + u12 v2)^2 + d2*v2^2.
    const Rat& d0 = G[0];
    if (!(d0 > 0)) throw DomainError("enumerate_window: form is not positive definite");
    Rat u01 = G[1] / d0, u02 = G[2] / d0;
    Rat d1 = Rat(G[4] - u01 * u01 * d0);
    if (!(d1 > 0)) throw DomainError("enumerate_window: form is not positive definite");
    Rat u12 = Rat((G[5] - u01 * u02 * d0) / d1);
    Rat d2 = Rat(G[8] - u02 * u02 * d0 - u12 * u12 * d1);
    if (!(d2 > 0)) throw DomainError("enumerate_window: form is not positive definite");

    const Int t = F.p.t, s = F.p.s;
    Int nbound = rat_num(Nmax) * den * den * den;  // accept norm*den(Nmax) <= nbound
    Int ndenom = rat_den(Nmax);

    std::size_t steps = 0;
    auto bump = [&](const Int& n) {
        if (n > Int(guard)) throw OverflowError("enumerate_window: search box too large");
        steps += n.convert_to<std::size_t>();
        if (steps > guard) throw OverflowError("enumerate_window: search box too large");
    };
    auto isqrt = [](const Int& x) { return Int(boost::multiprecision::sqrt(x)); };

    // Level ranges: for center c = p/q and remainder T, (v - c)^2 <= T/D is
    // equivalent to |v*q - p| <= isqrt(floor(T*q^2/D)), an exact integer test.
    Int V2 = isqrt(floor_rat(Rat(Rhat / d2)));
    bump(2 * V2 + 1);
    for (Int v2 = -V2; v2 <= V2; ++v2) {
        Rat rem2 = Rat(Rhat - d2 * v2 * v2);
        Rat c1 = Rat(-u12 * v2);
        Int q1 = rat_den(c1), p1 = rat_num(c1);
        Int s1 = isqrt(floor_rat(Rat(rem2 * q1 * q1 / d1)));
        Int v1_lo = ceil_div(p1 - s1, q1), v1_hi = floor_div(p1 + s1, q1);
        if (v1_hi >= v1_lo) bump(v1_hi - v1_lo + 1);
        for (Int v1 = v1_lo; v1 <= v1_hi; ++v1) {
            Rat dv1 = Rat(Rat(v1) - c1);
            Rat rem1 = Rat(rem2 - d1 * dv1 * dv1);
            Rat c0 = Rat(-u01 * v1 - u02 * v2);
            Int q0 = rat_den(c0), p0 = rat_num(c0);
            Int s0 = isqrt(floor_rat(Rat(rem1 * q0 * q0 / d0)));
            Int v0_lo = ceil_div(p0 - s0, q0), v0_hi = floor_div(p0 + s0, q0);
            if (v0_hi >= v0_lo) bump(v0_hi - v0_lo + 1);
            for (Int v0 = v0_lo; v0 <= v0_hi; ++v0) {
                if (v0 == 0 && v1 == 0 && v2 == 0) continue;
                Vec3 num = mul_vec_mat(Vec3{v0, v1, v2}, Bred);
                Int nrm = detail::znorm(num, t, s);
                if (nrm <= 0) continue;  // -x covers the opposite sign
                if (nrm * ndenom > nbound) continue;
                out.pts.push_back(WindowPoint{num, nrm});
            }
        }
    }
    return out;
}

inline std::vector<Elem> enumerate_window(const FieldCtx& F, const Lat& M, const Rat& Nmax,
                                          const WindowParams& wp,
                                          std::size_t guard = 4000000) {
    WindowSet ws = enumerate_window_core(F, M, Nmax, wp, guard);
    std::vector<Elem> out;
    out.reserve(ws.pts.size());
    for (const auto& pt : ws.pts)
        out.push_back(Elem{Rat(pt.num[0], ws.den), Rat(pt.num[1], ws.den), Rat(pt.num[2], ws.den)});
    return out;
}

// Canonical representative of the class of the ring-stable lattice M:
// minimum serialization of x^{-1}M over all x in M with
// [x^{-1}M : ring] <= C.  The candidate set equals the full set of
// representatives N of [M] with ring <= N and [N : ring] <= C, so the result
// depends only on the class of M.
struct CanonicalClass {
    Lat rep;
    std::string key;
};

inline CanonicalClass canonical_class_form(const FieldCtx& F, const Lat& ring, const Lat& M,
                                           const Int& C, const WindowParams& wp) {
    Rat rho = lat_index_ratio(ring, M);  // n(x) = |N(x)| * rho
    Rat Nmax = Rat(C) / rho;
    WindowSet ws = enumerate_window_core(F, M, Nmax, wp);
    const Int& den = ws.den;
    const Int t = F.p.t, s = F.p.s;
    Int P1 = trace_power(F.p, 1), P2 = trace_power(F.p, 2);
    Int den3 = den * den * den;
    Int idx_num = rat_num(rho), idx_den = Int(rat_den(rho) * den3);
    std::array<Vec3, 3> mrow;
    for (int i = 0; i < 3; ++i) mrow[i] = Vec3{M.h[3 * i], M.h[3 * i + 1], M.h[3 * i + 2]};
    bool have = false;
    Lat best;
    std::string bestkey;
    for (const auto& pt : ws.pts) {
        // n = N(x) * rho = [x^{-1}M : ring] must be a positive integer; the
        // norm prefilter in the enumeration already enforces n <= C exactly.
        Int nn = pt.norm * idx_num;
        if (nn % idx_den != 0 || nn < idx_den)
            throw DomainError("canonical_class_form: invalid candidate index");
        // x^{-1} = den * w / (2 norm) with w built from x^2 and the traces
        // T1 = den*Tr(x), Tu = den^2*Tr(x^2):  w = 2u - 2*T1*v + (T1^2 - Tu)e0.
        const Vec3& v = pt.num;
        Vec3 u = detail::zmul(v, v, t, s);
        Int T1 = 3 * v[0] + P1 * v[1] + P2 * v[2];
        Int Tu = 3 * u[0] + P1 * u[1] + P2 * u[2];
        Int cte = T1 * T1 - Tu;
        Vec3 w{2 * u[0] - 2 * T1 * v[0] + cte, 2 * u[1] - 2 * T1 * v[1],
               2 * u[2] - 2 * T1 * v[2]};
        // Rows of x^{-1} M: (den*w/(2 norm)) * (mrow_i/den) = w*mrow_i / (2 norm).
        std::vector<Vec3> rows;
        rows.reserve(3);
        for (int i = 0; i < 3; ++i) rows.push_back(detail::zmul(w, mrow[i], t, s));
        Lat rep = lat_canon(rows, Int(2 * pt.norm));
        std::string key = lat_serialize(rep);
        if (!have || key < bestkey) {
            have = true;
            best = rep;
            bestkey = std::move(key);
        }
    }
    if (!have) throw DomainError("canonical_class_form: empty candidate set");
    return {best, bestkey};
}

// Minkowski-style bound: largest integer m with m <= (8/(9*pi))*sqrt(D),
// decided by the exact inequality 7994376*m^2 <= 640000*D (the rational
// squared constant uses 9.8696 < pi^2, erring on the large side, which only
// admits extra representatives).
inline Int class_rep_bound(const Int& abs_disc) {
    Int C = boost::multiprecision::sqrt(Int(640000) * abs_disc / 7994376);
    while (Int(7994376) * (C + 1) * (C + 1) <= Int(640000) * abs_disc) ++C;
    if (C < 1) C = 1;
    return C;
}

struct ClassInfo {
    Lat rep;   // canonical representative, contains the ring
    Lat mult;  // multiplier ring of the class
};

struct ModuleClasses {
    std::vector<ClassInfo> classes;  // sorted by serialized representative
    Int h_total = 0;                 // all classes of ring-stable lattices
    Int h_proper = 0;                // classes with multiplier ring exactly the ring
    Int bound = 0;                   // representative index bound used
};

inline ModuleClasses module_classes(const FieldCtx& F, const Lat& order) {
    if (!is_ring(F, order)) throw DomainError("module_classes: lattice is not a ring");
    Int C = class_rep_bound(-order_disc(F, order));
    WindowParams wp = make_window_params(F, order);
    auto nodes = stable_superlattices(F, order, order, C, nullptr);
    std::map<std::string, Lat> reps;
    for (const auto& node : nodes) {
        auto canon = canonical_class_form(F, order, node.L, C, wp);
        reps.emplace(std::move(canon.key), canon.rep);
    }
    ModuleClasses out;
    out.bound = C;
    for (auto& [key, rep] : reps) {
        Lat mult = multiplier_ring(F, rep);
        out.h_total += 1;
        if (mult == order) out.h_proper += 1;
        out.classes.push_back(ClassInfo{rep, std::move(mult)});
    }
    return out;
}

// (h_total, h_proper) for the order.
inline std::pair<Int, Int> class_number(const FieldCtx& F, const Lat& order) {
    ModuleClasses mc = module_classes(F, order);
    return {mc.h_total, mc.h_proper};
}

// Two lattices are isomorphic iff some field element carries one onto the
// other.  Multiplier rings are class invariants (cheap reject); equality of
// canonical forms over the common multiplier ring decides the rest.
inline bool is_isomorphic(const FieldCtx& F, const Lat& M, const Lat& N) {
    if (M == N) return true;
    Lat RM = multiplier_ring(F, M);
    Lat RN = multiplier_ring(F, N);
    if (!(RM == RN)) return false;
    Int C = class_rep_bound(-order_disc(F, RM));
    WindowParams wp = make_window_params(F, RM);
    return canonical_class_form(F, RM, M, C, wp).key ==
           canonical_class_form(F, RM, N, C, wp).key;
}

}  // namespace cubic
