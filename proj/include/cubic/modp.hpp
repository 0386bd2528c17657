#pragma once

// Small dense linear algebra and univariate polynomial helpers over F_p for
// word-sized p.  Used by the order machinery (radical computation, invariant
// subspace enumeration, Dedekind-style maximality tests).  All arithmetic is
// on int64 values already reduced into [0, p); p^2 must fit in int64.

#include <array>
#include <cstdint>
#include <vector>

#include "cubic/base.hpp"

namespace cubic::modp {

using i64 = std::int64_t;

inline i64 norm(i64 a, i64 p) {
    a %= p;
    return a < 0 ? a + p : a;
}

inline i64 inv_mod(i64 a, i64 p) {
    // Extended Euclid; a must be nonzero mod p.
    i64 t = 0, new_t = 1, r = p, new_r = norm(a, p);
    while (new_r != 0) {
        i64 q = r / new_r;
        t -= q * new_t;
        std::swap(t, new_t);
        r -= q * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw DomainError("inv_mod: not invertible");
    return norm(t, p);
}

using Mat = std::array<i64, 9>;  // row-major 3x3 over F_p
using Vec = std::array<i64, 3>;

inline Vec mul_vec(const Vec& v, const Mat& m, i64 p) {
    Vec r{};
    for (int j = 0; j < 3; ++j)
        r[j] = norm(v[0] * m[j] + v[1] * m[3 + j] + v[2] * m[6 + j], p);
    return r;
}

inline Mat mul_mat(const Mat& a, const Mat& b, i64 p) {
    Mat c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            if (a[3 * i + k] == 0) continue;
            for (int j = 0; j < 3; ++j)
                c[3 * i + j] = norm(c[3 * i + j] + a[3 * i + k] * b[3 * k + j], p);
        }
    return c;
}

// Row-reduce a list of row vectors in place; returns the rank.  Rows end in
// reduced echelon form (pivots 1, zeros above and below), canonical for a
// given row space.
inline int rref(std::vector<Vec>& rows, i64 p) {
    int rank = 0;
    for (int col = 0; col < 3 && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int i = rank; i < static_cast<int>(rows.size()); ++i)
            if (rows[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        i64 inv = inv_mod(rows[rank][col], p);
        for (auto& x : rows[rank]) x = norm(x * inv, p);
        for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            i64 c = rows[i][col];
            for (int j = 0; j < 3; ++j) rows[i][j] = norm(rows[i][j] - c * rows[rank][j], p);
        }
        ++rank;
    }
    rows.resize(rank);
    return rank;
}

// Basis of the kernel of v -> v*m (row-vector convention).
inline std::vector<Vec> kernel(const Mat& m, i64 p) {
    // Solve x*m = 0  <=>  m^T x^T = 0; eliminate columns of m.
    std::vector<Vec> rows(3);
    for (int i = 0; i < 3; ++i) rows[i] = {m[3 * i], m[3 * i + 1], m[3 * i + 2]};
    // Track the elementary row combinations applied to the identity.
    std::vector<Vec> comb(3);
    for (int i = 0; i < 3; ++i) comb[i] = {i == 0, i == 1, i == 2};
    int rank = 0;
    for (int col = 0; col < 3 && rank < 3; ++col) {
        int piv = -1;
        for (int i = rank; i < 3; ++i)
            if (rows[i][col] != 0) { piv = i; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        std::swap(comb[rank], comb[piv]);
        i64 inv = inv_mod(rows[rank][col], p);
        for (auto& x : rows[rank]) x = norm(x * inv, p);
        for (auto& x : comb[rank]) x = norm(x * inv, p);
        for (int i = 0; i < 3; ++i) {
            if (i == rank || rows[i][col] == 0) continue;
            i64 c = rows[i][col];
            for (int j = 0; j < 3; ++j) {
                rows[i][j] = norm(rows[i][j] - c * rows[rank][j], p);
                comb[i][j] = norm(comb[i][j] - c * comb[rank][j], p);
            }
        }
        ++rank;
    }
    std::vector<Vec> ker;
    for (int i = rank; i < 3; ++i) ker.push_back(comb[i]);
    rref(ker, p);
    return ker;
}

// Characteristic polynomial x^3 + c2 x^2 + c1 x + c0 of a 3x3 matrix mod p.
inline std::array<i64, 3> charpoly(const Mat& m, i64 p) {
    i64 tr = norm(m[0] + m[4] + m[8], p);
    i64 m2 = norm(m[0] * m[4] - m[1] * m[3] + m[0] * m[8] - m[2] * m[6] + m[4] * m[8] - m[5] * m[7], p);
    i64 det = norm(m[0] * norm(m[4] * m[8] - m[5] * m[7], p) - m[1] * norm(m[3] * m[8] - m[5] * m[6], p) +
                       m[2] * norm(m[3] * m[7] - m[4] * m[6], p),
                   p);
    return {norm(-det, p), m2, norm(-tr, p)};  // c0, c1, c2
}

// --- dense univariate polynomials over F_p (lowest degree first) ----------

using Poly = std::vector<i64>;

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline i64 eval(const Poly& f, i64 x, i64 p) {
    i64 acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = norm(acc * x + *it, p);
    return acc;
}

// Division with remainder; divisor must be nonzero.
inline void divmod(const Poly& a, const Poly& b, Poly& q, Poly& r, i64 p) {
    r = a;
    trim(r);
    Poly bb = b;
    trim(bb);
    if (bb.empty()) throw DomainError("poly divmod: zero divisor");
    q.assign(r.size() > bb.size() - 1 ? r.size() - bb.size() + 1 : 0, 0);
    i64 lead_inv = inv_mod(bb.back(), p);
    while (r.size() >= bb.size()) {
        i64 c = norm(r.back() * lead_inv, p);
        std::size_t shift = r.size() - bb.size();
        q[shift] = c;
        for (std::size_t i = 0; i < bb.size(); ++i)
            r[shift + i] = norm(r[shift + i] - c * bb[i], p);
        trim(r);
        if (r.empty()) break;
    }
    trim(q);
}

inline Poly gcd(Poly a, Poly b, i64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly q, r;
        divmod(a, b, q, r, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        i64 inv = inv_mod(a.back(), p);
        for (auto& c : a) c = norm(c * inv, p);
    }
    return a;
}

inline Poly mul(const Poly& a, const Poly& b, i64 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = norm(c[i + j] + a[i] * b[j], p);
    return c;
}

// Distinct monic irreducible factors with multiplicities, for deg <= 3, by
// exhaustive root scan plus a quadratic irreducibility fallback.  Only used
// with word-sized p (the scan is O(p * deg)).
inline std::vector<std::pair<Poly, int>> factor_low_degree(Poly f, i64 p) {
    trim(f);
    if (f.size() > 4) throw DomainError("factor_low_degree: degree > 3");
    std::vector<std::pair<Poly, int>> out;
    // Make monic.
    i64 inv = inv_mod(f.back(), p);
    for (auto& c : f) c = norm(c * inv, p);
    for (i64 a = 0; a < p && f.size() > 1; ++a) {
        if (eval(f, a, p) != 0) continue;
        Poly lin{norm(-a, p), 1};
        int e = 0;
        while (f.size() > 1 && eval(f, a, p) == 0) {
            Poly q, r;
            divmod(f, lin, q, r, p);
            f = q;
            ++e;
        }
        out.emplace_back(lin, e);
    }
    // A rootless quadratic or cubic is irreducible (a reducible one would
    // have a linear factor).
    if (f.size() >= 3) out.emplace_back(f, 1);
    return out;
}

}  // namespace cubic::modp
