#pragma once

// Exact 3x3 integer/rational linear algebra and full-rank row lattices in
// canonical Hermite normal form.
//
// A Lat stores rows h/den spanning a rank-3 lattice over the ambient basis.
// Canonical form: h upper triangular, positive pivots, entries above a pivot
// reduced into [0, pivot), den > 0, gcd(den, all entries) = 1.  Two lattices
// are equal iff their canonical forms are componentwise equal, which makes
// byte comparison of the serialized form a total order used throughout for
// deterministic tie-breaking.

#include <array>
#include <string>
#include <vector>

#include "cubic/base.hpp"

namespace cubic {

using Vec3 = std::array<Int, 3>;
using Mat3 = std::array<Int, 9>;  // row-major

inline Int det3(const Mat3& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7])
         - m[1] * (m[3] * m[8] - m[5] * m[6])
         + m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// adj(m) * m = m * adj(m) = det(m) * I.
inline Mat3 adj3(const Mat3& m) {
    return {m[4] * m[8] - m[5] * m[7], m[2] * m[7] - m[1] * m[8], m[1] * m[5] - m[2] * m[4],
            m[5] * m[6] - m[3] * m[8], m[0] * m[8] - m[2] * m[6], m[2] * m[3] - m[0] * m[5],
            m[3] * m[7] - m[4] * m[6], m[1] * m[6] - m[0] * m[7], m[0] * m[4] - m[1] * m[3]};
}

inline Mat3 mul33(const Mat3& a, const Mat3& b) {
    Mat3 c{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) {
            const Int& aik = a[3 * i + k];
            if (aik == 0) continue;
            for (int j = 0; j < 3; ++j) c[3 * i + j] += aik * b[3 * k + j];
        }
    return c;
}

inline Vec3 mul_vec_mat(const Vec3& v, const Mat3& m) {
    Vec3 r{};
    for (int j = 0; j < 3; ++j) r[j] = v[0] * m[j] + v[1] * m[3 + j] + v[2] * m[6 + j];
    return r;
}

inline Mat3 transpose3(const Mat3& m) {
    return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]};
}

// Hermite normal form of the row span of `rows` (any count >= 3).  Throws
// DomainError when the span has rank < 3.  Result is upper triangular with
// positive pivots and reduced above-pivot entries.
inline Mat3 hnf_rows(std::vector<Vec3> rows) {
    Mat3 h{};
    int pivot_row = 0;
    for (int col = 0; col < 3 && pivot_row < 3; ++col) {
        // Euclidean elimination in this column over rows not yet consumed.
        for (;;) {
            int best = -1;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (rows[i][col] == 0) continue;
                if (best < 0 || abs(rows[i][col]) < abs(rows[best][col])) best = i;
            }
            if (best < 0) break;
            bool others = false;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (i == best || rows[i][col] == 0) continue;
                others = true;
                Int q = floor_div(rows[i][col], rows[best][col]);
                for (int j = 0; j < 3; ++j) rows[i][j] -= q * rows[best][j];
            }
            if (!others) {
                // Move the unique nonzero row into the pivot slot.
                Vec3 r = rows[best];
                rows.erase(rows.begin() + best);
                if (r[col] < 0)
                    for (auto& x : r) x = -x;
                h[3 * pivot_row + 0] = r[0];
                h[3 * pivot_row + 1] = r[1];
                h[3 * pivot_row + 2] = r[2];
                ++pivot_row;
                break;
            }
        }
    }
    if (pivot_row < 3) throw DomainError("hnf: rank-deficient row span");
    // Pivots sit at (0,0), (1,1), (2,2) because columns were consumed in
    // order; reduce above-pivot entries left to right.
    for (int j = 1; j < 3; ++j)
        for (int i = 0; i < j; ++i) {
            Int q = floor_div(h[3 * i + j], h[3 * j + j]);
            if (q == 0) continue;
            for (int k = j; k < 3; ++k) h[3 * i + k] -= q * h[3 * j + k];
        }
    return h;
}

struct Lat {
    Mat3 h{};    // canonical HNF rows
    Int den = 1;

    friend bool operator==(const Lat&, const Lat&) = default;
};

// Canonicalize numerator rows and denominator: HNF + content reduction.
inline Lat lat_canon(const std::vector<Vec3>& rows, const Int& den) {
    if (den == 0) throw DomainError("lattice denominator must be nonzero");
    Lat L;
    L.h = hnf_rows(rows);
    L.den = den < 0 ? -den : den;
    if (den < 0) {
        // Sign lives in the rows; HNF already normalized pivots positive, so
        // only the denominator sign matters.
    }
    Int g = L.den;
    for (const Int& x : L.h) g = gcd(g, x);
    if (g > 1) {
        for (Int& x : L.h) x /= g;
        L.den /= g;
    }
    return L;
}

inline Lat lat_identity() {
    return Lat{{1, 0, 0, 0, 1, 0, 0, 0, 1}, 1};
}

// Rows as rational vectors -> canonical lattice.
inline Lat lat_from_rat_rows(const std::vector<std::array<Rat, 3>>& rows) {
    Int den = 1;
    for (const auto& r : rows)
        for (const auto& q : r) den = lcm(den, rat_den(q));
    std::vector<Vec3> num;
    num.reserve(rows.size());
    for (const auto& r : rows) {
        Vec3 v;
        for (int j = 0; j < 3; ++j) v[j] = rat_num(r[j]) * (den / rat_den(r[j]));
        num.push_back(v);
    }
    return lat_canon(num, den);
}

// Covolume relative to the ambient basis lattice Z^3: det(h)/den^3 > 0.
inline Rat lat_covol(const Lat& L) {
    return Rat(L.h[0] * L.h[4] * L.h[8]) / (Rat(L.den) * L.den * L.den);
}

// Membership of the rational vector num/den in L, by back substitution
// against the triangular basis.
inline bool lat_contains(const Lat& L, const Vec3& num, const Int& den) {
    // Solve u * h = num * (L.den / den) over the integers.
    Int u0, u1, u2;
    // Common scale: coordinates must be num * L.den / den; stay exact.
    auto coord = [&](int j) -> Rat { return Rat(num[j]) * L.den / den; };
    Rat c0 = coord(0), c1 = coord(1), c2 = coord(2);
    Rat q0 = c0 / L.h[0];
    if (rat_den(q0) != 1) return false;
    u0 = rat_num(q0);
    Rat q1 = (c1 - u0 * L.h[1]) / L.h[4];
    if (rat_den(q1) != 1) return false;
    u1 = rat_num(q1);
    Rat q2 = (c2 - u0 * L.h[2] - u1 * L.h[5]) / L.h[8];
    if (rat_den(q2) != 1) return false;
    u2 = rat_num(q2);
    (void)u1; (void)u2;
    return true;
}

inline bool lat_subset(const Lat& inner, const Lat& outer) {
    for (int i = 0; i < 3; ++i) {
        Vec3 row{inner.h[3 * i], inner.h[3 * i + 1], inner.h[3 * i + 2]};
        if (!lat_contains(outer, row, inner.den)) return false;
    }
    return true;
}

// Dual lattice rows: inverse-transpose of the basis matrix.
inline Lat lat_dual(const Lat& L) {
    Int d = det3(L.h);
    Mat3 adjT = transpose3(adj3(L.h));
    std::vector<Vec3> rows(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) rows[i][j] = adjT[3 * i + j] * L.den;
    return lat_canon(rows, d);
}

inline Lat lat_sum(const Lat& A, const Lat& B) {
    Int den = lcm(A.den, B.den);
    std::vector<Vec3> rows;
    rows.reserve(6);
    for (int i = 0; i < 3; ++i) {
        Vec3 r;
        for (int j = 0; j < 3; ++j) r[j] = A.h[3 * i + j] * (den / A.den);
        rows.push_back(r);
    }
    for (int i = 0; i < 3; ++i) {
        Vec3 r;
        for (int j = 0; j < 3; ++j) r[j] = B.h[3 * i + j] * (den / B.den);
        rows.push_back(r);
    }
    return lat_canon(rows, den);
}

// Intersection via duality: (A cap B)^* = A^* + B^*.
inline Lat lat_intersect(const Lat& A, const Lat& B) {
    return lat_dual(lat_sum(lat_dual(A), lat_dual(B)));
}

// Generalized index [B : A] for A <= B as an exact rational
// covol(A)/covol(B); integral whenever A really is a sublattice.
inline Rat lat_index_ratio(const Lat& A, const Lat& B) {
    return lat_covol(A) / lat_covol(B);
}

inline Int lat_index_int(const Lat& inner, const Lat& outer) {
    Rat r = lat_index_ratio(inner, outer);
    if (rat_den(r) != 1) throw DomainError("lattice index is not integral");
    return rat_num(r);
}

// Serialized canonical form "d|h11,h12,h13;h22,h23;h33".
inline std::string lat_serialize(const Lat& L) {
    return L.den.str() + "|" + L.h[0].str() + "," + L.h[1].str() + "," + L.h[2].str() + ";" +
           L.h[4].str() + "," + L.h[5].str() + ";" + L.h[8].str();
}

}  // namespace cubic
