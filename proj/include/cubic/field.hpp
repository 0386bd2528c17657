#pragma once

// Arithmetic in the cubic algebra Q[X]/(f) for a unit polynomial
// f = X^3 - t X^2 + s X - 1, with elements written on the power basis
// 1, th, th^2.  All operations are exact rational.

#include <array>

#include "cubic/base.hpp"
#include "cubic/linalg.hpp"
#include "cubic/unit_poly.hpp"

namespace cubic {

using Elem = std::array<Rat, 3>;  // a0 + a1*th + a2*th^2

struct FieldCtx {
    UnitPoly p;

    explicit FieldCtx(UnitPoly poly) : p(poly) { require_admissible(poly); }

    // th^3 = t*th^2 - s*th + 1.
    Elem reduce_cubic(const Rat& c0, const Rat& c1, const Rat& c2, const Rat& c3) const {
        return {c0 + c3, c1 - c3 * p.s, c2 + c3 * p.t};
    }

    Elem mul(const Elem& a, const Elem& b) const {
        // Full product has degree <= 4; fold degrees 4 then 3.
        std::array<Rat, 5> c{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) c[i + j] += a[i] * b[j];
        // th^4 = t*th^3 - s*th^2 + th.
        c[3] += c[4] * p.t;
        c[2] -= c[4] * p.s;
        c[1] += c[4];
        return reduce_cubic(c[0], c[1], c[2], c[3]);
    }

    Elem add(const Elem& a, const Elem& b) const { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
    Elem sub(const Elem& a, const Elem& b) const { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
    Elem scale(const Rat& c, const Elem& a) const { return {c * a[0], c * a[1], c * a[2]}; }

    static Elem one() { return {Rat(1), Rat(0), Rat(0)}; }
    static Elem theta() { return {Rat(0), Rat(1), Rat(0)}; }

    // Matrix of multiplication by a on the power basis: row j = a * th^j.
    std::array<Elem, 3> mul_rows(const Elem& a) const {
        std::array<Elem, 3> rows;
        rows[0] = a;
        rows[1] = mul(a, theta());
        rows[2] = mul(rows[1], theta());
        return rows;
    }

    Rat norm(const Elem& a) const {
        auto rows = mul_rows(a);
        return rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
             - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
             + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
    }

    Rat trace(const Elem& a) const {
        // tr(1) = 3, tr(th) = P1, tr(th^2) = P2 with Pk the power sums of
        // the roots of f.
        Int P1 = trace_power(p, 1), P2 = trace_power(p, 2);
        return 3 * a[0] + P1 * a[1] + P2 * a[2];
    }

    Elem inverse(const Elem& a) const {
        auto rows = mul_rows(a);
        Mat3 m;
        Int den = 1;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) den = lcm(den, rat_den(rows[i][j]));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                m[3 * i + j] = rat_num(rows[i][j]) * (den / rat_den(rows[i][j]));
        Int d = det3(m);
        if (d == 0) throw DomainError("inverse of a zero divisor");
        Mat3 a3 = adj3(m);
        // rows(a)^{-1} row 0 gives coordinates of a^{-1} (since e0 * M^{-1}).
        // M = m/den, M^{-1} = den * adj(m)/d; a^{-1} = e0 * M^{-1}.
        return {Rat(a3[0]) * den / d, Rat(a3[1]) * den / d, Rat(a3[2]) * den / d};
    }

    // Gram matrix of the trace form on the power basis; its determinant is
    // disc(f).
    Mat3 trace_matrix_num(Int& den_out) const {
        Int P1 = trace_power(p, 1), P2 = trace_power(p, 2), P3 = trace_power(p, 3),
            P4 = trace_power(p, 4);
        den_out = 1;
        return {Int(3), P1, P2, P1, P2, P3, P2, P3, P4};
    }
};

// Multiplication matrix of elem over an arbitrary lattice basis L: the matrix
// A with row i = coordinates (in L's basis) of elem * (row i of L).  Rational
// in general; integral iff elem stabilizes L.
inline bool mul_matrix_on_lattice(const FieldCtx& F, const Elem& elem, const Lat& L, Mat3& out_num,
                                  Int& out_den) {
    // Basis vectors b_i = (row i of L.h)/L.den on the power basis.
    std::array<Elem, 3> image;
    for (int i = 0; i < 3; ++i) {
        Elem b{Rat(L.h[3 * i]) / L.den, Rat(L.h[3 * i + 1]) / L.den, Rat(L.h[3 * i + 2]) / L.den};
        image[i] = F.mul(elem, b);
    }
    // Solve image_i = sum_j c_ij b_j by back substitution (L.h triangular).
    std::array<std::array<Rat, 3>, 3> c;
    for (int i = 0; i < 3; ++i) {
        // Power-basis coords scaled by den: x = image_i * L.den solves u*h = x.
        Rat x0 = image[i][0] * L.den, x1 = image[i][1] * L.den, x2 = image[i][2] * L.den;
        Rat u0 = x0 / L.h[0];
        Rat u1 = (x1 - u0 * L.h[1]) / L.h[4];
        Rat u2 = (x2 - u0 * L.h[2] - u1 * L.h[5]) / L.h[8];
        c[i] = {u0, u1, u2};
    }
    Int den = 1;
    for (auto& row : c)
        for (auto& q : row) den = lcm(den, rat_den(q));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            out_num[3 * i + j] = rat_num(c[i][j]) * (den / rat_den(c[i][j]));
    out_den = den;
    return den == 1;
}

}  // namespace cubic
