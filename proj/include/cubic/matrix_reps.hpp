#pragma once

// Exact evaluation of the alternating character psi on integer matrices.
//
// For g in SL3, tr psi(g) = det(I - Sym^2 g): a 6x6 integer determinant over
// the symmetric-square basis, computed fraction-free.  The companion of this
// exact form is the eigenvalue product
//   (1-a^2)(1-b^2)(1-c^2)(1-ab)(1-bc)(1-ca),   abc = 1,
// evaluated in complex doubles for cross-checks.  The module also provides
// deterministic random generators for unimodular conjugators and for the
// norm-one parts of the three standard proper parabolic subgroups, on which
// tr psi must vanish identically.

#include <array>
#include <complex>
#include <cstdint>
#include <random>

#include "cubic/base.hpp"
#include "cubic/linalg.hpp"

namespace cubic {

// Matrix of Sym^2(g) on the ordered basis e0^2, e1^2, e2^2, e0e1, e0e2, e1e2
// (g acts on columns: (g e_i) = sum_k g[k][i] e_k).  Row-major 6x6.
inline std::array<Int, 36> sym_square(const Mat3& g) {
    const std::array<std::array<int, 2>, 6> basis{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
    auto at = [&](int r, int c) -> const Int& { return g[3 * r + c]; };
    std::array<Int, 36> m{};
    for (int col = 0; col < 6; ++col) {
        int i = basis[col][0], j = basis[col][1];
        for (int row = 0; row < 6; ++row) {
            int k = basis[row][0], l = basis[row][1];
            m[6 * row + col] =
                k == l ? Int(at(k, i) * at(k, j)) : Int(at(k, i) * at(l, j) + at(l, i) * at(k, j));
        }
    }
    return m;
}

namespace detail {

// Fraction-free (Bareiss) determinant of an n x n integer matrix, n <= 6.
inline Int det_bareiss6(std::array<Int, 36> m) {
    int sign = 1;
    Int prev = 1;
    for (int k = 0; k < 5; ++k) {
        if (m[6 * k + k] == 0) {
            int sw = -1;
            for (int i = k + 1; i < 6; ++i)
                if (m[6 * i + k] != 0) {
                    sw = i;
                    break;
                }
            if (sw < 0) return 0;
            for (int j = 0; j < 6; ++j) std::swap(m[6 * k + j], m[6 * sw + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < 6; ++i)
            for (int j = k + 1; j < 6; ++j)
                m[6 * i + j] = Int((m[6 * i + j] * m[6 * k + k] - m[6 * i + k] * m[6 * k + j]) / prev);
        prev = m[6 * k + k];
    }
    return Int(sign * m[35]);
}

}  // namespace detail

// Exact tr psi(g) = det(I6 - Sym^2 g) for an integer matrix of determinant 1.
inline Int tr_psi_exact(const Mat3& g) {
    if (det3(g) != 1) throw DomainError("tr_psi_exact: matrix must have determinant one");
    std::array<Int, 36> m = sym_square(g);
    for (auto& v : m) v = -v;
    for (int d = 0; d < 6; ++d) m[6 * d + d] += 1;
    return detail::det_bareiss6(std::move(m));
}

// Eigenvalue-product form of det(1 - eta): requires the product of the three
// eigenvalues to be 1 within tolerance.
inline std::complex<double> det_eta_product(std::complex<double> a, std::complex<double> b,
                                            std::complex<double> c, double tol = 1e-6) {
    if (std::abs(a * b * c - 1.0) > tol)
        throw DomainError("det_eta_product: eigenvalue product must be one");
    return (1.0 - a * a) * (1.0 - b * b) * (1.0 - c * c) * (1.0 - a * b) * (1.0 - b * c) *
           (1.0 - c * a);
}

// Random unimodular matrix: a short product of elementary row additions.
inline Mat3 random_unimodular(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2), val(-3, 3);
    Mat3 x{1, 0, 0, 0, 1, 0, 0, 0, 1};
    for (int step = 0; step < 6; ++step) {
        int i = pick(rng), j = pick(rng);
        if (i == j) continue;
        Mat3 e{1, 0, 0, 0, 1, 0, 0, 0, 1};
        e[3 * i + j] = val(rng);
        x = mul33(x, e);
    }
    return x;
}

// Random element of the norm-one part of a standard proper parabolic
// subgroup: block upper triangular with determinant-(+/-1) diagonal blocks
// multiplying to 1.  which = 0: Borel (1,1,1); 1: blocks (1,2); 2: (2,1).
inline Mat3 random_parabolic_element(std::mt19937_64& rng, int which) {
    if (which < 0 || which > 2) throw DomainError("random_parabolic_element: which must be 0..2");
    std::uniform_int_distribution<int> val(-4, 4), coin(0, 1);
    auto rand2x2 = [&](std::array<std::int64_t, 4>& a, int& det) {
        // [[1,k],[0,1]] [[1,0],[m,1]] [[1,n],[0,1]], then optional column flip.
        std::int64_t k = val(rng), m = val(rng), n = val(rng);
        a = {1 + k * m, n + k * (1 + m * n), m, 1 + m * n};
        det = 1;
        if (coin(rng)) {
            std::swap(a[0], a[1]);
            std::swap(a[2], a[3]);
            det = -1;
        }
    };
    Mat3 g{};
    if (which == 0) {
        int d0 = coin(rng) ? 1 : -1, d1 = coin(rng) ? 1 : -1;
        g = {d0, val(rng), val(rng), 0, d1, val(rng), 0, 0, d0 * d1};
    } else {
        std::array<std::int64_t, 4> a;
        int det;
        rand2x2(a, det);
        if (which == 1) {
            g = {det, val(rng), val(rng), 0, a[0], a[1], 0, a[2], a[3]};
        } else {
            g = {a[0], a[1], val(rng), a[2], a[3], val(rng), 0, 0, det};
        }
    }
    return g;
}

}  // namespace cubic
