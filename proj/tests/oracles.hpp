#pragma once

// Independent cross-checks used by the test suite.  Each oracle computes the
// quantity under test by a different route than the library implementation.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "cubic/base.hpp"
#include "cubic/unit_poly.hpp"

namespace oracles {

using cubic::Int;
using cubic::Rat;

// --- discriminant via Sylvester resultant -------------------------------
//
// disc(f) = (-1)^{3*2/2} Res(f, f') / lc(f) for monic cubic f.  The resultant
// is the 5x5 Sylvester determinant, expanded directly; this shares no code
// with the closed-form discriminant.
inline Int disc_resultant(std::int64_t t, std::int64_t s) {
    // f = x^3 - t x^2 + s x - 1, f' = 3x^2 - 2t x + s.
    const std::array<Int, 4> f{1, -Int(t), Int(s), -1};
    const std::array<Int, 3> g{3, -2 * Int(t), Int(s)};
    Int m[5][5] = {};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 4; ++c) m[r][r + c] = f[c];
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m[2 + r][r + c] = g[c];
    // Bareiss fraction-free elimination of the 5x5.
    Int prev = 1;
    for (int k = 0; k < 4; ++k) {
        if (m[k][k] == 0) {
            int swap_with = -1;
            for (int i = k + 1; i < 5; ++i)
                if (m[i][k] != 0) { swap_with = i; break; }
            if (swap_with < 0) return 0;
            // Swap rows and negate one: determinant-preserving, keeps Bareiss
            // divisions exact (acts like a modified input matrix).
            for (int j = 0; j < 5; ++j) {
                std::swap(m[k][j], m[swap_with][j]);
                m[k][j] = -m[k][j];
            }
        }
        for (int i = k + 1; i < 5; ++i)
            for (int j = k + 1; j < 5; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        prev = m[k][k];
    }
    Int res = m[4][4];
    return -res;  // (-1)^{n(n-1)/2} with n=3 gives sign -1; lc = 1
}

// --- roots of the cubic by double-precision companion-free solver ---------
inline std::array<std::complex<double>, 3> cubic_roots(double t, double s) {
    // Depressed cubic substitution x = y + t/3.
    const double a = t / 3.0;
    const double p = s - t * t / 3.0;
    const double q = -1.0 - 2.0 * t * t * t / 27.0 + t * s / 3.0;
    // Solve y^3 + p y + q = 0 via trigonometric/Cardano in complex arithmetic.
    std::complex<double> disc = std::complex<double>(q * q / 4.0 + p * p * p / 27.0);
    std::complex<double> sq = std::sqrt(disc);
    std::complex<double> u = std::pow(-q / 2.0 + sq, 1.0 / 3.0);
    if (std::abs(u) < 1e-12) u = std::pow(-q / 2.0 - sq, 1.0 / 3.0);
    std::array<std::complex<double>, 3> ys;
    const std::complex<double> w(-0.5, std::sqrt(3.0) / 2.0);
    std::complex<double> uk = u;
    for (int k = 0; k < 3; ++k) {
        std::complex<double> v = (std::abs(uk) < 1e-300) ? 0.0 : -p / (3.0 * uk);
        ys[k] = uk + v;
        uk *= w;
    }
    for (auto& y : ys) y += a;
    return ys;
}

// Largest real root of an admissible unit polynomial, double precision.
inline double real_root(double t, double s) {
    auto rs = cubic_roots(t, s);
    double best = 0;
    for (auto& z : rs)
        if (std::abs(z.imag()) < 1e-6 * (1.0 + std::abs(z.real())) && z.real() > best)
            best = z.real();
    return best;
}

// --- adaptive Simpson quadrature ------------------------------------------
inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double eps, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * eps)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double eps = 1e-12) {
    double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 60);
}

}  // namespace oracles
