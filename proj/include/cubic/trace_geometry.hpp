#pragma once

// Resolvent-kernel Fourier transforms, orbital integrals, the truncated
// geometric side of the trace formula, the length Dirichlet series, and the
// region/pole helpers of the spectral parameter plane.
//
// The kernel family is phi(y) = (N-1)! (y^2 + lambda)^{-N} with the Fourier
// normalization phi_hat(x) = (1/2pi) * integral of phi(y) e^{-ixy} dy, so
// phi_hat(x) = (-d/dlambda)^{N-1} [ e^{-|x| sqrt(lambda)} / (2 sqrt(lambda)) ].
// Everything that can be exact is exact: kernel polynomial coefficients are
// rationals, class weights use the exact integer det(1 - eta) and |disc|,
// and only square roots, exponentials, and final sums are floating point.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "cubic/base.hpp"
#include "cubic/census.hpp"
#include "cubic/certified.hpp"
#include "cubic/matrix_reps.hpp"
#include "cubic/unit_poly.hpp"

namespace cubic {

// Ascending coefficients of the polynomial p_N in
//   phi_hat(N, lambda, x) = |x|^(2N-1) p_N(1/(|x| sqrt(lambda))) e^(-|x| sqrt(lambda)).
// Degree exactly 2N-1, zero constant term, all coefficients nonnegative.
struct KernelPoly {
    std::vector<Rat> coeffs;  // coeffs[j] multiplies u^j
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// p_1(u) = u/2; one extra minus-d/d-lambda maps p_N to
// p_{N+1}(u) = (u^3 p_N'(u) + u p_N(u)) / 2, which visibly preserves
// nonnegativity and raises the degree by two.
inline KernelPoly p_N_coeffs(int N) {
    if (N < 1) throw DomainError("p_N_coeffs: N must be at least 1");
    std::vector<Rat> c{Rat(0), Rat(1, 2)};
    for (int n = 1; n < N; ++n) {
        std::vector<Rat> next(c.size() + 2, Rat(0));
        for (std::size_t j = 0; j < c.size(); ++j) {
            if (c[j] == 0) continue;
            next[j + 1] += Rat(c[j] / 2);
            next[j + 2] += Rat(c[j] * Rat(static_cast<int>(j)) / 2);
        }
        c = std::move(next);
    }
    return KernelPoly{std::move(c)};
}

// phi_hat as above; at x = 0 the p_N form is singular and the value is the
// (N-1)-fold minus-d/d-lambda derivative of 1/(2 sqrt(lambda)) directly:
// (1/2) * prod_{j=1}^{N-1} (2j-1)/2 * lambda^{-(2N-1)/2}.
inline double phi_hat(int N, double lambda, double x) {
    if (N < 1) throw DomainError("phi_hat: N must be at least 1");
    if (!(lambda > 0)) throw DomainError("phi_hat: lambda must be positive");
    double ax = std::fabs(x), sq = std::sqrt(lambda);
    if (ax == 0.0) {
        double v = 0.5;
        for (int j = 1; j < N; ++j) v *= (2.0 * j - 1.0) / 2.0;
        return v * std::pow(lambda, -(2.0 * N - 1.0) / 2.0);
    }
    KernelPoly p = p_N_coeffs(N);
    double u = 1.0 / (ax * sq), pu = 0.0;
    for (std::size_t j = p.coeffs.size(); j-- > 0;)
        pu = pu * u + p.coeffs[j].convert_to<double>();
    return std::pow(ax, 2 * N - 1) * pu * std::exp(-ax * sq);
}

// det(Id - Ad(g^{-1}) on g/g_g): the adjoint eigenvalues off the centralizer
// are the six ratios alpha_i/alpha_j (i != j), and with alpha beta gamma = 1
// the product of (1 - alpha_i/alpha_j) collapses to minus the discriminant
// of the characteristic polynomial.  Positive for admissible input.
inline Int d_of_gamma(const UnitPoly& p) {
    require_admissible(p, "d_of_gamma");
    return Int(-disc_cubic(p));
}

namespace detail {

// Square root of a positive integer through 50-digit floats, so the double
// is correctly rounded at any census scale.
inline double sqrt_int(const Int& n) {
    boost::multiprecision::cpp_bin_float_50 x(n);
    return sqrt(x).convert_to<double>();
}

inline Mat3 companion_mat(const UnitPoly& p) {
    auto c = companion(p);
    Mat3 m;
    for (int i = 0; i < 9; ++i) m[i] = Int(c[i]);
    return m;
}

}  // namespace detail

// c_gamma = -det(1 - eta) / |D|^{1/2} * e^{-l/2}: the normalized class
// weight, strictly positive, tending to 1 for long geodesics.  The numerator
// is the exact integer trace of the alternating sum of exterior powers.
inline double c_gamma(const UnitPoly& p, const Rat& precision = default_precision()) {
    require_admissible(p, "c_gamma");
    Int num = Int(-tr_psi_exact(detail::companion_mat(p)));
    double l = regulator_and_length(p, precision).second.mid();
    return num.convert_to<double>() / detail::sqrt_int(d_of_gamma(p)) * std::exp(-l / 2.0);
}

// Orbital integral of the N-th resolvent power at spectral parameter lambda
// against the class of a census record: |D|^{-1/2} phi_hat(N, lambda, l).
// Records of split rank two (nonnegative discriminant) contribute exactly 0.
inline double orbital_integral(const GeodesicClass& rec, int N, double lambda) {
    if (N < 1) throw DomainError("orbital_integral: N must be at least 1");
    if (!(lambda > 0)) throw DomainError("orbital_integral: lambda must be positive");
    if (disc_cubic(rec.poly) >= 0) return 0.0;
    return phi_hat(N, lambda, rec.l) / detail::sqrt_int(Int(-disc_cubic(rec.poly)));
}

// Fixed-tree pairwise reduction: the summation order depends only on the
// input length, so shard-parallel producers cannot perturb the result.
inline double pairwise_sum(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    std::vector<double> cur = v;
    while (cur.size() > 1) {
        std::vector<double> next((cur.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = 2 * i + 1 < cur.size() ? cur[2 * i] + cur[2 * i + 1] : cur[2 * i];
        cur = std::move(next);
    }
    return cur[0];
}

// A truncated series value plus a reported (never asserted) tail band from
// the e^l / l class-density heuristic; low/high are magnitudes of the
// omitted tail with a factor-two spread on either side of the closed form.
struct SeriesValue {
    double value = 0.0;
    double tail_low = 0.0;
    double tail_high = 0.0;
    double L_cut = 0.0;
};

namespace detail {

// Integral over (L, infinity) of l^m e^{-beta l}, by parts:
// I_0 = e^{-beta L}/beta,  I_m = L^m e^{-beta L}/beta + (m/beta) I_{m-1}.
inline double tail_monomial(int m, double beta, double L) {
    double I = std::exp(-beta * L) / beta;
    for (int k = 1; k <= m; ++k)
        I = std::pow(L, k) * std::exp(-beta * L) / beta + k * I / beta;
    return I;
}

// det(1 - eta) / |D|^{1/2} memoized per distinct polynomial.
struct ClassWeight {
    std::map<UnitPoly, double> memo;
    double operator()(const UnitPoly& q) {
        auto it = memo.find(q);
        if (it == memo.end())
            it = memo.emplace(q, tr_psi_exact(companion_mat(q)).convert_to<double>() /
                                     sqrt_int(d_of_gamma(q)))
                     .first;
        return it->second;
    }
};

inline void require_census_covers(const Census& c, double L_cut, const char* who) {
    if (!(L_cut > 0))
        throw DomainError(std::string(who) + ": L_cut must be positive");
    if (!(L_cut <= 3.0 * c.r_max + 1e-9))
        throw DomainError(std::string(who) +
                          ": census is too small for this length cut; rerun the sweep with "
                          "r_max of at least " +
                          fmt17(L_cut / 3.0));
}

}  // namespace detail

// Closed-form integral over (L, infinity) of e^{3l/2} phi_hat(N, lambda, l):
// the density heuristic e^l/l, times the root-length weight l, times the
// c_gamma -> 1 envelope e^{l/2} phi_hat.  Infinite unless sqrt(lambda) > 3/2,
// i.e. lambda > 9/4, which is why larger lambda is recommended.
inline double geometric_tail(int N, double lambda, double L) {
    if (N < 1) throw DomainError("geometric_tail: N must be at least 1");
    if (!(lambda > 0)) throw DomainError("geometric_tail: lambda must be positive");
    double beta = std::sqrt(lambda) - 1.5;
    if (!(beta > 0)) return std::numeric_limits<double>::infinity();
    KernelPoly p = p_N_coeffs(N);
    double sum = 0.0;
    for (std::size_t j = 1; j < p.coeffs.size(); ++j) {
        if (p.coeffs[j] == 0) continue;
        sum += p.coeffs[j].convert_to<double>() * std::pow(lambda, -0.5 * static_cast<double>(j)) *
               detail::tail_monomial(2 * N - 1 - static_cast<int>(j), beta, L);
    }
    return sum;
}

// Truncated geometric side: over every census record with l <= L_cut,
//   3 R(root) * det(1 - eta(poly)) / |D(poly)|^{1/2} * phi_hat(N, lambda, l),
// i.e. each class (primitive or a power) weighted by the length of its
// primitive root.  Every term is strictly negative.
inline SeriesValue geometric_side(const Census& c, int N, double lambda, double L_cut) {
    if (N < 1) throw DomainError("geometric_side: N must be at least 1");
    if (!(lambda > 0)) throw DomainError("geometric_side: lambda must be positive");
    detail::require_census_covers(c, L_cut, "geometric_side");
    detail::ClassWeight weight;
    std::vector<double> terms;
    terms.reserve(c.records.size());
    for (const GeodesicClass& rec : c.records) {
        if (rec.l > L_cut) continue;
        terms.push_back(3.0 * rec.R * weight(rec.poly) * phi_hat(N, lambda, rec.l));
    }
    double t = geometric_tail(N, lambda, L_cut);
    return SeriesValue{pairwise_sum(terms), 0.5 * t, 2.0 * t, L_cut};
}

// Truncated Dirichlet series L(s) = sum over records of
// 3 R(root) * c_gamma * e^{-l s}; every term is strictly positive.  The tail
// band integrates the density heuristic with c_gamma ~ 1:
// integral over (L_cut, infinity) of e^{(1-s) l} dl = e^{-(s-1) L}/(s-1).
inline SeriesValue l_series(const Census& c, double s, double L_cut) {
    if (!(s > 1.0)) throw DomainError("l_series: s must exceed 1");
    detail::require_census_covers(c, L_cut, "l_series");
    detail::ClassWeight weight;
    std::vector<double> terms;
    terms.reserve(c.records.size());
    for (const GeodesicClass& rec : c.records) {
        if (rec.l > L_cut) continue;
        double cg = -weight(rec.poly) * std::exp(-rec.l / 2.0);
        terms.push_back(3.0 * rec.R * cg * std::exp(-rec.l * s));
    }
    double t = std::exp(-(s - 1.0) * L_cut) / (s - 1.0);
    return SeriesValue{pairwise_sum(terms), 0.5 * t, 2.0 * t, L_cut};
}

// Membership in S_alpha^2 = { x + iy : x + y^2/(4 alpha^2) <= alpha^2 },
// the image under z -> z^2 of the strip |Re z| <= alpha.
inline bool s_alpha_member(double alpha, std::complex<double> lambda) {
    if (!(alpha > 0)) throw DomainError("s_alpha_member: alpha must be positive");
    double y = lambda.imag();
    return lambda.real() + y * y / (4.0 * alpha * alpha) <= alpha * alpha;
}

// Solve s(s+1) + 1/4 = lambda for the root with Re s >= -1/2.  Since
// s(s+1) + 1/4 = (s + 1/2)^2, that root is sqrt(lambda) - 1/2 on the
// principal branch.
inline std::complex<double> pole_to_s(std::complex<double> lambda) {
    return std::sqrt(lambda) - 0.5;
}

}  // namespace cubic
