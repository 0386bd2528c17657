#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "cubic/trace_geometry.hpp"
#include "oracles.hpp"

using namespace cubic;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Mat3 to_mat(const std::array<std::int64_t, 9>& m) {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r[i] = m[i];
    return r;
}

}  // namespace

TEST_CASE("kernel polynomial coefficients") {
    KernelPoly p1 = p_N_coeffs(1);
    REQUIRE(p1.coeffs.size() == 2);
    CHECK(p1.coeffs[0] == Rat(0));
    CHECK(p1.coeffs[1] == Rat(1, 2));

    KernelPoly p2 = p_N_coeffs(2);
    REQUIRE(p2.coeffs.size() == 4);
    CHECK(p2.coeffs[0] == Rat(0));
    CHECK(p2.coeffs[1] == Rat(0));
    CHECK(p2.coeffs[2] == Rat(1, 4));
    CHECK(p2.coeffs[3] == Rat(1, 4));

    // Degree 2N-1, nonnegative coefficients, zero constant term, and the
    // leading coefficient (1/2) * prod (2j-1)/2 that matches the x = 0 value.
    Rat lead(1, 2);
    for (int N = 1; N <= 10; ++N) {
        KernelPoly p = p_N_coeffs(N);
        CHECK(p.degree() == 2 * N - 1);
        CHECK(p.coeffs[0] == Rat(0));
        for (const Rat& c : p.coeffs) CHECK(c >= 0);
        CHECK(p.coeffs.back() == lead);
        lead = Rat(lead * Rat(2 * N - 1, 2));
    }

    CHECK_THROWS_AS(p_N_coeffs(0), DomainError);
}

TEST_CASE("kernel transform: closed forms and the derivative ladder") {
    CHECK_THAT(phi_hat(1, 1.0, 2.0), WithinRel(std::exp(-2.0) / 2.0, 1e-14));
    CHECK_THAT(phi_hat(1, 4.0, 1.0), WithinRel(std::exp(-2.0) / 4.0, 1e-14));

    // At x = 0: the iterated minus-d/d-lambda derivative of 1/(2 sqrt(lambda)).
    for (double lam : {1.0, 4.0, 9.0})
        CHECK_THAT(phi_hat(1, lam, 0.0), WithinRel(0.5 / std::sqrt(lam), 1e-15));
    CHECK_THAT(phi_hat(2, 1.0, 0.0), WithinAbs(0.25, 1e-16));

    // The x = 0 value is the removable limit of the polynomial form.
    for (int N : {2, 3})
        for (double lam : {1.0, 2.5})
            CHECK_THAT(phi_hat(N, lam, 1e-9), WithinRel(phi_hat(N, lam, 0.0), 1e-6));

    // Strict positivity across a grid.
    for (int N = 1; N <= 5; ++N)
        for (double lam : {0.5, 1.0, 3.0, 9.0})
            for (double x : {0.0, 0.3, 1.0, 4.0}) CHECK(phi_hat(N, lam, x) > 0.0);

    // Raising N by one applies minus-d/d-lambda: central finite differences.
    const double h = 1e-4;
    for (int N = 1; N <= 4; ++N)
        for (double lam : {1.0, 2.5, 4.0})
            for (double x : {0.0, 0.5, 1.0, 3.0}) {
                double fd = (phi_hat(N, lam - h, x) - phi_hat(N, lam + h, x)) / (2.0 * h);
                double next = phi_hat(N + 1, lam, x);
                CHECK_THAT(fd, WithinRel(next, 1e-5) || WithinAbs(next, 1e-12));
            }

    CHECK_THROWS_AS(phi_hat(0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(phi_hat(1, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(phi_hat(1, -2.0, 1.0), DomainError);
}

TEST_CASE("kernel transform matches the Fourier quadrature oracle") {
    // phi_hat is (1/2pi) * integral of (N-1)! (y^2+lambda)^{-N} e^{-ixy} dy;
    // by evenness, (1/pi) * integral over [0, Y] of cos(xy) * ..., with Y
    // large enough that the absolute tail is below 1e-10.
    auto quad = [](int N, double lam, double x, double Y) {
        double fact = 1.0;
        for (int j = 2; j < N; ++j) fact *= j;
        return fact / std::acos(-1.0) *
               oracles::integrate(
                   [&](double y) { return std::cos(x * y) * std::pow(y * y + lam, -N); }, 0.0, Y,
                   1e-10);
    };

    // Tail of (y^2+1)^{-2} beyond 1500 is under 1500^{-3}/3 < 1e-10.
    CHECK_THAT(phi_hat(2, 1.0, 1.0), WithinRel(quad(2, 1.0, 1.0, 1500.0), 1e-6));
    CHECK_THAT(phi_hat(2, 1.0, 0.0), WithinRel(quad(2, 1.0, 0.0, 1500.0), 1e-6));
    // Tail of 2 (y^2+2)^{-3} beyond 80 is under 2 * 80^{-5}/5 < 1e-10.
    CHECK_THAT(phi_hat(3, 2.0, 0.7), WithinRel(quad(3, 2.0, 0.7, 80.0), 1e-6));
}

TEST_CASE("adjoint determinant") {
    CHECK(d_of_gamma(UnitPoly{0, -1}) == 23);
    CHECK(d_of_gamma(UnitPoly{3, 1}) == 76);

    for (std::int64_t t = -8; t <= 8; ++t)
        for (std::int64_t s = -8; s <= 8; ++s) {
            UnitPoly p{t, s};
            if (!is_admissible(p)) continue;
            CHECK(d_of_gamma(p) == Int(-disc_cubic(p)));
            CHECK(d_of_gamma(p) > 0);
        }

    // Numeric oracle: the six-fold product of (1 - alpha_i/alpha_j) over the
    // adjoint eigenvalue ratios, from floating-point roots.
    std::mt19937_64 rng(424243);
    std::uniform_int_distribution<std::int64_t> ts(-9, 9);
    int done = 0;
    while (done < 50) {
        UnitPoly p{ts(rng), ts(rng)};
        if (!is_admissible(p)) continue;
        auto r = oracles::cubic_roots(static_cast<double>(p.t), static_cast<double>(p.s));
        std::complex<double> prod(1.0, 0.0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) prod *= (1.0 - r[i] / r[j]);
        double exact = d_of_gamma(p).convert_to<double>();
        CHECK_THAT(prod.real(), WithinRel(exact, 1e-8));
        CHECK_THAT(prod.imag() / exact, WithinAbs(0.0, 1e-8));
        ++done;
    }

    CHECK_THROWS_AS(d_of_gamma(UnitPoly{1, 1}), DomainError);
}

TEST_CASE("class weights") {
    // (0,-1): numerator -det(1-eta) = 1 exactly, so the weight is
    // e^{-l/2} / sqrt(23).
    double l01 = regulator_and_length(UnitPoly{0, -1}).second.mid();
    CHECK_THAT(c_gamma(UnitPoly{0, -1}), WithinRel(std::exp(-l01 / 2.0) / std::sqrt(23.0), 1e-12));
    CHECK_THAT(c_gamma(UnitPoly{0, -1}), WithinRel(0.1367574350577094, 1e-9));
    CHECK_THAT(c_gamma(UnitPoly{3, 1}), WithinRel(0.59738076626264258, 1e-9));

    // Strictly positive and of moderate size across a whole census.
    Census c2 = run_sweep(2.0);
    for (const GeodesicClass& rec : c2.records) {
        double c = c_gamma(rec.poly);
        CHECK(c > 0.0);
        CHECK(c < 10.0);
    }

    // Along the power family of a primitive root the weight does not tend to
    // 1 pointwise: the denominator sqrt|D| carries an oscillating factor
    // 2|sin(mu theta)| from the complex embedding angle theta, and it is the
    // product c * 2|sin(mu theta)| that tends to 1.
    auto roots = oracles::cubic_roots(0, -1);
    std::complex<double> beta = roots[1].imag() > 1e-9 ? roots[1] : roots[2];
    double theta = std::arg(beta);
    for (int mu = 1; mu <= 34; ++mu)
        CHECK(c_gamma(newton_power(UnitPoly{0, -1}, static_cast<unsigned>(mu))) > 0.0);
    for (int mu : {24, 26, 28, 30, 32, 34}) {
        double c = c_gamma(newton_power(UnitPoly{0, -1}, static_cast<unsigned>(mu)));
        double corrected = c * 2.0 * std::fabs(std::sin(mu * theta));
        CHECK_THAT(corrected, WithinAbs(1.0, 0.1));
    }

    CHECK_THROWS_AS(c_gamma(UnitPoly{1, 1}), DomainError);
}

TEST_CASE("orbital integrals") {
    Census c03 = run_sweep(0.3);
    REQUIRE(c03.records.size() == 1);
    const GeodesicClass& rec = c03.records[0];
    REQUIRE(rec.poly == UnitPoly{0, -1});
    CHECK_THAT(orbital_integral(rec, 1, 1.0),
               WithinRel(std::exp(-rec.l) / 2.0 / std::sqrt(23.0), 1e-12));
    CHECK_THAT(orbital_integral(rec, 1, 1.0), WithinRel(0.044847249836753048, 1e-9));

    // Split-rank-two marker (nonnegative discriminant) contributes exactly 0.
    GeodesicClass marker;
    marker.poly = UnitPoly{5, 5};  // disc = 48 > 0
    marker.l = 1.0;
    REQUIRE(disc_cubic(marker.poly) > 0);
    CHECK(orbital_integral(marker, 1, 1.0) == 0.0);
    CHECK(orbital_integral(marker, 3, 7.0) == 0.0);

    // Positivity across an (N, lambda) grid for twenty census records.
    Census c2 = run_sweep(2.0);
    REQUIRE(c2.records.size() >= 20);
    for (int N = 1; N <= 5; ++N)
        for (double lam : {0.5, 1.0, 2.25, 5.0, 12.0})
            for (std::size_t i = 0; i < 20; ++i)
                CHECK(orbital_integral(c2.records[i], N, lam) > 0.0);

    CHECK_THROWS_AS(orbital_integral(rec, 0, 1.0), DomainError);
    CHECK_THROWS_AS(orbital_integral(rec, 1, 0.0), DomainError);
}

TEST_CASE("fixed-tree pairwise summation") {
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.25}) == 3.25);
    double a = 0.1, b = 0.7, c = 1e-17, d = -0.3;
    CHECK(pairwise_sum({a, b, c, d}) == (a + b) + (c + d));
    CHECK(pairwise_sum({a, b, c}) == (a + b) + c);
    CHECK(pairwise_sum({a, b, c, d, a}) == ((a + b) + (c + d)) + a);
}

TEST_CASE("geometric side") {
    Census empty;
    empty.r_max = 1.0;
    CHECK(geometric_side(empty, 1, 9.0, 1.5).value == 0.0);

    Census c12 = run_sweep(1.2);
    REQUIRE(!c12.records.empty());

    // Strict negativity over the recommended grid.
    for (int N : {1, 2, 3})
        for (double lam : {3.0, 5.0, 10.0}) CHECK(geometric_side(c12, N, lam, 3.6).value < 0.0);

    // Adding terms only pushes the value further down.
    double prev = 0.0;
    for (double L : {1.0, 2.0, 3.0, 3.6}) {
        double v = geometric_side(c12, 1, 9.0, L).value;
        CHECK(v <= prev + 1e-15);
        prev = v;
    }

    // Naive in-order accumulation agrees with the fixed-tree reduction.
    {
        double naive = 0.0;
        for (const GeodesicClass& rec : c12.records) {
            if (rec.l > 3.6) continue;
            double w = tr_psi_exact(to_mat(companion(rec.poly))).convert_to<double>() /
                       std::sqrt(d_of_gamma(rec.poly).convert_to<double>());
            naive += 3.0 * rec.R * w * phi_hat(2, 9.0, rec.l);
        }
        CHECK_THAT(geometric_side(c12, 2, 9.0, 3.6).value, WithinRel(naive, 1e-12));
    }

    Census c06 = run_sweep(0.6);
    CHECK_THAT(geometric_side(c06, 1, 9.0, 1.8).value,
               WithinRel(-0.0065635355375068165, 1e-10));

    // Tail diagnostic: closed form against direct quadrature of
    // e^{3l/2} phi_hat(N, lambda, l); infinite at lambda <= 9/4.
    double tail = geometric_tail(2, 9.0, 4.0);
    CHECK_THAT(tail, WithinRel(0.0002295140904320702, 1e-10));
    double quad = oracles::integrate(
        [](double l) { return std::exp(1.5 * l) * phi_hat(2, 9.0, l); }, 4.0, 60.0, 1e-13);
    CHECK_THAT(tail, WithinRel(quad, 1e-8));
    CHECK(std::isinf(geometric_side(c06, 1, 2.0, 1.8).tail_high));
    CHECK(geometric_side(c06, 1, 9.0, 1.8).tail_high ==
          4.0 * geometric_side(c06, 1, 9.0, 1.8).tail_low);

    CHECK_THROWS_AS(geometric_side(c06, 1, 9.0, 1.81), DomainError);
    CHECK_THROWS_AS(geometric_side(c06, 1, 9.0, 0.0), DomainError);
    CHECK_THROWS_AS(geometric_side(c06, 0, 9.0, 1.0), DomainError);
    CHECK_THROWS_AS(geometric_side(c06, 1, 0.0, 1.0), DomainError);
}

TEST_CASE("length Dirichlet series") {
    Census c06 = run_sweep(0.6);
    SeriesValue v = l_series(c06, 2.0, 1.8);
    CHECK_THAT(v.value, WithinRel(0.069445102532783076, 1e-10));

    // Manual recomputation, term by term, all terms positive.
    double manual = 0.0;
    for (const GeodesicClass& rec : c06.records) {
        double term = 3.0 * rec.R * c_gamma(rec.poly) * std::exp(-2.0 * rec.l);
        CHECK(term > 0.0);
        manual += term;
    }
    CHECK_THAT(v.value, WithinRel(manual, 1e-9));

    // Larger cuts only add positive mass.
    CHECK(l_series(c06, 2.0, 0.9).value < l_series(c06, 2.0, 1.8).value);

    // Tail band: closed-form density heuristic with a factor-two spread.
    CHECK_THAT(v.tail_low, WithinRel(0.5 * std::exp(-1.8) / 1.0, 1e-12));
    CHECK(v.tail_high == 4.0 * v.tail_low);

    // Opposite signs of the two series on the same census.
    CHECK(geometric_side(c06, 1, 9.0, 1.8).value < 0.0);
    CHECK(v.value > 0.0);

    Census c2 = run_sweep(2.0);
    CHECK_THAT(l_series(c2, 1.2, 6.0).value, WithinRel(1.1897992734825311, 1e-9));

    CHECK_THROWS_AS(l_series(c06, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(l_series(c06, 0.5, 1.0), DomainError);
    CHECK_THROWS_AS(l_series(c06, 2.0, 1.81), DomainError);
}

TEST_CASE("deterministic results across shard counts") {
    Census a = run_sweep(1.0, default_precision(), 1);
    Census b = run_sweep(1.0, default_precision(), 3);
    CHECK(geometric_side(a, 2, 9.0, 3.0).value == geometric_side(b, 2, 9.0, 3.0).value);
    CHECK(l_series(a, 1.5, 3.0).value == l_series(b, 1.5, 3.0).value);
}

TEST_CASE("spectral region and pole bookkeeping") {
    const double alpha = std::sqrt(19.0 / 12.0);

    // The rightmost pole lies outside the region; the lower two lie inside.
    CHECK(!s_alpha_member(alpha, {9.0 / 4.0, 0.0}));
    CHECK(s_alpha_member(alpha, {19.0 / 12.0, 0.0}));
    CHECK(s_alpha_member(alpha, {49.0 / 36.0, 0.0}));
    CHECK(s_alpha_member(alpha, {0.25, 0.0}));

    // Parabola boundary x = alpha^2 - y^2/(4 alpha^2): just inside is a
    // member, just outside is not.
    for (double y : {0.5, 1.0, 2.0}) {
        double x = alpha * alpha - y * y / (4.0 * alpha * alpha);
        CHECK(s_alpha_member(alpha, {x - 1e-9, y}));
        CHECK(!s_alpha_member(alpha, {x + 1e-9, y}));
    }

    CHECK_THAT(pole_to_s({9.0 / 4.0, 0.0}).real(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(pole_to_s({9.0 / 4.0, 0.0}).imag(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(pole_to_s({49.0 / 36.0, 0.0}).real(), WithinAbs(2.0 / 3.0, 1e-15));
    CHECK_THAT(pole_to_s({0.25, 0.0}).real(), WithinAbs(0.0, 1e-15));

    // s(s+1) + 1/4 inverts pole_to_s, and Re s >= -1/2 throughout.
    for (std::complex<double> lam : std::vector<std::complex<double>>{
             {2.0, 1.0}, {0.3, -0.7}, {9.0 / 4.0, 0.0}, {0.01, 0.0}, {-1.0, 2.0}}) {
        std::complex<double> s = pole_to_s(lam);
        std::complex<double> back = s * (s + 1.0) + 0.25;
        CHECK_THAT(std::abs(back - lam), WithinAbs(0.0, 1e-12));
        CHECK(s.real() >= -0.5);
    }

    CHECK_THROWS_AS(s_alpha_member(0.0, {1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(s_alpha_member(-1.0, {1.0, 0.0}), DomainError);
}
