#pragma once

// Characteristic polynomials of norm-one units in cubic orders.
//
// A pair (t, s) encodes f(X) = X^3 - t X^2 + s X - 1, the characteristic
// polynomial of a candidate unit (determinant one forces the constant term).
// The only possible rational roots are +-1 since the constant term is -1, so
// irreducibility over Q is decided by the two evaluations
//   f(1)  = s - t,          f(-1) = -(t + s + 2).
// A pair is admissible when f is irreducible and has negative discriminant
// (one real root, one complex pair), i.e. s != t, s != -t-2 and disc < 0.
// The inverse unit has characteristic polynomial (s, t); the canonical
// representative of the pair {u, u^-1} is the one with t > s, which is
// equivalent to the real root being > 1.

#include <array>
#include <cstdint>
#include <string>

#include "cubic/base.hpp"

namespace cubic {

struct UnitPoly {
    std::int64_t t = 0;
    std::int64_t s = 0;
    friend auto operator<=>(const UnitPoly&, const UnitPoly&) = default;
};

inline std::string to_string(const UnitPoly& p) {
    return std::to_string(p.t) + "," + std::to_string(p.s);
}

inline UnitPoly parse_poly(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) throw DomainError("expected \"t,s\": " + text);
    try {
        std::size_t a = 0, b = 0;
        std::int64_t t = std::stoll(text.substr(0, comma), &a);
        std::int64_t s = std::stoll(text.substr(comma + 1), &b);
        if (a != comma || b != text.size() - comma - 1)
            throw DomainError("trailing characters in \"" + text + "\"");
        return {t, s};
    } catch (const std::logic_error&) {
        throw DomainError("cannot parse \"" + text + "\" as integers t,s");
    }
}

inline UnitPoly invert(const UnitPoly& p) { return {p.s, p.t}; }

inline bool is_canonical(const UnitPoly& p) { return p.t > p.s; }

inline UnitPoly canonicalize(const UnitPoly& p) { return is_canonical(p) ? p : invert(p); }

// disc(f) = t^2 s^2 + 18 t s - 4 t^3 - 4 s^3 - 27, exact.
inline Int disc_cubic(const UnitPoly& p) {
    Int t(p.t), s(p.s);
    return t * t * s * s + 18 * t * s - 4 * t * t * t - 4 * s * s * s - 27;
}

inline bool is_admissible(const UnitPoly& p) {
    if (p.s == p.t) return false;              // f(1) = 0
    if (p.s == -p.t - 2) return false;         // f(-1) = 0
    return disc_cubic(p) < 0;                  // one real root, one complex pair
}

inline void require_admissible(const UnitPoly& p, const char* who = "operation") {
    if (!is_admissible(p))
        throw DomainError(std::string(who) + ": (" + to_string(p) + ") is not admissible");
}

// Power sum P_k = sum of k-th powers of the roots of f.  Newton recurrence
// P_k = t P_{k-1} - s P_{k-2} + P_{k-3} with P_0 = 3, P_1 = t, P_2 = t^2-2s.
inline Int trace_power(const UnitPoly& p, unsigned k) {
    Int t(p.t), s(p.s);
    if (k == 0) return 3;
    if (k == 1) return t;
    if (k == 2) return t * t - 2 * s;
    Int p0 = 3, p1 = t, p2 = t * t - 2 * s;
    for (unsigned i = 3; i <= k; ++i) {
        Int p3 = t * p2 - s * p1 + p0;
        p0 = p1; p1 = p2; p2 = p3;
    }
    return p2;
}

// Characteristic polynomial of u^mu when u has characteristic polynomial p:
// elementary symmetric functions of the mu-th powers of the roots, via power
// sums (the product of all roots stays 1).
inline UnitPoly newton_power(const UnitPoly& p, unsigned mu) {
    if (mu == 0) throw DomainError("newton_power: exponent must be positive");
    Int pm = trace_power(p, mu);
    Int p2m = trace_power(p, 2 * mu);
    Int e1 = pm;
    Int e2 = (pm * pm - p2m) / 2;
    return {checked_i64(e1, "newton_power trace"), checked_i64(e2, "newton_power second symmetric")};
}

// Companion matrix of f with determinant one; column j holds the coordinates
// of X * X^j reduced modulo f in the basis (1, X, X^2).  Row-major.
inline std::array<std::int64_t, 9> companion(const UnitPoly& p) {
    return {0, 0, 1,
            1, 0, -p.s,
            0, 1, p.t};
}

}  // namespace cubic
