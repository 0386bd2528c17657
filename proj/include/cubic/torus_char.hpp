#pragma once

// Exact virtual-character arithmetic for SL3 and SO(3).
//
// An SL3 torus character lives in the Laurent ring Z[x^±, y^±], where x and
// y are the first two eigenvalues of diag(t1, t2, t3) and the third is
// eliminated by t1 t2 t3 = 1.  The basis weights are w1(diag) = t1 and
// w2(diag) = t2, so the weight a*w1 + b*w2 is the monomial x^a y^b and the
// dominant weights are exactly a >= b >= 0.  A monomial with exponents
// (p, q) stands for the eigenvalue-exponent triple (p, q, 0) modulo the
// all-ones shift, and the Weyl group acts by permuting that triple.
//
// SO(3) characters are one-variable Laurent polynomials in the circle
// coordinate z; the irreducible of dimension 2k+1 has character
// sum_{j=-k..k} z^j.
//
// Everything is integer-exact; decompositions peel highest weights and are
// deterministic.

#include <algorithm>
#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cubic/base.hpp"

namespace cubic {

struct TorusChar {
    std::map<std::array<int, 2>, Int> c;  // exponents (p, q) -> coefficient
    friend bool operator==(const TorusChar&, const TorusChar&) = default;
};

struct KChar {
    std::map<int, Int> c;  // z-exponent -> coefficient
    friend bool operator==(const KChar&, const KChar&) = default;
};

namespace detail {

template <typename Chr, typename Key>
inline void addmul(Chr& a, const Key& e, const Int& v) {
    if (v == 0) return;
    auto it = a.c.find(e);
    if (it == a.c.end()) {
        a.c.emplace(e, v);
    } else {
        it->second += v;
        if (it->second == 0) a.c.erase(it);
    }
}

template <typename Chr>
inline Chr chr_add(const Chr& a, const Chr& b, int sign) {
    Chr r = a;
    for (const auto& [e, v] : b.c) addmul(r, e, Int(sign * v));
    return r;
}

// Exact division of every coefficient by k (Newton-recurrence step).
template <typename Chr>
inline Chr chr_div(const Chr& a, int k) {
    Chr r;
    for (const auto& [e, v] : a.c) {
        if (v % k != 0) throw DomainError("character division is not exact");
        r.c.emplace(e, Int(v / k));
    }
    return r;
}

}  // namespace detail

inline TorusChar operator+(const TorusChar& a, const TorusChar& b) { return detail::chr_add(a, b, 1); }
inline TorusChar operator-(const TorusChar& a, const TorusChar& b) { return detail::chr_add(a, b, -1); }
inline KChar operator+(const KChar& a, const KChar& b) { return detail::chr_add(a, b, 1); }
inline KChar operator-(const KChar& a, const KChar& b) { return detail::chr_add(a, b, -1); }

inline TorusChar operator*(const TorusChar& a, const TorusChar& b) {
    TorusChar r;
    for (const auto& [ea, va] : a.c)
        for (const auto& [eb, vb] : b.c)
            detail::addmul(r, std::array<int, 2>{ea[0] + eb[0], ea[1] + eb[1]}, Int(va * vb));
    return r;
}

inline KChar operator*(const KChar& a, const KChar& b) {
    KChar r;
    for (const auto& [ea, va] : a.c)
        for (const auto& [eb, vb] : b.c) detail::addmul(r, ea + eb, Int(va * vb));
    return r;
}

inline TorusChar scale(const TorusChar& a, const Int& k) {
    TorusChar r;
    if (k != 0)
        for (const auto& [e, v] : a.c) r.c.emplace(e, Int(k * v));
    return r;
}

// Virtual dimension: the character value at the identity.
inline Int dim(const TorusChar& a) {
    Int d = 0;
    for (const auto& [e, v] : a.c) d += v;
    return d;
}

inline Int dim(const KChar& a) {
    Int d = 0;
    for (const auto& [e, v] : a.c) d += v;
    return d;
}

// Adams operation: substitute every variable by its k-th power.
inline TorusChar adams(const TorusChar& a, int k) {
    TorusChar r;
    for (const auto& [e, v] : a.c) r.c.emplace(std::array<int, 2>{k * e[0], k * e[1]}, v);
    return r;
}

inline KChar adams(const KChar& a, int k) {
    KChar r;
    for (const auto& [e, v] : a.c) r.c.emplace(k * e, v);
    return r;
}

inline TorusChar one_char() {
    TorusChar r;
    r.c.emplace(std::array<int, 2>{0, 0}, Int(1));
    return r;
}

inline KChar one_kchar() {
    KChar r;
    r.c.emplace(0, Int(1));
    return r;
}

// Standard 3-dimensional representation: torus eigenvalues t1, t2, t3.
inline TorusChar st_char() {
    TorusChar r;
    r.c.emplace(std::array<int, 2>{1, 0}, Int(1));
    r.c.emplace(std::array<int, 2>{0, 1}, Int(1));
    r.c.emplace(std::array<int, 2>{-1, -1}, Int(1));
    return r;
}

// Character of the (2k+1)-dimensional SO(3) irreducible on the circle.
inline KChar delta_char(int k) {
    if (k < 0) throw DomainError("delta_char: k must be nonnegative");
    KChar r;
    for (int j = -k; j <= k; ++j) r.c.emplace(j, Int(1));
    return r;
}

// Exterior and symmetric powers by the Newton recurrences
//   k e_k = sum_{i=1..k} (-1)^(i-1) adams_i * e_{k-i},
//   k h_k = sum_{i=1..k} adams_i * h_{k-i};
// exact for genuine characters (division by k always comes out integral).
template <typename Chr>
inline Chr wedge(const Chr& a, int k) {
    if (k < 0) throw DomainError("wedge: degree must be nonnegative");
    std::vector<Chr> e(static_cast<std::size_t>(k) + 1);
    e[0] = [] { Chr r; r.c.emplace(typename decltype(r.c)::key_type{}, Int(1)); return r; }();
    for (int m = 1; m <= k; ++m) {
        Chr acc;
        for (int i = 1; i <= m; ++i) {
            Chr t = adams(a, i) * e[m - i];
            acc = i % 2 ? acc + t : acc - t;
        }
        e[m] = detail::chr_div(acc, m);
    }
    return e[k];
}

template <typename Chr>
inline Chr sym(const Chr& a, int k) {
    if (k < 0) throw DomainError("sym: degree must be nonnegative");
    std::vector<Chr> h(static_cast<std::size_t>(k) + 1);
    h[0] = [] { Chr r; r.c.emplace(typename decltype(r.c)::key_type{}, Int(1)); return r; }();
    for (int m = 1; m <= k; ++m) {
        Chr acc;
        for (int i = 1; i <= m; ++i) acc = acc + adams(a, i) * h[m - i];
        h[m] = detail::chr_div(acc, m);
    }
    return h[k];
}

inline TorusChar tensor(const TorusChar& a, const TorusChar& b) { return a * b; }
inline KChar tensor(const KChar& a, const KChar& b) { return a * b; }

namespace detail {

// The six Weyl images of an exponent pair: permute the eigenvalue-exponent
// triple (p, q, 0) and renormalize so the third component is zero again.
inline std::array<std::array<int, 2>, 6> weyl_images(const std::array<int, 2>& e) {
    std::array<int, 3> m{e[0], e[1], 0};
    std::array<std::array<int, 3>, 6> perms{{{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    std::array<std::array<int, 2>, 6> out;
    for (int i = 0; i < 6; ++i) {
        std::array<int, 3> w{m[perms[i][0]], m[perms[i][1]], m[perms[i][2]]};
        out[i] = {w[0] - w[2], w[1] - w[2]};
    }
    return out;
}

}  // namespace detail

inline bool weyl_symmetric(const TorusChar& a) {
    for (const auto& [e, v] : a.c)
        for (const auto& img : detail::weyl_images(e)) {
            auto it = a.c.find(img);
            if (it == a.c.end() || it->second != v) return false;
        }
    return true;
}

// Irreducible character of highest weight a*w1 + b*w2 via the Jacobi-Trudi
// determinant det(h_{mu_i - i + j}) for the partition (a, b, 0), with h_k
// the complete homogeneous functors of the standard representation.
inline TorusChar irr_char(int a, int b) {
    if (b < 0 || a < b) throw DomainError("irr_char: weight must be dominant (a >= b >= 0)");
    std::array<int, 3> mu{a, b, 0};
    TorusChar st = st_char();
    std::map<int, TorusChar> hs;
    auto h = [&](int k) -> const TorusChar& {
        auto it = hs.find(k);
        if (it == hs.end()) it = hs.emplace(k, k < 0 ? TorusChar{} : sym(st, k)).first;
        return it->second;
    };
    auto entry = [&](int i, int j) -> const TorusChar& { return h(mu[i] - i + j); };
    TorusChar r = entry(0, 0) * (entry(1, 1) * entry(2, 2) - entry(1, 2) * entry(2, 1)) -
                  entry(0, 1) * (entry(1, 0) * entry(2, 2) - entry(1, 2) * entry(2, 0)) +
                  entry(0, 2) * (entry(1, 0) * entry(2, 1) - entry(1, 1) * entry(2, 0));
    return r;
}

// Virtual decomposition into irreducibles: repeatedly peel the highest
// monomial (maximal in (p+q, p) lexicographic order, which Weyl symmetry
// forces to be dominant) and subtract its irreducible character.
inline std::map<std::array<int, 2>, Int> decompose(TorusChar c) {
    if (!weyl_symmetric(c)) throw DomainError("decompose: character is not Weyl symmetric");
    std::map<std::array<int, 2>, Int> out;
    int guard = 0;
    while (!c.c.empty()) {
        if (++guard > 20000) throw DomainError("decompose: did not terminate");
        auto best = c.c.begin();
        auto key = [](const std::array<int, 2>& e) { return std::pair<int, int>{e[0], e[1]}; };
        for (auto it = c.c.begin(); it != c.c.end(); ++it)
            if (key(it->first) > key(best->first)) best = it;
        std::array<int, 2> w = best->first;
        Int mult = best->second;
        if (w[1] < 0 || w[0] < w[1])
            throw DomainError("decompose: leading monomial is not dominant");
        c = c - scale(irr_char(w[0], w[1]), mult);
        out.emplace(w, mult);
    }
    return out;
}

// Symmetric square of the standard representation and the alternating sum
// of its exterior powers (the trace of the latter equals det(1 - eta)).
inline TorusChar eta_char() { return sym(st_char(), 2); }

inline TorusChar psi_char() {
    TorusChar eta = eta_char(), acc;
    for (int j = 0; j <= 6; ++j) {
        TorusChar w = wedge(eta, j);
        acc = j % 2 ? acc - w : acc + w;
    }
    return acc;
}

// Restriction to the principal circle of SO(3): eigenvalues (z, 1, 1/z), so
// the monomial with eigenvalue exponents (p, q, 0) goes to z^p.
inline KChar to_principal_circle(const TorusChar& t) {
    KChar k;
    for (const auto& [e, v] : t.c) detail::addmul(k, e[0], v);
    return k;
}

// Peel an SO(3) character (z <-> 1/z symmetric) into delta multiplicities.
inline std::map<int, Int> k_decompose(KChar k) {
    for (const auto& [e, v] : k.c) {
        auto it = k.c.find(-e);
        if (it == k.c.end() || it->second != v)
            throw DomainError("k_decompose: character is not symmetric under inversion");
    }
    std::map<int, Int> out;
    int guard = 0;
    while (!k.c.empty()) {
        if (++guard > 20000) throw DomainError("k_decompose: did not terminate");
        int top = k.c.rbegin()->first;
        Int mult = k.c.rbegin()->second;
        KChar d = delta_char(top);
        for (const auto& [e, v] : d.c) detail::addmul(k, e, Int(-mult * v));
        out.emplace(top, mult);
    }
    return out;
}

// Branching of the SL3 irreducible to SO(3) through the principal circle.
inline std::map<int, Int> branch_to_K(int a, int b) {
    return k_decompose(to_principal_circle(irr_char(a, b)));
}

// Branching of the SO(3) irreducible of dimension 2k+1 to the Klein
// four-group of pi-rotations, by solving its 4-point character table.  The
// character takes the value 2k+1 at the identity and sum (-1)^j = (-1)^k at
// every pi-rotation (substitute z = -1).
inline std::array<Int, 4> branch_K_to_M0(int k) {
    KChar d = delta_char(k);
    Int at_e = 0, at_r = 0;
    for (const auto& [e, v] : d.c) {
        at_e += v;
        at_r += (e % 2 == 0) ? v : -v;
    }
    const int table[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};
    std::array<Int, 4> vals{at_e, at_r, at_r, at_r};
    std::array<Int, 4> out;
    for (int i = 0; i < 4; ++i) {
        Int s = 0;
        for (int j = 0; j < 4; ++j) s += table[i][j] * vals[j];
        if (s % 4 != 0 || s < 0) throw DomainError("branch_K_to_M0: invalid character values");
        out[i] = Int(s / 4);
    }
    return out;
}

// Restriction of the SO(3) irreducible to the circle: z^-k + ... + z^k.
inline KChar branch_K_to_SO2(int k) { return delta_char(k); }

// The invariant quadratic form on weights, in the eigenvalue-exponent
// coordinates (a, b) standing for the triple (a, b, 0); normalized so that
// B(rho) = B(2, 1) = 1/3.
inline Rat weight_B(int a, int b) {
    return Rat(Int(Int(a) * a + Int(b) * b - Int(a) * b), 9);
}

// Casimir eigenvalue on the irreducible with highest weight (a, b):
// B(lambda + rho) - B(rho) with rho = (2, 1), B(rho) = 1/3.
inline Rat casimir(int a, int b) {
    if (b < 0 || a < b) throw DomainError("casimir: weight must be dominant (a >= b >= 0)");
    return Rat(weight_B(a + 2, b + 1) - weight_B(2, 1));
}

// The K-side test representation delta_4 - delta_2 - 2*delta_0 and the two
// parabolic shift constants whose B-values add up to B(rho).
struct Tau0 {
    std::map<int, Int> mult;  // k -> multiplicity of delta_{2k}
    Rat B_rho1;
    Rat B_rho_M1;
};

inline Tau0 tau0() {
    Tau0 t;
    t.mult = {{2, Int(1)}, {1, Int(-1)}, {0, Int(-2)}};
    t.B_rho1 = Rat(1, 4);
    t.B_rho_M1 = Rat(1, 12);
    if (Rat(t.B_rho1 + t.B_rho_M1) != weight_B(2, 1))
        throw DomainError("tau0: parabolic shifts do not add up to B(rho)");
    return t;
}

// K-multiplicity pairing of an SL3 irreducible against tau0.
inline Int tau0_pairing(int a, int b) {
    Tau0 t = tau0();
    Int k = 0;
    for (const auto& [j, m] : branch_to_K(a, b)) {
        auto it = t.mult.find(j);
        if (it != t.mult.end()) k += m * it->second;
    }
    return k;
}

struct SpectralPole {
    Rat location;     // lambda value of the pole
    Int coefficient;  // signed residue coefficient of (lambda - location)^-N
};

struct TrivialTerm {
    Rat value;
    std::vector<SpectralPole> poles;  // sorted by location
};

// Contribution of the trivial representation to the spectral side:
//   sum_sigma [psi : sigma] * K(sigma) * (lambda - 1/4 - casimir(sigma))^-N
// with K(sigma) the tau0 pairing of sigma's K-restriction.  Everything is
// recomputed from the character ring on every call; no table is stored.
inline TrivialTerm trivial_spectral_term(int N, const Rat& lambda) {
    if (N < 1) throw DomainError("trivial_spectral_term: N must be at least 1");
    std::map<Rat, Int> acc;
    for (const auto& [w, mult] : decompose(psi_char())) {
        Int K = tau0_pairing(w[0], w[1]);
        if (K == 0) continue;
        Rat loc = Rat(Rat(1, 4) + casimir(w[0], w[1]));
        acc[loc] += Int(mult * K);
    }
    TrivialTerm out;
    out.value = 0;
    for (const auto& [loc, coef] : acc) {
        if (coef == 0) continue;
        if (lambda == loc)
            throw DomainError("trivial_spectral_term: evaluation at the pole lambda = " +
                              rat_num(loc).str() + "/" + rat_den(loc).str());
        Rat den = 1;
        for (int i = 0; i < N; ++i) den = Rat(den * Rat(lambda - loc));
        out.value = Rat(out.value + Rat(Rat(coef) / den));
        out.poles.push_back(SpectralPole{loc, coef});
    }
    return out;
}

}  // namespace cubic
