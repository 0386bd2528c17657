#pragma once

// Orders in a cubic unit field: the monogenic order Z[th], multiplier rings,
// the maximal order by iterated p-radical enlargement (with a Dedekind-style
// maximality short-circuit at each prime), and enumeration of stable
// superlattices / overorders.

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cubic/factor.hpp"
#include "cubic/field.hpp"
#include "cubic/linalg.hpp"
#include "cubic/modp.hpp"

namespace cubic {

struct Order {
    UnitPoly p;  // ambient field presentation
    Lat L;       // basis over the power basis of p

    friend bool operator==(const Order&, const Order&) = default;
};

inline std::string order_serialize(const Order& o) {
    return to_string(o.p) + "|" + lat_serialize(o.L);
}

inline std::array<Elem, 3> lattice_basis_elems(const Lat& L) {
    std::array<Elem, 3> b;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b[i][j] = Rat(L.h[3 * i + j], L.den);
    return b;
}

inline bool elem_in_lattice(const Lat& L, const Elem& x) {
    Int den = lcm(lcm(rat_den(x[0]), rat_den(x[1])), rat_den(x[2]));
    Vec3 num{rat_num(x[0]) * (den / rat_den(x[0])), rat_num(x[1]) * (den / rat_den(x[1])),
             rat_num(x[2]) * (den / rat_den(x[2]))};
    return lat_contains(L, num, den);
}

// A lattice is a ring iff it contains 1 and is closed under products of
// basis vectors.
inline bool is_ring(const FieldCtx& F, const Lat& L) {
    if (!lat_contains(L, {1, 0, 0}, 1)) return false;
    auto b = lattice_basis_elems(L);
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j)
            if (!elem_in_lattice(L, F.mul(b[i], b[j]))) return false;
    return true;
}

inline Order order_from_poly(const UnitPoly& p) {
    require_admissible(p, "order_from_poly");
    return Order{p, lat_identity()};
}

// disc(O) = covol(O)^2 * disc(f); exact and integral for orders.
inline Int order_disc(const FieldCtx& F, const Lat& L) {
    Rat d = lat_covol(L) * lat_covol(L) * Rat(disc_cubic(F.p));
    if (rat_den(d) != 1) throw DomainError("order_disc: non-integral discriminant");
    return rat_num(d);
}

// (N : M) = {x in F : x*M <= N} as a lattice.
inline Lat colon_lattice(const FieldCtx& F, const Lat& N, const Lat& M) {
    Lat acc;
    bool first = true;
    auto basis = lattice_basis_elems(M);
    for (int i = 0; i < 3; ++i) {
        auto rows = F.mul_rows(basis[i]);  // row j = power coords of b_i * th^j
        Int d = 1;
        for (auto& row : rows)
            for (auto& q : row) d = lcm(d, rat_den(q));
        Mat3 num;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) num[3 * r + c] = rat_num(rows[r][c]) * (d / rat_den(rows[r][c]));
        Int det = det3(num);
        if (det == 0) throw DomainError("colon_lattice: degenerate basis element");
        // {x : x*b_i in N} has basis rows H_N * B_i^{-1} = H_N*adj(num)*d / det.
        Mat3 prod = mul33(N.h, adj3(num));
        std::vector<Vec3> lrows(3);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) lrows[r][c] = prod[3 * r + c] * d;
        Lat Li = lat_canon(lrows, N.den * det);
        acc = first ? Li : lat_intersect(acc, Li);
        first = false;
    }
    return acc;
}

inline Lat multiplier_ring(const FieldCtx& F, const Lat& M) { return colon_lattice(F, M, M); }

// Multiplication action of the order basis on an O-stable lattice L, as exact
// integer matrices in L-coordinates.
inline std::array<Mat3, 3> action_matrices(const FieldCtx& F, const Lat& order, const Lat& L) {
    std::array<Mat3, 3> A;
    auto b = lattice_basis_elems(order);
    for (int i = 0; i < 3; ++i) {
        Int den;
        if (!mul_matrix_on_lattice(F, b[i], L, A[i], den))
            throw DomainError("action_matrices: lattice is not stable under the order");
    }
    return A;
}

// --- Dedekind maximality test for Z[th] at p --------------------------------

// Returns true when Z[th] is provably p-maximal: factor f mod p as
// prod g_i^{e_i}; with g = prod g_i and h = f/g lifted monic, Z[th] is
// p-maximal iff gcd((gh-f)/p, g, h) = 1 in F_p[X].
inline bool dedekind_p_maximal(const UnitPoly& p, std::int64_t prime) {
    using namespace modp;
    Poly f = {norm(-1, prime), norm(p.s, prime), norm(-p.t, prime), 1};
    auto factors = factor_low_degree(f, prime);
    Poly g{1}, h{1};
    for (auto& [fac, e] : factors) {
        g = mul(g, fac, prime);
        Poly acc{1};
        for (int i = 1; i < e; ++i) acc = mul(acc, fac, prime);
        h = mul(h, acc, prime);
    }
    // Lift g, h to integer polynomials with coefficients in [0, p) and form
    // T = (g*h - f)/p over the integers, then reduce mod p.
    std::vector<Int> gi(g.begin(), g.end()), hi(h.begin(), h.end());
    std::vector<Int> gh(gi.size() + hi.size() - 1, 0);
    for (std::size_t i = 0; i < gi.size(); ++i)
        for (std::size_t j = 0; j < hi.size(); ++j) gh[i + j] += gi[i] * hi[j];
    std::vector<Int> fi = {-1, Int(p.s), -Int(p.t), 1};
    fi.resize(std::max(fi.size(), gh.size()), 0);
    gh.resize(fi.size(), 0);
    Poly T(gh.size());
    for (std::size_t i = 0; i < gh.size(); ++i) {
        Int diff = gh[i] - fi[i];
        if (diff % prime != 0) throw DomainError("dedekind: lift mismatch");
        T[i] = norm((diff / prime).convert_to<std::int64_t>() % prime, prime);
    }
    trim(T);
    Poly u = gcd(gcd(T, g, prime), h, prime);
    return u.size() <= 1;
}

// --- p-radical enlargement (round 2) ----------------------------------------

// Sublattice of `order` representing p*O + rad(O/pO): the radical is the
// kernel of the F_p-linear map x -> x^(p^e), p^e >= 3.
inline Lat radical_sublattice(const FieldCtx& F, const Lat& order, std::int64_t p) {
    auto A = action_matrices(F, order, order);  // structure constants
    std::array<modp::Mat, 3> Am;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 9; ++k) Am[i][k] = modp::norm((A[i][k] % p).convert_to<std::int64_t>(), p);
    auto mul_alg = [&](const modp::Vec& u, const modp::Vec& v) {
        modp::Vec out{};
        for (int i = 0; i < 3; ++i) {
            if (u[i] == 0) continue;
            // u_i * (v * A_i): row j of A_i is b_i*b_j in basis coords.
            for (int j = 0; j < 3; ++j) {
                if (v[j] == 0) continue;
                for (int k = 0; k < 3; ++k)
                    out[k] = modp::norm(out[k] + u[i] * v[j] % p * Am[i][3 * j + k], p);
            }
        }
        return out;
    };
    std::int64_t e = (p == 2) ? 2 : 1;  // p^e >= dim = 3
    modp::Mat P{};
    for (int i = 0; i < 3; ++i) {
        modp::Vec x{};
        x[i] = 1;
        // x^(p^e) by square-and-multiply on the exponent p^e.
        std::int64_t exp = 1;
        for (int j = 0; j < e; ++j) exp *= p;
        modp::Vec result{};
        bool started = false;
        modp::Vec base = x;
        std::int64_t n = exp;
        while (n > 0) {
            if (n & 1) {
                result = started ? mul_alg(result, base) : base;
                started = true;
            }
            base = mul_alg(base, base);
            n >>= 1;
        }
        for (int k = 0; k < 3; ++k) P[3 * i + k] = result[k];
    }
    auto ker = modp::kernel(P, p);
    std::vector<Vec3> rows;
    for (int i = 0; i < 3; ++i)
        rows.push_back({p * order.h[3 * i], p * order.h[3 * i + 1], p * order.h[3 * i + 2]});
    for (auto& v : ker) {
        Vec3 lift{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) lift[j] += v[i] * order.h[3 * i + j];
        rows.push_back(lift);
    }
    return lat_canon(rows, order.den);
}

// The unique maximal order containing Z[th].
inline Order maximal_order(const FieldCtx& F) {
    Lat O = lat_identity();
    auto factors = factor_integer(disc_cubic(F.p));
    for (auto& [prime, e] : factors) {
        if (prime < 2 || e < 2) continue;
        std::int64_t p = checked_i64(prime, "maximal_order prime");
        if (dedekind_p_maximal(F.p, p)) continue;
        for (;;) {
            Lat rad = radical_sublattice(F, O, p);
            Lat bigger = multiplier_ring(F, rad);
            if (bigger == O) break;
            if (lat_covol(bigger) >= lat_covol(O))
                throw DomainError("maximal_order: enlargement failed to grow");
            O = bigger;
        }
    }
    return Order{F.p, O};
}

// --- stable superlattice enumeration ----------------------------------------

namespace detail {

// All simple O-submodules of L/pL, as lists of F_p row vectors (L-coords).
// Returns the subspace bases; each yields the superlattice L + (1/p)*lift.
inline std::vector<std::vector<modp::Vec>> simple_submodules(const std::array<Mat3, 3>& A,
                                                             std::int64_t p) {
    using namespace modp;
    std::array<Mat, 3> Am;
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 9; ++k) Am[i][k] = norm((A[i][k] % p).convert_to<std::int64_t>(), p);

    std::vector<std::vector<Vec>> out;
    bool any_proper = false;

    // Common eigenlines: recursively intersect eigenspaces (operators commute,
    // so eigenspaces of one are invariant under the rest).
    std::vector<Vec> lines;
    // Work with subspaces given by an explicit basis (rows, rref).
    struct Frame {
        std::vector<Vec> basis;  // rows spanning the subspace, rref
        int next_op;
    };
    std::vector<Frame> stack;
    {
        std::vector<Vec> full = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        stack.push_back({full, 0});
    }
    while (!stack.empty()) {
        Frame fr = std::move(stack.back());
        stack.pop_back();
        if (fr.next_op == 3) {
            // Every line of this subspace is a common eigenline.
            int d = static_cast<int>(fr.basis.size());
            if (d == 1) {
                lines.push_back(fr.basis[0]);
            } else if (d == 2) {
                for (i64 c = 0; c < p; ++c) {
                    Vec v;
                    for (int j = 0; j < 3; ++j) v[j] = norm(fr.basis[0][j] + c * fr.basis[1][j], p);
                    lines.push_back(v);
                }
                lines.push_back(fr.basis[1]);
            } else {
                for (i64 c1 = 0; c1 < p; ++c1)
                    for (i64 c2 = 0; c2 < p; ++c2) {
                        Vec v;
                        for (int j = 0; j < 3; ++j)
                            v[j] = norm(fr.basis[0][j] + c1 * fr.basis[1][j] + c2 * fr.basis[2][j], p);
                        lines.push_back(v);
                    }
                for (i64 c = 0; c < p; ++c) {
                    Vec v;
                    for (int j = 0; j < 3; ++j) v[j] = norm(fr.basis[1][j] + c * fr.basis[2][j], p);
                    lines.push_back(v);
                }
                lines.push_back(fr.basis[2]);
            }
            continue;
        }
        const Mat& M = Am[fr.next_op];
        int d = static_cast<int>(fr.basis.size());
        // Restrict M to the subspace: rows of basis*M in basis coordinates.
        // Solve via augmented elimination; the subspace is M-invariant.
        std::vector<Vec> img(d);
        for (int i = 0; i < d; ++i) img[i] = mul_vec(fr.basis[i], M, p);
        // Express img rows in basis coords (basis is rref, so pivots are known).
        std::array<int, 3> pivot_col{-1, -1, -1};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < 3; ++j)
                if (fr.basis[i][j] != 0) { pivot_col[i] = j; break; }
        auto in_coords = [&](Vec w) {
            Vec c{};
            for (int i = 0; i < d; ++i) {
                c[i] = w[pivot_col[i]];
                for (int j = 0; j < 3; ++j) w[j] = norm(w[j] - c[i] * fr.basis[i][j], p);
            }
            return c;  // leftover w must be zero by invariance
        };
        // Small matrix of the restricted operator (d x d inside 3x3).
        Mat R{};
        for (int i = 0; i < d; ++i) {
            Vec c = in_coords(img[i]);
            for (int j = 0; j < d; ++j) R[3 * i + j] = c[j];
        }
        // Eigenvalues by scanning the characteristic polynomial of R (deg d).
        for (i64 lam = 0; lam < p; ++lam) {
            // Compute det(R - lam I) restricted to d x d.
            i64 det;
            if (d == 1) det = norm(R[0] - lam, p);
            else if (d == 2)
                det = norm(norm(R[0] - lam, p) * norm(R[4] - lam, p) - R[1] * R[3] % p, p);
            else {
                Mat S = R;
                S[0] = norm(S[0] - lam, p);
                S[4] = norm(S[4] - lam, p);
                S[8] = norm(S[8] - lam, p);
                det = norm(S[0] * norm(S[4] * S[8] - S[5] * S[7], p) -
                               S[1] * norm(S[3] * S[8] - S[5] * S[6], p) +
                               S[2] * norm(S[3] * S[7] - S[4] * S[6], p),
                           p);
            }
            if (det != 0) continue;
            // Kernel of (R - lam I) in d coords, mapped back to 3-space.
            std::vector<Vec> ker_rows;
            {
                Mat S{};
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < d; ++j) S[3 * i + j] = R[3 * i + j];
                for (int i = 0; i < d; ++i) S[3 * i + i] = norm(S[3 * i + i] - lam, p);
                for (int i = d; i < 3; ++i) S[3 * i + i] = 1;  // pad to full rank outside
                ker_rows = kernel(S, p);
            }
            std::vector<Vec> sub;
            for (auto& kr : ker_rows) {
                // kr has support in the first d coords.
                Vec v{};
                for (int i = 0; i < d; ++i)
                    for (int j = 0; j < 3; ++j) v[j] = norm(v[j] + kr[i] * fr.basis[i][j], p);
                sub.push_back(v);
            }
            rref(sub, p);
            if (!sub.empty()) stack.push_back({sub, fr.next_op + 1});
        }
    }
    {
        // Deduplicate lines (normalize leading coefficient to 1).
        std::vector<Vec> uniq;
        for (auto v : lines) {
            int lead = -1;
            for (int j = 0; j < 3; ++j)
                if (v[j] != 0) { lead = j; break; }
            if (lead < 0) continue;
            i64 inv = modp::inv_mod(v[lead], p);
            for (auto& x : v) x = norm(x * inv, p);
            if (std::find(uniq.begin(), uniq.end(), v) == uniq.end()) uniq.push_back(v);
        }
        for (auto& v : uniq) out.push_back({v});
        if (!uniq.empty()) any_proper = true;
    }

    // Simple 2-dimensional submodules: kernels of irreducible quadratic
    // factors of the characteristic polynomial of a generator, provided the
    // kernel is stable under the other generators and contains no eigenline.
    std::vector<std::vector<Vec>> planes;
    for (int i = 0; i < 3; ++i) {
        auto cp = charpoly(Am[i], p);
        modp::Poly f = {cp[0], cp[1], cp[2], 1};
        auto factors = modp::factor_low_degree(f, p);
        for (auto& [fac, e] : factors) {
            if (fac.size() != 3) continue;  // want an irreducible quadratic
            // g(A_i) = A^2 + fac[1] A + fac[0] I.
            Mat A2 = mul_mat(Am[i], Am[i], p);
            Mat G{};
            for (int k = 0; k < 9; ++k) G[k] = norm(A2[k] + fac[1] * Am[i][k], p);
            G[0] = norm(G[0] + fac[0], p);
            G[4] = norm(G[4] + fac[0], p);
            G[8] = norm(G[8] + fac[0], p);
            auto ker = kernel(G, p);
            if (ker.size() != 2) continue;
            bool stable = true;
            for (int j = 0; j < 3 && stable; ++j) {
                for (auto& v : ker) {
                    Vec w = mul_vec(v, Am[j], p);
                    // w must lie in span(ker): eliminate against rref basis.
                    std::vector<Vec> test = ker;
                    test.push_back(w);
                    if (rref(test, p) != 2) { stable = false; break; }
                }
            }
            if (!stable) continue;
            std::vector<Vec> basis = ker;
            rref(basis, p);
            if (std::find(planes.begin(), planes.end(), basis) == planes.end())
                planes.push_back(basis);
        }
    }
    for (auto& pl : planes) {
        // Exclude planes containing an eigenline: those are not simple and
        // are reachable through two line steps.
        bool contains_line = false;
        for (auto& entry : out) {
            if (entry.size() != 1) continue;
            std::vector<Vec> test = pl;
            test.push_back(entry[0]);
            if (rref(test, p) == 2) { contains_line = true; break; }
        }
        if (!contains_line) out.push_back(pl);
        any_proper = true;
    }

    if (!any_proper) {
        // The whole module is simple: the only step is (1/p) L.
        out.push_back({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    }
    return out;
}

}  // namespace detail

// Breadth-first enumeration of O-stable superlattices M >= base with
// [M : base] <= bound and (optionally) M <= inside.  Keys are canonical
// serializations; values carry the lattice and its index over `base`.
// When `inside` is given, `bound` must equal [inside : base] exactly so
// that prime steps can be restricted to divisors of the available index.
struct SuperLat {
    Lat L;
    Int index;
};

inline std::vector<SuperLat> stable_superlattices(const FieldCtx& F, const Lat& order,
                                                  const Lat& base, const Int& bound,
                                                  const Lat* inside = nullptr) {
    std::vector<std::int64_t> primes;
    if (inside) {
        // Children must stay inside the fixed overlattice, so only primes
        // dividing the total available index can occur.
        for (auto& [prime, e] : factor_integer(bound)) {
            if (prime < 2) continue;
            primes.push_back(checked_i64(prime, "superlattice prime"));
        }
    } else {
        for (std::int64_t p = 2; Int(p) <= bound; ++p) {
            bool prime = p >= 2;
            for (std::int64_t d = 2; d * d <= p; ++d)
                if (p % d == 0) { prime = false; break; }
            if (prime) primes.push_back(p);
        }
    }
    std::map<std::string, SuperLat> seen;
    std::vector<Lat> queue{base};
    seen.emplace(lat_serialize(base), SuperLat{base, 1});
    while (!queue.empty()) {
        Lat L = queue.back();
        queue.pop_back();
        Int index = seen.at(lat_serialize(L)).index;
        std::array<Mat3, 3> A = action_matrices(F, order, L);
        for (std::int64_t p : primes) {
            if (index * p > bound) continue;
            auto subs = detail::simple_submodules(A, p);
            for (auto& sub : subs) {
                Int step = 1;
                for (std::size_t d = 0; d < sub.size(); ++d) step *= p;
                if (index * step > bound) continue;
                std::vector<Vec3> rows;
                for (int i = 0; i < 3; ++i)
                    rows.push_back({p * L.h[3 * i], p * L.h[3 * i + 1], p * L.h[3 * i + 2]});
                for (auto& v : sub) {
                    Vec3 lift{};
                    for (int i = 0; i < 3; ++i)
                        for (int j = 0; j < 3; ++j) lift[j] += v[i] * L.h[3 * i + j];
                    rows.push_back(lift);
                }
                Lat child = lat_canon(rows, Int(p) * L.den);
                if (inside && !lat_subset(child, *inside)) continue;
                std::string key = lat_serialize(child);
                if (seen.count(key)) continue;
                seen.emplace(key, SuperLat{child, index * step});
                queue.push_back(child);
            }
        }
    }
    std::vector<SuperLat> out;
    out.reserve(seen.size());
    for (auto& [k, v] : seen) out.push_back(v);
    return out;
}

// All orders O with Z[th] <= O <= O_F, sorted by index then serialization.
inline std::vector<Order> overorders_monogenic(const FieldCtx& F) {
    Order maximal = maximal_order(F);
    Int idx = lat_index_int(lat_identity(), maximal.L);
    auto lats = stable_superlattices(F, lat_identity(), lat_identity(), idx, &maximal.L);
    std::vector<Order> out;
    for (auto& sl : lats)
        if (is_ring(F, sl.L)) out.push_back(Order{F.p, sl.L});
    std::sort(out.begin(), out.end(), [&](const Order& a, const Order& b) {
        Rat ia = lat_covol(a.L), ib = lat_covol(b.L);
        if (ia != ib) return ia > ib;  // larger covol = smaller index first
        return lat_serialize(a.L) < lat_serialize(b.L);
    });
    return out;
}

// All rings between an arbitrary order O and the maximal order.
inline std::vector<Lat> overorders_of(const FieldCtx& F, const Lat& O, const Lat& maximal) {
    Int idx = lat_index_int(O, maximal);
    auto lats = stable_superlattices(F, O, O, idx, &maximal);
    std::vector<Lat> out;
    for (auto& sl : lats)
        if (is_ring(F, sl.L)) out.push_back(sl.L);
    std::sort(out.begin(), out.end(), [](const Lat& a, const Lat& b) {
        Rat ca = lat_covol(a), cb = lat_covol(b);
        if (ca != cb) return ca > cb;
        return lat_serialize(a) < lat_serialize(b);
    });
    return out;
}

}  // namespace cubic
