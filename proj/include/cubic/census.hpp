#pragma once

// Regulator-bounded census of norm-one cubic units with class-level records.
//
// run_sweep enumerates every canonical admissible (t, s) whose real root
// satisfies log(lambda) <= r_max, identifies each unit as a power of the
// primitive (minimal-regulator) unit of its field, attaches every order of
// that field containing the unit, classifies each distinct order once, and
// expands the incidences into one record per module class whose multiplier
// ring is exactly the incident order.  All branching decisions (membership
// in the sweep, power decomposition, class counts) are made in exact
// arithmetic, so the result is a deterministic function of (r_max,
// precision) alone; shards only partition the work.
//
// Key exact decisions:
//  * "R <= r_max" is evaluated as lambda <= cut, where cut is the exact
//    rational value of the double exp(r_max).  f has a single real root
//    lambda with f < 0 to its left, and lambda is irrational, so the sign
//    of f(cut) decides membership exactly.
//  * power decomposition generates candidate roots from certified rational
//    brackets of lambda^(1/mu) and verifies each candidate with an exact
//    Newton-power identity; a certified lower bound on occurring regulators
//    caps mu, so the scan is finite and complete.
//  * per-order fundamental units are the minimal incident power; this is
//    cross-checked against the lattice-level window unit (smallest power of
//    the field generator lying in the order), which is computed
//    independently of the sweep.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "cubic/base.hpp"
#include "cubic/certified.hpp"
#include "cubic/classes.hpp"
#include "cubic/field.hpp"
#include "cubic/linalg.hpp"
#include "cubic/order.hpp"
#include "cubic/unit_poly.hpp"

namespace cubic {

// Symmetric coefficient box guaranteed to contain every canonical admissible
// (t, s) with regulator <= r_max.  For the canonical root lambda <= e^r:
// |t| <= lambda + 2/sqrt(lambda) and |s| <= 2 sqrt(lambda) + 1/lambda, and
// both are dominated by e^r + 2 e^{r/2} with slack > 1/2, so rounding half
// away from zero preserves exhaustiveness.
inline std::int64_t sweep_box(double r_max) {
    if (!(r_max >= 0)) throw DomainError("sweep_box: r_max must be nonnegative");
    return std::llround(std::exp(r_max) + 2.0 * std::exp(r_max / 2.0));
}

// Exact cut value: the rational equal to the double exp(r_max).
inline Rat lambda_cut_for(double r_max) {
    if (!(r_max > 0)) throw DomainError("lambda_cut_for: r_max must be positive");
    return Rat(std::exp(r_max));
}

// lambda(p) <= cut, decided exactly.  The real root is irrational, so
// f(cut) = 0 cannot occur and the strict sign test is total.
inline bool regulator_within(const UnitPoly& p, const Rat& lambda_cut) {
    return eval_poly(p, lambda_cut) > 0;
}

// All canonical admissible polynomials with R <= r_max inside |t|,|s| <= box,
// in lexicographic (t, s) order.
inline std::vector<UnitPoly> sweep_polys(double r_max, std::int64_t box) {
    Rat cut = lambda_cut_for(r_max);
    std::vector<UnitPoly> out;
    for (std::int64_t t = -box; t <= box; ++t)
        for (std::int64_t s = -box; s <= box; ++s) {
            UnitPoly p{t, s};
            if (!is_admissible(p) || !is_canonical(p)) continue;
            if (regulator_within(p, cut)) out.push_back(p);
        }
    return out;
}

// Write p as the mu-th Newton power of a primitive canonical polynomial,
// with mu maximal.  r_min_known must be a positive lower bound for every
// regulator that can occur as a root; it caps the power scan.  Candidate
// roots are generated from certified brackets of lambda^(1/mu):
//   t' = lambda' + 2 Re(w)      with |2 Re(w)| <= 2/sqrt(lambda') <= 2,
//   s' = lambda' t' - lambda'^2 + 1/lambda',
// and each candidate is verified exactly, so no true decomposition can be
// missed.  Returns (p, 1) when p is already primitive.
inline std::pair<UnitPoly, std::int64_t> power_decompose(const UnitPoly& p, double r_min_known) {
    require_admissible(p, "power_decompose");
    if (!is_canonical(p)) throw DomainError("power_decompose: needs a canonical polynomial");
    if (!(r_min_known > 0)) throw DomainError("power_decompose: r_min_known must be positive");
    RealBound R = regulator_and_length(p).first;
    double cap = std::floor(R.hi / r_min_known + 1e-9);
    std::int64_t mu_max = cap < 1.0 ? 1 : static_cast<std::int64_t>(cap);
    if (mu_max < 2) return {p, 1};

    CertifiedRoot r = isolate_real_root(p);
    while (!(r.lo > 1)) refine_root(r, Rat(r.width() / 1024));
    Rat eps(1, Int(1) << 40);
    for (std::int64_t mu = mu_max; mu >= 2; --mu) {
        Rat a = rat_kth_root(r.lo, static_cast<unsigned>(mu), eps).first;
        Rat b = rat_kth_root(r.hi, static_cast<unsigned>(mu), eps).second;
        if (a < 1) a = 1;  // lambda' > 1; clamping keeps the hull valid
        std::int64_t t_lo = checked_i64(ceil_rat(Rat(a - 2)), "power_decompose t bound");
        std::int64_t t_hi = checked_i64(floor_rat(Rat(b + 2)), "power_decompose t bound");
        for (std::int64_t tc = t_lo; tc <= t_hi; ++tc) {
            // Outward hull of s'(lambda') over [a, b]: endpoint values plus a
            // derivative bound |s''| <= |tc| + 2b + 1 times the width.
            Rat fa = a * tc - a * a + Rat(1) / a;
            Rat fb = b * tc - b * b + Rat(1) / b;
            Rat lo = fa < fb ? fa : fb;
            Rat hi = fa < fb ? fb : fa;
            Rat slack = Rat(Rat(std::abs(tc)) + 2 * b + 1) * Rat(b - a);
            lo -= slack;
            hi += slack;
            for (Int sc = ceil_rat(lo); sc <= floor_rat(hi); ++sc) {
                UnitPoly cand{tc, checked_i64(sc, "power_decompose s bound")};
                if (!is_admissible(cand) || !is_canonical(cand)) continue;
                if (newton_power(cand, mu) == p) return {cand, mu};
            }
        }
    }
    return {p, 1};
}

// One census record: a unit, an order containing it, and one module class of
// that order whose multiplier ring is exactly the order.
struct GeodesicClass {
    UnitPoly poly;           // canonical characteristic polynomial of the unit
    std::size_t order_id = 0;  // index into Census::orders
    int class_index = 0;     // position in module_classes(order).classes
    double R = 0;            // regulator of the order's fundamental unit
    double l = 0;            // geodesic length, l = 3 R mu
    double N = 0;            // norm e^l
    bool primitive = false;  // mu == 1
    std::int64_t mu = 1;     // power of the order's fundamental unit
    UnitPoly root_poly;      // polynomial of that fundamental unit
};

struct OrderSummary {
    UnitPoly field_poly;     // minimal-regulator polynomial of the field
    Lat L;                   // order lattice over the field_poly power basis
    std::string key;         // field_poly "|" lattice serialization
    Int disc = 0;            // discriminant of the order
    Int index_in_maximal = 0;  // [O_F : O]
    UnitPoly fund_poly;      // fundamental norm-one unit of the order
    std::int64_t min_power = 1;  // fund unit = (field fundamental)^min_power
    double R = 0;            // regulator of the order
    Int h_total = 0;
    Int h_proper = 0;
};

struct Census {
    double r_max = 0;
    std::int64_t box = 0;
    std::vector<OrderSummary> orders;    // sorted by key
    std::vector<GeodesicClass> records;  // sorted by (l, poly, order, class)
};

namespace detail {

// Deterministic strided work split: every write goes to a caller-owned slot
// indexed by i, so the result is independent of scheduling.
template <typename Fn>
inline void parallel_for(std::size_t n, int shards, Fn&& fn) {
    std::size_t workers = shards < 1 ? 1 : static_cast<std::size_t>(shards);
    if (workers > n) workers = n ? n : 1;
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

inline Vec3 elem_int_vec(const Elem& e, const char* who) {
    Vec3 v{};
    for (int j = 0; j < 3; ++j) {
        if (rat_den(e[j]) != 1) throw DomainError(std::string(who) + ": expected integral element");
        v[j] = rat_num(e[j]);
    }
    return v;
}

inline Elem elem_power(const FieldCtx& F, std::int64_t k) {
    if (k < 0) throw DomainError("elem_power: negative exponent");
    Elem r = FieldCtx::one();
    Elem b = FieldCtx::theta();
    while (k > 0) {
        if (k & 1) r = F.mul(r, b);
        k >>= 1;
        if (k) b = F.mul(b, b);
    }
    return r;
}

}  // namespace detail

inline Census run_sweep(double r_max, const Rat& precision = default_precision(),
                        int shards = 1) {
    if (!(r_max > 0)) throw DomainError("run_sweep: r_max must be positive");
    if (precision <= 0) throw DomainError("run_sweep: precision must be positive");
    Census census;
    census.r_max = r_max;
    census.box = sweep_box(r_max);
    std::vector<UnitPoly> polys = sweep_polys(r_max, census.box);
    if (polys.empty()) return census;
    const std::size_t n = polys.size();

    // Certified regulator brackets (map step).
    std::vector<RealBound> regs(n);
    detail::parallel_for(n, shards, [&](std::size_t i) {
        regs[i] = regulator_and_length(polys[i], precision).first;
    });
    double r_min_lo = regs[0].lo;
    for (const RealBound& rb : regs) r_min_lo = std::min(r_min_lo, rb.lo);
    if (!(r_min_lo > 0)) throw DomainError("run_sweep: degenerate regulator bracket");

    // Field-level power decomposition (map step).
    std::vector<UnitPoly> roots(n);
    std::vector<std::int64_t> powers(n);
    detail::parallel_for(n, shards, [&](std::size_t i) {
        std::tie(roots[i], powers[i]) = power_decompose(polys[i], r_min_lo);
    });

    // Every primitive root must itself appear in the sweep (its regulator is
    // at most that of its power); a miss means the box or cut is broken.
    {
        std::set<UnitPoly> have(polys.begin(), polys.end());
        for (const UnitPoly& q : roots)
            if (!have.count(q)) throw DomainError("run_sweep: primitive root missing from sweep");
    }

    // Intern fields by primitive root.
    struct FieldData {
        UnitPoly q;
        FieldCtx F;
        Order maximal;
        double r_field = 0;
    };
    std::map<std::string, std::size_t> field_ix;
    std::vector<FieldData> fields;
    std::vector<std::size_t> poly_field(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::string k = to_string(roots[i]);
        auto it = field_ix.find(k);
        if (it == field_ix.end()) {
            it = field_ix.emplace(k, fields.size()).first;
            fields.push_back(FieldData{roots[i], FieldCtx{roots[i]}, Order{}, 0.0});
        }
        poly_field[i] = it->second;
    }
    detail::parallel_for(fields.size(), shards, [&](std::size_t i) {
        fields[i].maximal = maximal_order(fields[i].F);
        fields[i].r_field = regulator_and_length(fields[i].q, precision).first.mid();
    });

    // Orders incident to each unit: everything between Z[theta_0^m] and the
    // maximal order, expressed over the field power basis.
    std::vector<std::vector<std::pair<std::string, Lat>>> poly_orders(n);
    detail::parallel_for(n, shards, [&](std::size_t i) {
        const FieldData& fd = fields[poly_field[i]];
        Elem pw = detail::elem_power(fd.F, powers[i]);
        Elem pw2 = fd.F.mul(pw, pw);
        std::vector<Vec3> rows{{Int(1), Int(0), Int(0)},
                               detail::elem_int_vec(pw, "run_sweep base order"),
                               detail::elem_int_vec(pw2, "run_sweep base order")};
        Lat base = lat_canon(rows, Int(1));
        if (order_disc(fd.F, base) != disc_cubic(polys[i]))
            throw DomainError("run_sweep: power-basis re-expression failed");
        for (const Lat& O : overorders_of(fd.F, base, fd.maximal.L))
            poly_orders[i].emplace_back(to_string(fd.q) + "|" + lat_serialize(O), O);
    });

    // Intern orders across polynomials.
    struct OrderData {
        std::size_t field = 0;
        Lat L;
        std::string key;
        std::vector<std::size_t> incid;  // indices into polys
        std::int64_t min_power = 0;
        ModuleClasses mc;
        Int disc = 0, idxm = 0;
    };
    std::map<std::string, std::size_t> order_ix;
    std::vector<OrderData> orders;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [key, L] : poly_orders[i]) {
            auto it = order_ix.find(key);
            if (it == order_ix.end()) {
                it = order_ix.emplace(key, orders.size()).first;
                OrderData od;
                od.field = poly_field[i];
                od.L = L;
                od.key = key;
                orders.push_back(std::move(od));
            }
            orders[it->second].incid.push_back(i);
        }

    // Classify each distinct order once (the heavy step).
    detail::parallel_for(orders.size(), shards, [&](std::size_t oi) {
        OrderData& od = orders[oi];
        const FieldData& fd = fields[od.field];
        od.mc = module_classes(fd.F, od.L);
        od.disc = order_disc(fd.F, od.L);
        od.idxm = lat_index_int(od.L, fd.maximal.L);
        std::int64_t mn = 0;
        for (std::size_t pi : od.incid) mn = mn == 0 ? powers[pi] : std::min(mn, powers[pi]);
        od.min_power = mn;
        // Cross-check against the sweep-independent window unit: the smallest
        // power of the field generator lying in the order.
        WindowUnit wu = find_window_unit(fd.F, od.L);
        if (wu.k != mn) throw DomainError("run_sweep: fundamental power mismatch for " + od.key);
        for (std::size_t pi : od.incid)
            if (powers[pi] % mn != 0)
                throw DomainError("run_sweep: incidence power not a multiple of fundamental");
    });

    // Deterministic final order: sort summaries by key.
    std::vector<std::size_t> perm(orders.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return orders[a].key < orders[b].key; });
    std::vector<std::size_t> where(orders.size());
    for (std::size_t rank = 0; rank < perm.size(); ++rank) where[perm[rank]] = rank;

    census.orders.resize(orders.size());
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
        const OrderData& od = orders[oi];
        const FieldData& fd = fields[od.field];
        OrderSummary os;
        os.field_poly = fd.q;
        os.L = od.L;
        os.key = od.key;
        os.disc = od.disc;
        os.index_in_maximal = od.idxm;
        os.min_power = od.min_power;
        os.fund_poly = newton_power(fd.q, od.min_power);
        os.R = fd.r_field * static_cast<double>(od.min_power);
        os.h_total = od.mc.h_total;
        os.h_proper = od.mc.h_proper;
        census.orders[where[oi]] = std::move(os);
    }

    // Expand incidences into class-level records.
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [key, L] : poly_orders[i]) {
            std::size_t oi = order_ix.at(key);
            const OrderData& od = orders[oi];
            const OrderSummary& os = census.orders[where[oi]];
            std::int64_t mu = powers[i] / od.min_power;
            if (newton_power(os.fund_poly, mu) != polys[i])
                throw DomainError("run_sweep: record is not the asserted power of its root");
            GeodesicClass rec;
            rec.poly = polys[i];
            rec.order_id = where[oi];
            rec.R = os.R;
            rec.l = 3.0 * fields[od.field].r_field * static_cast<double>(powers[i]);
            rec.N = std::exp(rec.l);
            rec.primitive = mu == 1;
            rec.mu = mu;
            rec.root_poly = os.fund_poly;
            for (std::size_t ci = 0; ci < od.mc.classes.size(); ++ci)
                if (od.mc.classes[ci].mult == od.L) {
                    rec.class_index = static_cast<int>(ci);
                    census.records.push_back(rec);
                }
        }
    std::sort(census.records.begin(), census.records.end(),
              [](const GeodesicClass& a, const GeodesicClass& b) {
                  return std::tie(a.l, a.poly, a.order_id, a.class_index) <
                         std::tie(b.l, b.poly, b.order_id, b.class_index);
              });
    return census;
}

// One evaluation row of the census counting functions at x (a regulator
// scale; lengths are compared as l <= 3x, i.e. R <= x).
struct CountRow {
    double x = 0;
    Int count_primitive = 0;  // primitive records with l <= 3x
    Int sum_h_total = 0;      // sum of h_total over orders with R <= x
    Int sum_h_proper = 0;     // sum of h_proper over orders with R <= x
    double main_term = 0;     // e^{3x} / (3x); +inf sentinel at x = 0
};

inline std::vector<CountRow> census_counts(const Census& c, const std::vector<double>& grid) {
    std::vector<CountRow> out;
    out.reserve(grid.size());
    for (double x : grid) {
        if (!(x >= 0) || x > c.r_max)
            throw DomainError("census_counts: grid point outside [0, r_max]");
        CountRow row;
        row.x = x;
        // l <= 3x is compared at the regulator scale (l = 3 R mu exactly by
        // construction) so boundary behaviour matches the order sums.
        for (const GeodesicClass& r : c.records)
            if (r.primitive && r.R <= x) ++row.count_primitive;
        for (const OrderSummary& o : c.orders)
            if (o.R <= x) {
                row.sum_h_total += o.h_total;
                row.sum_h_proper += o.h_proper;
            }
        row.main_term = x > 0 ? std::exp(3.0 * x) / (3.0 * x)
                              : std::numeric_limits<double>::infinity();
        out.push_back(std::move(row));
    }
    return out;
}

// Which of the two class-number sums the primitive count equals, pointwise
// across all rows: "h_proper", "h_total", "both", or "neither".
struct Adjudication {
    bool matches_proper = true;
    bool matches_total = true;
    std::string verdict;
};

inline std::string row_adjudication(const CountRow& r) {
    bool p = r.count_primitive == r.sum_h_proper;
    bool t = r.count_primitive == r.sum_h_total;
    return p && t ? "both" : p ? "h_proper" : t ? "h_total" : "neither";
}

inline Adjudication adjudicate(const std::vector<CountRow>& rows) {
    Adjudication a;
    for (const CountRow& r : rows) {
        if (r.count_primitive != r.sum_h_proper) a.matches_proper = false;
        if (r.count_primitive != r.sum_h_total) a.matches_total = false;
    }
    a.verdict = a.matches_proper && a.matches_total ? "both"
                : a.matches_proper                  ? "h_proper"
                : a.matches_total                   ? "h_total"
                                                    : "neither";
    return a;
}

// Prime-geodesic-style ratio pi(x) log(x) / x over primitive records with
// norm e^l <= x.  Domain: 1 < x <= e^{3 r_max}.
inline double pgt_ratio(const Census& c, double x) {
    if (!(x > 1)) throw DomainError("pgt_ratio: needs x > 1");
    if (!(x <= std::exp(3.0 * c.r_max))) throw DomainError("pgt_ratio: x beyond e^{3 r_max}");
    std::size_t pi = 0;
    for (const GeodesicClass& r : c.records)
        if (r.primitive && r.N <= x) ++pi;
    return static_cast<double>(pi) * std::log(x) / x;
}

}  // namespace cubic
