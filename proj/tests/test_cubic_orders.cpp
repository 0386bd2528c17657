#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cubic/classes.hpp"
#include "cubic/order.hpp"

using namespace cubic;

namespace {

Lat scale_lattice(const FieldCtx& F, const Elem& x, const Lat& M) {
    auto basis = lattice_basis_elems(M);
    std::vector<std::array<Rat, 3>> rows;
    for (int i = 0; i < 3; ++i) {
        Elem r = F.mul(x, basis[i]);
        rows.push_back({r[0], r[1], r[2]});
    }
    return lat_from_rat_rows(rows);
}

Elem const_elem(const Rat& c) { return Elem{c, Rat(0), Rat(0)}; }

// Reference enumeration of all Z[th]-stable superlattices of Z^3 with index
// in {1,2,3,4}, by brute force over subgroup generators of (1/m)Z^3 / Z^3.
std::set<std::string> brute_force_stable(const FieldCtx& F, int64_t bound) {
    std::set<std::string> found;
    auto consider = [&](const std::vector<Vec3>& gens, Int m) {
        std::vector<Vec3> rows = {{m, 0, 0}, {0, m, 0}, {0, 0, m}};
        for (auto& g : gens) rows.push_back(g);
        Lat L = lat_canon(rows, m);
        Rat idx = lat_index_ratio(lat_identity(), L);
        if (rat_den(idx) != 1 || rat_num(idx) > bound) return;
        Mat3 num;
        Int den;
        if (!mul_matrix_on_lattice(F, FieldCtx::theta(), L, num, den)) return;
        found.insert(lat_serialize(L));
    };
    consider({}, 1);
    for (Int m : {Int(2), Int(3), Int(4)}) {
        int64_t mi = m.convert_to<int64_t>();
        for (int64_t a = 0; a < mi; ++a)
            for (int64_t b = 0; b < mi; ++b)
                for (int64_t c = 0; c < mi; ++c) consider({{a, b, c}}, m);
    }
    // Non-cyclic index-4 subgroups: two independent 2-torsion generators.
    for (int64_t a = 0; a < 2; ++a)
        for (int64_t b = 0; b < 2; ++b)
            for (int64_t c = 0; c < 2; ++c)
                for (int64_t d = 0; d < 2; ++d)
                    for (int64_t e = 0; e < 2; ++e)
                        for (int64_t f = 0; f < 2; ++f)
                            consider({{2 * a, 2 * b, 2 * c}, {2 * d, 2 * e, 2 * f}}, Int(4));
    return found;
}

}  // namespace

TEST_CASE("orders from polynomials", "[orders]") {
    FieldCtx F(UnitPoly{5, 2});
    Order O = order_from_poly(F.p);
    CHECK(O.L == lat_identity());
    CHECK(order_serialize(O) == "5,2|1|1,0,0;1,0;1");
    CHECK(is_ring(F, O.L));
    CHECK(order_disc(F, O.L) == disc_cubic(F.p));
    CHECK_THROWS_AS(order_from_poly(UnitPoly{5, 6}), DomainError);

    // A non-ring lattice: Z + th Z + (th^2/2) Z is not multiplicatively closed.
    Lat half = lat_canon({{2, 0, 0}, {0, 2, 0}, {0, 0, 1}}, 2);
    CHECK_FALSE(is_ring(F, half));
    // A ring that does not contain th: Z + 3th Z + 3th^2 Z inside (3,-3).
    FieldCtx G(UnitPoly{3, -3});
    Lat deep = lat_canon({{3, 0, 0}, {0, 9, 0}, {0, 0, 9}}, 3);
    CHECK(is_ring(G, deep));
    CHECK(order_disc(G, deep) == disc_cubic(G.p) * 81);
}

TEST_CASE("colon lattices and multiplier rings", "[orders]") {
    FieldCtx F(UnitPoly{5, 2});
    Lat O = lat_identity();
    CHECK(colon_lattice(F, O, O) == O);

    Lat twoO = lat_canon({{2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, 1);
    CHECK(colon_lattice(F, twoO, O) == twoO);
    Lat halfO = lat_canon({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, 2);
    CHECK(colon_lattice(F, O, twoO) == halfO);
    CHECK(multiplier_ring(F, twoO) == O);
    CHECK(multiplier_ring(F, halfO) == O);

    // Multiplier rings are invariant under scaling by any nonzero element.
    Lat M = lat_canon({{1, 0, 0}, {0, 2, 0}, {0, 1, 1}}, 1);
    Lat R = multiplier_ring(F, M);
    CHECK(is_ring(F, R));
    for (const Elem& x : {const_elem(Rat(2)), const_elem(Rat(1, 3)), FieldCtx::theta(),
                          Elem{Rat(-1), Rat(1), Rat(0)}}) {
        CHECK(multiplier_ring(F, scale_lattice(F, x, M)) == R);
    }
    // A ring is its own multiplier ring.
    CHECK(multiplier_ring(F, R) == R);
}

TEST_CASE("maximal order examples", "[orders]") {
    // Squarefree discriminants: the monogenic order is already maximal.
    for (auto p : {UnitPoly{0, -1}, UnitPoly{1, 0}, UnitPoly{-1, 2}}) {
        FieldCtx F(p);
        Order OF = maximal_order(F);
        CHECK(OF.L == lat_identity());
        CHECK(order_disc(F, OF.L) == disc_cubic(p));
    }

    // disc(5,2) = -279 = -9*31: index 3 enlargement, field discriminant -31.
    {
        FieldCtx F(UnitPoly{5, 2});
        Order OF = maximal_order(F);
        CHECK(lat_covol(OF.L) == Rat(1, 3));
        CHECK(order_disc(F, OF.L) == -31);
        CHECK(is_ring(F, OF.L));
        CHECK(lat_subset(lat_identity(), OF.L));
        CHECK(multiplier_ring(F, OF.L) == OF.L);
        CHECK(disc_cubic(F.p) == order_disc(F, OF.L) * 9);
    }

    // disc(3,-1) = -176 = -16*11: index 2 enlargement, order discriminant -44.
    {
        FieldCtx F(UnitPoly{3, -1});
        Order OF = maximal_order(F);
        CHECK(lat_covol(OF.L) == Rat(1, 2));
        CHECK(order_disc(F, OF.L) == -44);
    }

    // disc(1,-1) = -44 = -4*11, but Z[th] is still 2-maximal.
    {
        FieldCtx F(UnitPoly{1, -1});
        CHECK(disc_cubic(F.p) == -44);
        CHECK(maximal_order(F).L == lat_identity());
    }
}

TEST_CASE("maximality criterion agrees with radical enlargement", "[orders]") {
    // Two independent p-maximality decisions for Z[th]: the factorization
    // criterion versus whether the radical's multiplier ring grows.
    int checked = 0;
    for (int64_t t = -7; t <= 7; ++t) {
        for (int64_t s = -7; s <= 7; ++s) {
            UnitPoly p{t, s};
            if (!is_admissible(p)) continue;
            FieldCtx F(p);
            for (auto& [prime, e] : factor_integer(disc_cubic(p))) {
                if (prime < 2 || e < 2) continue;
                int64_t q = checked_i64(prime, "test prime");
                bool by_criterion = dedekind_p_maximal(p, q);
                Lat rad = radical_sublattice(F, lat_identity(), q);
                bool by_enlargement = multiplier_ring(F, rad) == lat_identity();
                CHECK(by_criterion == by_enlargement);
                ++checked;
            }
        }
    }
    CHECK(checked > 20);
}

TEST_CASE("stable superlattices match brute force", "[orders]") {
    for (auto p : {UnitPoly{0, -1}, UnitPoly{5, 2}, UnitPoly{3, -1}}) {
        FieldCtx F(p);
        auto nodes = stable_superlattices(F, lat_identity(), lat_identity(), 4, nullptr);
        std::set<std::string> got;
        for (auto& n : nodes) {
            CHECK(lat_subset(lat_identity(), n.L));
            CHECK(lat_index_ratio(lat_identity(), n.L) == Rat(n.index));
            got.insert(lat_serialize(n.L));
        }
        CHECK(got.size() == nodes.size());
        CHECK(got == brute_force_stable(F, 4));
    }
}

TEST_CASE("overorder enumeration", "[orders]") {
    {
        FieldCtx F(UnitPoly{0, -1});
        auto oo = overorders_monogenic(F);
        REQUIRE(oo.size() == 1);
        CHECK(oo[0].L == lat_identity());
    }
    {
        FieldCtx F(UnitPoly{5, 2});
        auto oo = overorders_monogenic(F);
        REQUIRE(oo.size() == 2);
        CHECK(oo[0].L == lat_identity());
        CHECK(oo[1].L == maximal_order(F).L);
    }
    {
        FieldCtx F(UnitPoly{3, -1});
        auto oo = overorders_monogenic(F);
        REQUIRE(oo.size() == 2);
        CHECK(lat_covol(oo[1].L) == Rat(1, 2));
    }
    // General invariants on a small family.
    for (int64_t t = -5; t <= 5; ++t) {
        for (int64_t s = -5; s <= 5; ++s) {
            UnitPoly p{t, s};
            if (!is_admissible(p)) continue;
            FieldCtx F(p);
            Order OF = maximal_order(F);
            auto oo = overorders_monogenic(F);
            REQUIRE(oo.size() >= 1);
            CHECK(oo.front().L == lat_identity());
            CHECK(oo.back().L == OF.L);
            std::set<std::string> keys;
            for (auto& o : oo) {
                CHECK(is_ring(F, o.L));
                CHECK(lat_subset(lat_identity(), o.L));
                CHECK(lat_subset(o.L, OF.L));
                keys.insert(lat_serialize(o.L));
                // disc(Z[th]) = [O : Z[th]]^2 * disc(O).
                Int idx = lat_index_int(lat_identity(), o.L);
                CHECK(disc_cubic(p) == order_disc(F, o.L) * idx * idx);
            }
            CHECK(keys.size() == oo.size());
        }
    }
}

TEST_CASE("window units", "[classes]") {
    FieldCtx F(UnitPoly{5, 2});
    WindowUnit w = find_window_unit(F, lat_identity());
    CHECK(w.k == 1);
    CHECK(w.q == F.p);

    // Z + 3th Z + 3th^2 Z contains th^3 but not th or th^2.
    FieldCtx G(UnitPoly{3, -3});
    Lat deep = lat_canon({{3, 0, 0}, {0, 9, 0}, {0, 0, 9}}, 3);
    WindowUnit wd = find_window_unit(G, deep);
    CHECK(wd.k == 3);
    CHECK(wd.q == newton_power(G.p, 3));
}

TEST_CASE("representative index bound", "[classes]") {
    CHECK(class_rep_bound(23) == 1);
    CHECK(class_rep_bound(31) == 1);
    CHECK(class_rep_bound(125) == 3);
    CHECK(class_rep_bound(279) == 4);
    for (Int D : {Int(23), Int(100), Int(1000), Int(123456), Int(999983)}) {
        Int C = class_rep_bound(D);
        CHECK(Int(7994376) * C * C <= Int(640000) * D);
        CHECK(Int(7994376) * (C + 1) * (C + 1) > Int(640000) * D);
    }
}

TEST_CASE("window enumeration finds units", "[classes]") {
    FieldCtx F(UnitPoly{0, -1});
    WindowParams wp = make_window_params(F, lat_identity());
    auto xs = enumerate_window(F, lat_identity(), Rat(1), wp);
    REQUIRE(!xs.empty());
    for (auto& x : xs) {
        Rat n = F.norm(x);
        CHECK((n == 1 || n == -1));
        for (int j = 0; j < 3; ++j) CHECK(rat_den(x[j]) == 1);
    }
}

TEST_CASE("single-class orders", "[classes]") {
    for (auto p : {UnitPoly{0, -1}, UnitPoly{1, 0}}) {
        FieldCtx F(p);
        auto mc = module_classes(F, lat_identity());
        CHECK(mc.bound == 1);
        CHECK(mc.h_total == 1);
        CHECK(mc.h_proper == 1);
        REQUIRE(mc.classes.size() == 1);
        CHECK(mc.classes[0].rep == lat_identity());
        CHECK(mc.classes[0].mult == lat_identity());
    }
}

TEST_CASE("class machinery rejects bad inputs", "[classes]") {
    FieldCtx F(UnitPoly{5, 2});
    Lat half = lat_canon({{2, 0, 0}, {0, 2, 0}, {0, 0, 1}}, 2);
    CHECK_THROWS_AS(module_classes(F, half), DomainError);
    FieldCtx G(UnitPoly{-1, 2});  // admissible but dominant root < 1
    CHECK_THROWS_AS(module_classes(G, lat_identity()), DomainError);
}

TEST_CASE("canonical forms are class invariants", "[classes]") {
    FieldCtx F(UnitPoly{5, 2});
    Lat O = lat_identity();
    auto mc = module_classes(F, O);
    REQUIRE(mc.h_total >= 1);
    WindowParams wp = make_window_params(F, O);
    for (auto& ci : mc.classes) {
        CHECK(canonical_class_form(F, O, ci.rep, mc.bound, wp).key == lat_serialize(ci.rep));
        for (const Elem& x :
             {FieldCtx::theta(), const_elem(Rat(2)), const_elem(Rat(1, 2)),
              Elem{Rat(1), Rat(1), Rat(0)}, F.mul(FieldCtx::theta(), FieldCtx::theta())}) {
            Lat scaled = scale_lattice(F, x, ci.rep);
            CHECK(canonical_class_form(F, O, scaled, mc.bound, wp).key == lat_serialize(ci.rep));
        }
    }
}

TEST_CASE("isomorphism testing", "[classes]") {
    FieldCtx F(UnitPoly{5, 2});
    Lat O = lat_identity();
    Lat OF = maximal_order(F).L;
    CHECK(is_isomorphic(F, O, O));
    CHECK(is_isomorphic(F, O, scale_lattice(F, const_elem(Rat(5)), O)));
    CHECK(is_isomorphic(F, O, scale_lattice(F, FieldCtx::theta(), O)));
    CHECK_FALSE(is_isomorphic(F, O, OF));  // different multiplier rings

    auto mc = module_classes(F, O);
    for (std::size_t i = 0; i < mc.classes.size(); ++i)
        for (std::size_t j = 0; j < mc.classes.size(); ++j)
            CHECK(is_isomorphic(F, mc.classes[i].rep, mc.classes[j].rep) == (i == j));
}

TEST_CASE("class counts decompose over overorders", "[classes]") {
    // h_total(O) counts classes of O-stable lattices; grouping classes by
    // their multiplier ring O' >= O gives h_total(O) = sum over rings
    // O <= O' <= O_F of h_proper(O').
    for (auto p : {UnitPoly{5, 2}, UnitPoly{3, -1}, UnitPoly{3, -3}}) {
        FieldCtx F(p);
        auto mc = module_classes(F, lat_identity());
        Order OF = maximal_order(F);
        auto rings = overorders_of(F, lat_identity(), OF.L);
        Int sum = 0;
        for (auto& ring : rings) {
            auto sub = module_classes(F, ring);
            sum += sub.h_proper;
        }
        CHECK(mc.h_total == sum);
        // Every class's multiplier ring must be one of the enumerated rings.
        std::set<std::string> ring_keys;
        for (auto& r : rings) ring_keys.insert(lat_serialize(r));
        for (auto& ci : mc.classes) CHECK(ring_keys.count(lat_serialize(ci.mult)) == 1);
    }
}

TEST_CASE("class counts over a small family", "[classes]") {
    int orders_checked = 0;
    for (int64_t t = -5; t <= 5; ++t) {
        for (int64_t s = -5; s <= 5; ++s) {
            UnitPoly p{t, s};
            if (!is_admissible(p) || !is_canonical(p)) continue;
            FieldCtx F(p);
            Order OF = maximal_order(F);
            auto rings = overorders_of(F, lat_identity(), OF.L);
            std::map<std::string, std::pair<Int, Int>> h;  // ring -> (total, proper)
            for (auto& ring : rings) {
                auto mc = module_classes(F, ring);
                CHECK(mc.h_total >= 1);
                CHECK(mc.h_proper >= 1);
                CHECK(mc.h_total >= mc.h_proper);
                h[lat_serialize(ring)] = {mc.h_total, mc.h_proper};
                ++orders_checked;
            }
            // Decomposition for every ring in the tower, not just the base.
            for (auto& ring : rings) {
                auto over = overorders_of(F, ring, OF.L);
                Int sum = 0;
                for (auto& r : over) sum += h.at(lat_serialize(r)).second;
                CHECK(h.at(lat_serialize(ring)).first == sum);
            }
        }
    }
    CHECK(orders_checked >= 30);
}
