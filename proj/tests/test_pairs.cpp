#include "doctest.h"
#include "homolog/nsb.hpp"
#include "homolog/pairs.hpp"

using namespace homolog;

namespace {

GroupPair gp(const FinGroup& g, std::vector<int> base = {0}) { return group_pair(share(g), Subgroup{std::move(base)}); }

template <class C>
std::vector<typename C::Mor> all_maps(const C& c, const std::vector<typename C::Obj>& objs) {
    std::vector<typename C::Mor> out;
    for (const auto& a : objs)
        for (const auto& b : objs)
            for (auto& f : c.homs(a, b)) out.push_back(std::move(f));
    return out;
}

}  // namespace

TEST_CASE("Set2 factorisation of an identity and of a null map") {
    Set2Cat c;
    SetPair x{3, 0b001};
    auto fi = normal_factorise(c, c.identity(x));
    CHECK(c.dom(fi.ker) == SetPair{1, 0b1});
    CHECK(c.cod(fi.cok) == SetPair{3, 0b111});
    SetPair y{2, 0b01};
    SetPairMap zero{y, y, {0, 0}};
    CHECK(c.is_null(zero));
    CHECK(c.kernel_sub(zero) == y.full());
    auto fz = normal_factorise(c, zero);
    CHECK(c.dom(fz.nim) == SetPair{1, 0b1});
    CHECK_FALSE(is_exact_morphism(c, zero));
}

TEST_CASE("Set2 exactness means injective and covering the base") {
    Set2Cat c;
    for (const auto& a : c.objects())
        for (const auto& b : c.objects())
            for (const auto& f : c.homs(a, b)) {
                bool inj = true;
                for (int i = 0; i < a.n; ++i)
                    for (int j = 0; j < i; ++j) inj = inj && f.map[i] != f.map[j];
                const bool covers = (b.base & ~image_mask(f.map, a.full())) == 0;
                CHECK(is_exact_morphism(c, f) == (inj && covers));
            }
}

TEST_CASE("Set2 and Set* pass the axiom audits") {
    Bounds b;
    b.max_set = 3;
    Set2Cat s2(b);
    for (const auto& r : check_axioms(s2, b)) CHECK_MESSAGE(r.pass, r.to_json().dump());
    PointedCat pt(b);
    for (const auto& r : check_axioms(pt, b)) CHECK_MESSAGE(r.pass, r.to_json().dump());
}

TEST_CASE("tensor, hom and classifier") {
    Set2Cat c;
    SetPair p{2, 0b01};
    auto t = set2_tensor(p, set2_unit());
    CHECK(t == p);
    CHECK(set2_tensor(p, SetPair{2, 0b11}).base == set2_tensor(p, SetPair{2, 0b11}).full());
    auto h = set2_hom(SetPair{2, 0b01}, SetPair{2, 0b01});
    CHECK(h.pair.n == 2);
    for (const auto& x : c.objects())
        if (x.n <= 2)
            for (const auto& z : c.objects())
                if (z.n <= 2) CHECK(set2_adjunction_bijective(x, z, SetPair{2, 0b01}));
    SetPairMap zero{p, p, {0, 0}};
    auto fg = set2_tensor_map(zero, c.identity(p));
    CHECK(c.is_null(fg));
    for (const auto& x : c.objects())
        for (auto a : c.subobjects(x)) CHECK(classifier_pullback_holds(c, x, a));
}

TEST_CASE("Set* kernels and cokernels") {
    PointedCat c;
    Pointed x{3};
    auto id = c.identity(x);
    CHECK(c.dom(c.kernel(id)) == Pointed{1});
    CHECK(c.cod(c.cokernel(id)) == Pointed{1});
    PointedMap zero{x, x, {0, 0, 0}};
    CHECK(c.dom(c.kernel(zero)) == x);
    CHECK(c.cod(c.cokernel(zero)) == x);
    PointedMap f{Pointed{3}, Pointed{4}, {0, 2, 0}};
    CHECK(c.cod(c.cokernel(f)) == Pointed{3});
    CHECK(c.kernel_sub(f) == 0b101u);
}

TEST_CASE("functors I and K") {
    auto s3 = symmetric3();
    GroupObj z4{share(cyclic(4))};
    CHECK(functor_K(functor_I(z4)) == z4);
    Subgroup transposition;
    for (const auto& h : all_subgroups(s3))
        if (h.order() == 2) {
            transposition = h;
            break;
        }
    CHECK(functor_K(GroupPair{share(s3), transposition}).group->size == 1);
    CHECK(functor_K(gp(cyclic(4), {0, 2})).group->size == 2);
    for (const auto& g : small_groups(4))
        for (const auto& h : all_subgroups(*g.group))
            CHECK(k_adjunction_holds({g.group, h}, GroupObj{share(cyclic(2))}));
}

TEST_CASE("quasi-homomorphisms") {
    auto p = gp(cyclic(4), {0, 2});
    CHECK(is_quasi_hom({0, 1, 2, 3}, p, p));
    CHECK(is_quasi_hom({2, 3, 0, 1}, p, p));
    CHECK_FALSE(is_quasi_hom({1, 2, 3, 0}, p, p));
    PairCat q(PairMode::Q);
    PairMap shift{p, p, {2, 3, 0, 1}};
    CHECK(q.kernel_sub(shift) == Subgroup{{0, 2}});
    CHECK(is_null_object(q, q.dom(q.kernel(shift))));
    PairMap null_map{p, p, {0, 2, 2, 0}};
    CHECK(q.valid(null_map));
    CHECK(q.is_null(null_map));
    CHECK(q.kernel_sub(null_map) == whole(cyclic(4)));
}

TEST_CASE("R-equivalence") {
    auto p = gp(cyclic(4), {0, 2});
    PairMap id{p, p, {0, 1, 2, 3}}, shift{p, p, {2, 3, 0, 1}};
    CHECK(r_equivalent(id, id));
    CHECK(r_equivalent(id, shift));
    auto z = gp(cyclic(4));
    CHECK_FALSE(r_equivalent(PairMap{z, z, {0, 1, 2, 3}}, PairMap{z, z, {0, 3, 2, 1}}));
}

TEST_CASE("sigma inversion") {
    PairCat ngp(PairMode::Ngp);
    PairMap p{gp(cyclic(4), {0, 2}), gp(cyclic(2)), {0, 1, 0, 1}};
    CHECK(is_sigma(p));
    auto j = sigma_invert(p);
    CHECK(j.map == std::vector<int>{0, 1});
    CHECK(ngp.equal(ngp.compose(j, p), ngp.identity(p.dom)));
    CHECK(ngp.equal(ngp.compose(p, j), ngp.identity(p.cod)));
    auto a = gp(cyclic(4), {0, 2});
    CHECK(sigma_invert(ngp.identity(a)).map == ngp.identity(a).map);
    PairMap not_sigma{gp(cyclic(4)), gp(cyclic(2)), {0, 1, 0, 1}};
    CHECK_THROWS_AS(sigma_invert(not_sigma), std::invalid_argument);
    CHECK(ngp.is_iso(p));
    PairCat gp2(PairMode::Gp2);
    CHECK_FALSE(gp2.is_iso(p));
}

TEST_CASE("J sends homomorphisms to exact maps of Ngp") {
    PairCat ngp(PairMode::Ngp), gp2(PairMode::Gp2);
    GroupObj z4{share(cyclic(4))}, z2{share(cyclic(2))};
    GroupHom mono{z2, z4, {0, 2}};
    CHECK(is_normal_mono(ngp, functor_J(mono)));
    GroupHom epi{z4, z2, {0, 1, 0, 1}};
    CHECK(is_exact_morphism(ngp, functor_J(epi)));
    CHECK_FALSE(is_exact_morphism(gp2, functor_I(epi)));
    GroupHom zero{z4, z2, {0, 0, 0, 0}};
    CHECK(ngp.is_null(functor_J(zero)));
    GpCat gpc;
    for (const auto& f : gpc.homs(z4, z4))
        for (const auto& g : gpc.homs(z4, z4))
            CHECK(ngp.equal(functor_J(f), functor_J(g)) == (f.map == g.map));
}

TEST_CASE("Ngp is pointed") {
    PairCat ngp(PairMode::Ngp);
    auto s = gp(cyclic(4), {0, 1, 2, 3});
    PairMap zero{s, s, {0, 0, 0, 0}};
    CHECK(ngp.equal(zero, ngp.identity(s)));
}

TEST_CASE("pair categories pass the axiom audits on small groups") {
    Bounds b;
    b.max_group = 4;
    b.mor_cap = 8;
    for (auto mode : {PairMode::Gp2, PairMode::Q, PairMode::Ngp}) {
        PairCat c(mode, b);
        for (const auto& r : check_axioms(c, b)) CHECK_MESSAGE(r.pass, r.to_json().dump());
    }
}

TEST_CASE("Gp is not homological") {
    GpCat c;
    auto r = check_ex2(c, c.objects());
    CHECK_FALSE(r.pass);
}

TEST_CASE("kernels in Ngp do not depend on the representative") {
    Bounds b;
    b.max_group = 4;
    PairCat ngp(PairMode::Ngp, b), q(PairMode::Q, b);
    auto objs = ngp.objects();
    for (const auto& a : objs)
        for (const auto& c : objs)
            for (const auto& f : q.homs(a, c))
                for (const auto& g : q.homs(a, c))
                    if (r_equivalent(f, g)) {
                        CHECK(q.kernel_sub(f) == q.kernel_sub(g));
                        CHECK(q.image_sub(f) == q.image_sub(g));
                    }
}

TEST_CASE("P from Gp2 to Ngp is exact, nsb-faithful and nsb-full") {
    Bounds b;
    b.max_group = 4;
    PairCat gp2(PairMode::Gp2, b), ngp(PairMode::Ngp, b);
    auto objs = gp2.objects();
    auto ms = all_maps(gp2, objs);
    auto P = make_P(gp2, ngp);
    CHECK(is_nsb_faithful(P, objs, ms));
    CHECK(is_nsb_full(P, objs, ms));
}

TEST_CASE("Psp Set2 and Set* through P") {
    Bounds b;
    b.max_set = 3;
    Set2Cat s2(b);
    PointedCat pt(b);
    PspCat<Set2Cat> psp(s2);
    std::vector<SetPair> objs;
    for (const auto& x : s2.objects())
        if (x.base != 0) objs.push_back(x);
    for (const auto& x : objs)
        for (const auto& y : objs) {
            auto fs = s2.homs(x, y);
            for (const auto& f : fs)
                for (const auto& g : fs)
                    CHECK(psp.equal(f, g) == pt.equal(pointed_quotient(f), pointed_quotient(g)));
            CHECK(psp.homs(x, y).size() == pt.homs(pointed_quotient(x), pointed_quotient(y)).size());
        }
    // A map into an empty base cannot hit the base point.
    SetPair x{1, 0}, y{1, 0};
    CHECK(s2.homs(x, y).size() == 1);
    CHECK(pt.homs(pointed_quotient(x), pointed_quotient(y)).size() == 2);
}

TEST_CASE("json round trips") {
    auto p = gp(cyclic(4), {0, 2});
    CHECK(pair_from_json(pair_json(p)) == p);
    CHECK(group_from_json("Q8")->size == 8);
    CHECK(group_from_json("Z12")->size == 12);
    CHECK_THROWS_AS(group_from_json("nope"), std::invalid_argument);
    SetPair s{3, 0b101};
    CHECK(set_pair_from_json(set_pair_json(s)) == s);
}
