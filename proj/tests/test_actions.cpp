#include "doctest.h"
#include "homolog/actions.hpp"
#include "homolog/nsb.hpp"
#include "homolog/subquotient.hpp"

using namespace homolog;

namespace {

const GroupRef z2 = share(cyclic(2));
const GroupRef z4 = share(cyclic(4));

// ({0, a, b}, Z/2) with the generator swapping a and b.
Action swap_act() { return make_action(3, z2, {0, 0, 1, 2, 2, 1}); }

// ({0, a}, Z/4) acting through Z/2.
Action half_turn() { return make_action(2, z4, {0, 1, 0, 1, 1, 0, 1, 0}); }

Bounds small() {
    Bounds b;
    b.max_set = 3;
    b.max_group = 4;
    b.mor_cap = 6;
    b.pair_stride = 3;
    return b;
}

std::vector<ActionMap> sample(const ActionCat& c, const std::vector<Action>& objs) {
    std::vector<ActionMap> out;
    for (const auto& s : sample_morphisms(c, objs, small())) out.push_back(s.f);
    return out;
}

unsigned points_of(std::initializer_list<int> xs) {
    unsigned m = 0;
    for (int x : xs) m |= 1u << x;
    return m;
}

}  // namespace

TEST_CASE("actions are validated") {
    CHECK(is_action(3, *z2, swap_act().act));
    CHECK_FALSE(is_action(2, *z4, {0, 1, 2, 3, 1, 1, 1, 0}));
    CHECK_THROWS_AS(make_action(2, z2, {0, 0}), std::invalid_argument);
    CHECK(swap_act().base == whole(*z2));
    CHECK(half_turn().base == Subgroup{{0, 2}});
    CHECK(make_action(2, z2, {0, 1, 1, 0}).base == trivial_subgroup());
}

TEST_CASE("kernel and cokernel of simple morphisms") {
    ActionCat c(ActionMode::Act);
    const Action a = swap_act();
    const auto id = c.identity(a);
    CHECK(c.kernel_sub(id) == 1u);
    CHECK(c.dom(c.kernel(id)).group->size == 2);
    CHECK(c.cod(c.cokernel(id)).n == 1);
    const Action zero = functor_U(Pointed{1});
    ActionMap to_zero{a, zero, {0, 0, 0}, {0, 0}};
    REQUIRE(c.valid(to_zero));
    CHECK(c.kernel_sub(to_zero) == a.all_points());
    CHECK(c.is_null(to_zero));
    for (const auto& f : c.homs(a, a)) CHECK(kernel_operator_descriptions_agree(f));
}

TEST_CASE("the five descriptions of the kernel operators agree") {
    ActionCat c(ActionMode::Act, small());
    const auto objs = c.objects();
    long long n = 0;
    for (size_t i = 0; i < objs.size(); i += 2)
        for (size_t j = 0; j < objs.size(); j += 3)
            for (const auto& f : c.homs(objs[i], objs[j])) {
                CHECK(kernel_operator_descriptions_agree(f));
                ++n;
            }
    CHECK(n > 100);
}

TEST_CASE("normal subactions") {
    const Action a = swap_act();
    CHECK_FALSE(is_normal_subaction(a, points_of({0, 1})).normal);
    CHECK_FALSE(is_normal_subaction(a, points_of({0, 2})).normal);
    CHECK(is_normal_subaction(a, 1u).normal);
    CHECK(is_normal_subaction(a, a.all_points()).normal);
    ActionCat c(ActionMode::Act);
    CHECK(c.subobjects(a) == std::vector<unsigned>{1u, a.all_points()});
    const Action h = half_turn();
    CHECK(is_normal_subaction(h, orbit_mask(h, 0)).normal);
    CHECK_FALSE(is_normal_subaction(h, 2u).normal);  // not pointed
    for (const auto& x : small_actions(4, 4)) {
        for (unsigned m = 1; m <= x.all_points(); m += 2) CHECK_NOTHROW(is_normal_subaction(x, m));
        CHECK(is_normal_subaction(x, orbit_mask(x, 0)).normal);
        CHECK(nsb_operations_agree(c, x));
    }
}

TEST_CASE("generated congruence matches the closed form") {
    long long n = 0;
    for (const auto& x : small_actions(4, 6))
        for (unsigned m = 1; m <= x.all_points(); m += 2) {
            if (!is_normal_subaction(x, m).normal) continue;
            CHECK(generated_congruence(x, m) == closed_form_congruence(x, m));
            CHECK(zero_class(x, m) == m);
            ++n;
        }
    CHECK(n > 50);
}

TEST_CASE("normal factorisation: linking operators, Y1 = fX + T1 and T1 = Fix of the cokernel base point") {
    ActionCat c(ActionMode::Act, small());
    const auto objs = c.objects();
    long long n = 0;
    for (size_t i = 0; i < objs.size(); i += 2)
        for (size_t j = 1; j < objs.size(); j += 2)
            for (const auto& f : c.homs(objs[i], objs[j])) {
                ++n;
                const auto fac = normal_factorise(c, f);
                CHECK(c.equal(c.compose(fac.nim, c.compose(fac.central, fac.ncm)), f));
                const Action& y = f.cod;
                const FinGroup& t = *y.group;
                const unsigned fx = image_mask(f.points, f.dom.all_points());
                std::vector<int> linking;
                for (int e = 0; e < t.size; ++e)
                    for (int p : f.points)
                        if ((fx >> y.at(p, e)) & 1u) {
                            linking.push_back(e);
                            break;
                        }
                const Subgroup t1 = span(t, linking);
                unsigned y1 = 0;
                for (int p : f.points)
                    for (int e : t1.members) y1 |= 1u << y.at(p, e);
                CHECK(c.image_sub(f) == y1);
                CHECK(stabiliser(y, y1) == t1);
                CHECK(fixer(c.cod(fac.cok), 0) == t1);
            }
    CHECK(n > 100);
}

TEST_CASE("orbit map factorisation") {
    ActionCat c(ActionMode::Act);
    for (const auto& x : small_actions(4, 6)) {
        const auto f = orbit_map(x);
        REQUIRE(c.valid(f));
        const auto fac = normal_factorise(c, f);
        const Subgroup s0 = fixer(x, 0);
        CHECK(c.dom(fac.ker).n == s0.order());
        CHECK(c.dom(fac.ker).group->size == s0.order());
        CHECK(c.cod(fac.ncm).n * s0.order() == x.order());
        CHECK(c.dom(fac.nim).n == std::popcount(orbit_mask(x, 0)));
        CHECK(c.cod(fac.cok).n == x.n - std::popcount(orbit_mask(x, 0)) + 1);
        CHECK(is_exact_morphism(c, f));
    }
}

TEST_CASE("null morphism has the least normal image") {
    ActionCat c(ActionMode::Act);
    const Action a = swap_act();
    ActionMap z{a, a, {0, 0, 0}, {0, 1}};
    REQUIRE(c.valid(z));
    CHECK(c.image_sub(z) == 1u);
    CHECK(c.dom(normal_factorise(c, z).nim).n == 1);
}

TEST_CASE("factorisation against competing factorisations") {
    // f = m e with m a normal mono: m must contain the normal image.
    ActionCat c(ActionMode::Act);
    const Action a = half_turn();
    const Action b = swap_act();
    for (const auto& f : c.homs(a, b)) {
        const unsigned im = c.image_sub(f);
        for (unsigned x : c.subobjects(b)) {
            const bool through = c.lift(c.sub_mono(b, x), f).has_value();
            CHECK(through == c.sub_leq(b, im, x));
        }
    }
}

TEST_CASE("Act, Act' and Nac pass the axiom audits on a small fragment") {
    for (auto mode : {ActionMode::Act, ActionMode::ActPrime, ActionMode::Nac}) {
        ActionCat c(mode, small());
        for (const auto& r : check_axioms(c, small())) CHECK_MESSAGE(r.pass, r.to_json().dump());
    }
}

TEST_CASE("pointed sets: U and V") {
    ActionCat c(ActionMode::Act, small());
    PointedCat p(small());
    CHECK(functor_V(swap_act()).n == 2);
    CHECK(functor_V(half_turn()).n == 1);
    for (const auto& z : p.objects()) CHECK(functor_V(functor_U(z)) == z);
    auto U = make_U(p, c);
    std::vector<PointedMap> pm;
    for (const auto& s : sample_morphisms(p, p.objects(), small())) pm.push_back(s.f);
    CHECK(check_functor_exactness(U, ExactMode::Exact, p.objects(), pm).pass);
    auto V = make_V(c, p);
    const auto objs = c.objects();
    const auto ms = sample(c, objs);
    CHECK(check_functor_exactness(V, ExactMode::Right, objs, ms).pass);
    // V does not keep kernels: ({0, a}, 0) -> ({0, a}, Z/2 swap) has kernel {0}, while
    // V of it is the null map onto a single orbit.
    const Action flat = functor_U(Pointed{2});
    const ActionMap g{flat, make_action(2, z2, {0, 1, 1, 0}), {0, 1}, {0}};
    REQUIRE(c.valid(g));
    CHECK(functor_V(c.dom(c.kernel(g))).n == 1);
    CHECK(p.kernel_sub(functor_V(g)) == 0b11u);
    CHECK_FALSE(check_functor_exactness(V, ExactMode::Left, objs, ms).pass);
    // Set*(X/S, Z) and Act((X, S), (Z, 0)) have the same size
    for (size_t i = 0; i < objs.size(); i += 3)
        for (const auto& z : p.probes())
            CHECK(p.homs(functor_V(objs[i]), z).size() == c.homs(objs[i], functor_U(z)).size());
}

TEST_CASE("pairs of groups: F and G") {
    ActionCat c(ActionMode::Act, small());
    PairCat gp2(PairMode::Gp2, small());
    const Action f = functor_F(group_pair(z4, Subgroup{{0, 2}}));
    CHECK(f.n == 2);
    CHECK(f.at(0, 1) == 1);
    CHECK(f.at(0, 2) == 0);
    CHECK(functor_G(functor_U(Pointed{3})) == group_pair(share(FinGroup{}), trivial_subgroup()));
    for (const auto& p : gp2.objects()) {
        CHECK(functor_G(functor_F(p)) == p);
        CHECK(is_transitive(functor_F(p)));
    }
    for (const auto& x : c.objects()) {
        if (!is_transitive(x)) continue;
        const auto e = counit(x);
        CHECK(c.valid(e));
        CHECK(c.is_iso(e));
    }
    auto F = make_F(gp2, c);
    std::vector<PairMap> pm;
    for (const auto& s : sample_morphisms(gp2, gp2.objects(), small())) pm.push_back(s.f);
    CHECK(check_functor_exactness(F, ExactMode::Exact, gp2.objects(), pm).pass);
    auto G = make_G(c, gp2);
    const auto objs = c.objects();
    const auto ms = sample(c, objs);
    CHECK(check_functor_exactness(G, ExactMode::Left, objs, ms).pass);
    CHECK(check_functor_exactness(G, ExactMode::Short, objs, ms).pass);
    CHECK_FALSE(check_functor_exactness(G, ExactMode::Right, objs, ms).pass);
}

TEST_CASE("group sequences through FI are exact iff classically exact") {
    ActionCat c(ActionMode::Act);
    GpCat gp;
    for (const auto& g : small_groups(4))
        for (const auto& h : small_groups(4))
            for (const auto& k : small_groups(4)) {
                GroupObj a{g.group}, b{h.group}, d{k.group};
                for (const auto& u : gp.homs(a, b))
                    for (const auto& v : gp.homs(b, d)) {
                        const bool classical = gp.image_sub(u) == gp.kernel_sub(v);
                        CHECK(is_exact_at(c, regular_action(u), regular_action(v)) == classical);
                    }
            }
}

TEST_CASE("exactness from groups to pointed sets") {
    GpCat gp;
    PointedCat pt;
    int runs = 0;
    for (const auto& x : small_actions(4, 4)) {
        const GroupObj s{x.group};
        int k = 0;
        const auto orbit = orbits(x, &k);
        // g: X -> X/S, optionally merging the last orbit into the base point
        for (int merge = 0; merge < 2; ++merge) {
            std::vector<int> g(x.n);
            for (int p = 0; p < x.n; ++p) g[p] = (merge && orbit[p] == k - 1) ? 0 : orbit[p];
            const Pointed y{k};
            for (const auto& zo : pt.probes())
                for (const auto& h : pt.homs(y, zo))
                    for (const auto& gg : small_groups(4)) {
                        const GroupObj mid{gg.group};
                        for (const auto& v : gp.homs(mid, s))
                            for (const auto& u : gp.homs(GroupObj{share(cyclic(2))}, mid)) {
                                MixedSequence q{u, v, x, y, g, h};
                                auto r = mixed_sequence_exactness(q);
                                ++runs;
                                CHECK(r.f_exact);
                                CHECK(r.g_right_modular);
                                for (const auto& c : r.clauses) CHECK_MESSAGE(c.categorical == c.elementwise, c.clause);
                                if (r.classical_at_action) CHECK(r.clauses[2].categorical);
                            }
                    }
        }
    }
    CHECK(runs > 1000);
}

TEST_CASE("mixed sequence: classical exactness at the action is stronger") {
    // X = {0, a, b} with trivial Z/2 action, g sends everything to 0: the orbit of 0 is {0},
    // g^-1(0) is X.
    GpCat gp;
    const Action x = make_action(3, z2, {0, 0, 1, 1, 2, 2});
    GroupObj s{z2};
    MixedSequence q{gp.identity(s), gp.identity(s), x, Pointed{1}, {0, 0, 0}, PointedMap{{1}, {1}, {0}}};
    auto r = mixed_sequence_exactness(q);
    CHECK_FALSE(r.clauses[2].categorical);
    // collapsing a and b to one point: categorical exactness holds, the classical one does not
    const Action sw = swap_act();
    const Action fixed_a = make_action(3, z2, {0, 0, 1, 1, 2, 2});
    MixedSequence q2{gp.identity(s), gp.identity(s), fixed_a, Pointed{2}, {0, 1, 1}, PointedMap{{2}, {2}, {0, 1}}};
    auto r2 = mixed_sequence_exactness(q2);
    CHECK(r2.clauses[2].categorical);
    CHECK_FALSE(r2.classical_at_action);
    MixedSequence bad{gp.identity(s), gp.identity(s), sw, Pointed{3}, {0, 1, 2}, PointedMap{{3}, {3}, {0, 1, 2}}};
    CHECK_THROWS_WITH_AS(mixed_sequence_exactness(bad), "sequence shape: g is not constant on orbits", std::invalid_argument);
    CHECK(r2.to_json().contains("e"));
}

TEST_CASE("Act' and Nac: kernels, quasi-homomorphisms and the embedding") {
    ActionCat act(ActionMode::Act, small());
    ActionCat actp(ActionMode::ActPrime, small());
    ActionCat nac(ActionMode::Nac, small());
    const Action h = half_turn();
    ActionMap shift{h, h, {0, 1}, {2, 3, 0, 1}};
    CHECK_FALSE(act.valid(shift));
    REQUIRE(actp.valid(shift));
    const auto fac = normal_factorise(actp, shift);
    CHECK(actp.dom(fac.ker).base.order() == h.base.order());
    CHECK(is_exact_morphism(actp, shift));
    CHECK(nac.equal(shift, nac.identity(h)));
    CHECK_FALSE(actp.equal(shift, actp.identity(h)));
    ActionMap null{h, h, {0, 0}, {0, 2, 0, 2}};
    REQUIRE(actp.valid(null));
    CHECK(actp.kernel_sub(null) == h.all_points());

    const auto objs = act.objects();
    const auto ms = sample(act, objs);
    auto E = make_embedding(act, actp);
    CHECK(check_functor_exactness(E, ExactMode::Exact, objs, ms).pass);
    for (const auto& f : ms) {
        const auto a = normal_factorise(act, f);
        const auto b = normal_factorise(actp, E.on_mor(f));
        CHECK(act.kernel_sub(f) == actp.kernel_sub(E.on_mor(f)));
        CHECK(act.image_sub(f) == actp.image_sub(E.on_mor(f)));
        CHECK(act.cod(a.cok).n == actp.cod(b.cok).n);
    }
    for (const auto& f : ms) {
        const auto g = E.on_mor(f);
        const auto k = actp.dom(actp.kernel(g));
        const auto i = actp.dom(normal_factorise(actp, g).nim);
        CHECK(subset_of(g.dom.base, stabiliser(g.dom, actp.kernel_sub(g))));
        CHECK(subset_of(g.cod.base, stabiliser(g.cod, actp.image_sub(g))));
        CHECK(k.base.order() == g.dom.base.order());
        CHECK(i.base.order() == g.cod.base.order());
    }
    auto P = make_embedding(act, nac);
    CHECK(P.name == "P");
    CHECK(is_nsb_faithful(P, objs, ms));
    CHECK(is_nsb_full(P, objs, ms));
}

TEST_CASE("Nac kernels and cokernels do not depend on the representative") {
    ActionCat nac(ActionMode::Nac, small());
    ActionCat actp(ActionMode::ActPrime, small());
    const auto objs = nac.objects();
    int compared = 0;
    for (size_t i = 0; i < objs.size(); i += 5)
        for (size_t j = 0; j < objs.size(); j += 7) {
            const auto all = actp.homs(objs[i], objs[j]);
            for (size_t x = 0; x < all.size(); ++x)
                for (size_t y = 0; y < x; ++y)
                    if (nac.equal(all[x], all[y])) {
                        ++compared;
                        CHECK(nac.kernel_sub(all[x]) == nac.kernel_sub(all[y]));
                        CHECK(nac.image_sub(all[x]) == nac.image_sub(all[y]));
                        CHECK(nac.cod(nac.kernel(all[x])) == nac.cod(nac.kernel(all[y])));
                        CHECK(nac.dom(nac.kernel(all[x])) == nac.dom(nac.kernel(all[y])));
                    }
        }
    CHECK(compared > 0);
}

TEST_CASE("sigma maps become invertible in Nac") {
    ActionCat nac(ActionMode::Nac);
    ActionCat act(ActionMode::Act);
    const Action h = half_turn();
    const auto p0 = action_sigma(h, trivial_subgroup());
    const auto j0 = nac_sigma_invert(p0);
    CHECK(j0.ops == std::vector<int>{0, 1, 2, 3});

    const auto p = action_sigma(h, Subgroup{{0, 2}});
    CHECK(p.cod.order() == 2);
    REQUIRE(act.valid(p));
    const auto j = nac_sigma_invert(p);
    CHECK(j.ops == std::vector<int>{0, 1});
    auto P = make_embedding(act, nac);
    const auto pp = P.on_mor(p);
    CHECK(nac.equal(nac.compose(j, pp), nac.identity(pp.dom)));
    CHECK(nac.equal(nac.compose(pp, j), nac.identity(pp.cod)));
    // x + jp(s) = x + s
    for (int x = 0; x < h.n; ++x)
        for (int s = 0; s < 4; ++s) CHECK(h.at(x, j.ops[p.ops[s]]) == h.at(x, s));
    CHECK(nac.is_iso(pp));
    CHECK_FALSE(act.is_iso(p));

    CHECK_THROWS_WITH_AS(action_sigma(h, Subgroup{{0, 1, 2, 3}}), "sigma: subgroup does not act trivially",
                         std::invalid_argument);
    CHECK_THROWS_AS(action_sigma(make_action(1, share(symmetric3()), std::vector<int>(6, 0)), Subgroup{{0, 1}}),
                    std::invalid_argument);
}

TEST_CASE("subquotients of actions") {
    ActionCat c(ActionMode::Act);
    const Action x = make_action(4, z2, {0, 0, 1, 1, 2, 3, 3, 2});
    const auto subs = c.subobjects(x);
    int n = 0;
    for (unsigned num : subs)
        for (unsigned den : subs)
            if (c.sub_leq(x, den, num)) {
                auto s = subquotient(c, x, num, den);
                CHECK(audit_bicartesian(c, s));
                ++n;
            }
    CHECK(n >= 4);
}

TEST_CASE("action json round trip") {
    const Action h = half_turn();
    CHECK(action_from_json(action_json(h)) == h);
    ActionMap f{h, h, {0, 1}, {0, 1, 2, 3}};
    auto j = action_map_json(f);
    CHECK(j["fprime"] == json({0, 1}));
    CHECK(action_map_from_json(j, h, h).ops == f.ops);
    CHECK_THROWS_AS(action_from_json(json{{"points", 2}, {"group", "Z2"}, {"act", {{0, 1}}}}), std::invalid_argument);
}
