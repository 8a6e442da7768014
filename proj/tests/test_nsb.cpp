#include "doctest.h"
#include "homolog/ltc.hpp"
#include "homolog/nsb.hpp"

using namespace homolog;

namespace {

std::vector<Connection> maps_between(const std::vector<FinLattice>& objs) {
    std::vector<Connection> ms;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& f : all_connections(x, y)) ms.push_back(f);
    return ms;
}

}  // namespace

TEST_CASE("Nsb of a lattice is the lattice itself") {
    LtcCat c;
    for (const auto& x : small_lattices(5)) {
        auto l = nsb_lattice(c, x);
        CHECK(l.lattice == x);
        CHECK(nsb_operations_agree(c, x));
    }
    CHECK(nsb_lattice(c, chain(1)).labels.size() == 1);
}

TEST_CASE("direct and inverse images match their definitions") {
    LtcCat c;
    for (const auto& f : maps_between({chain(2), chain(3), diamond()})) {
        for (auto x : c.subobjects(c.dom(f))) CHECK(c.direct_image(f, x) == direct_image_by_definition(c, f, x));
        for (auto y : c.subobjects(c.cod(f))) CHECK(c.inverse_image(f, y) == inverse_image_by_definition(c, f, y));
    }
}

TEST_CASE("images along normal monos and epis") {
    LtcCat c;
    auto d = diamond();
    for (int a = 0; a < d.size; ++a) {
        auto s = element_sequence(d, a);
        for (int x = 0; x < d.size; ++x) {
            CHECK(c.direct_image(s.m, c.inverse_image(s.m, x)) == d.meet(x, a));
            CHECK(c.inverse_image(s.p, c.direct_image(s.p, x)) == d.join(x, a));
        }
    }
}

TEST_CASE("transfer is functorial and sends null maps to zero") {
    LtcCat c;
    std::vector<FinLattice> objs{chain(2), chain(3), boolean_lattice(2)};
    auto ms = maps_between(objs);
    for (const auto& f : ms) {
        if (c.is_null(f)) CHECK(same_connection(nsb_connection(c, f), zero_connection(c.dom(f), c.cod(f))));
        for (const auto& g : ms)
            if (c.cod(f) == c.dom(g))
                CHECK(same_connection(nsb_connection(c, c.compose(g, f)),
                                      compose(nsb_connection(c, g), nsb_connection(c, f))));
    }
}

TEST_CASE("exact maps are modular on both sides") {
    LtcCat c;
    for (const auto& f : maps_between({chain(3), diamond()}))
        if (is_exact_morphism(c, f)) {
            CHECK(is_left_modular(c, f));
            CHECK(is_right_modular(c, f));
        }
}

TEST_CASE("Psp of Ltc identifies nothing") {
    LtcCat c;
    PspCat<LtcCat> p(c);
    auto x = chain(3);
    CHECK(p.homs(x, x).size() == c.homs(x, x).size());
    CHECK(p.name() == "Psp(Ltc)");
}

TEST_CASE("nsb-faithful and nsb-full") {
    LtcCat c;
    std::vector<FinLattice> objs{chain(2), chain(3), diamond()};
    auto ms = maps_between(objs);
    Functor<LtcCat, LtcCat> id{"1", &c, &c, [](const FinLattice& x) { return x; },
                               [](const Connection& f) { return f; }};
    CHECK(is_nsb_faithful(id, objs, ms));
    CHECK(is_nsb_full(id, objs, ms));
    Functor<LtcCat, LtcCat> to_null{"0", &c, &c, [](const FinLattice&) { return chain(1); },
                                    [](const Connection&) { return identity_connection(chain(1)); }};
    auto t = nsb_transfer(to_null, objs);
    CHECK_FALSE(t.faithful);
    CHECK(t.full);
}
