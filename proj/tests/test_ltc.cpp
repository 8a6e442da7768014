#include "doctest.h"
#include "homolog/ltc.hpp"
#include "homolog/nsb.hpp"

using namespace homolog;

TEST_CASE("composition with identity and zero") {
    auto x = chain(3), y = chain(3);
    for (const auto& f : all_connections(x, y)) {
        CHECK(same_connection(compose(f, identity_connection(x)), f));
        CHECK(same_connection(compose(zero_connection(y, y), f), zero_connection(x, y)));
    }
}

TEST_CASE("every composite of connections on 3-chains is a connection") {
    auto x = chain(3);
    auto all = all_connections(x, x);
    CHECK(all.size() > 3);
    for (const auto& f : all)
        for (const auto& g : all) CHECK(is_connection(compose(g, f)));
}

TEST_CASE("upper adjoint recovered from the lower one") {
    auto x = chain(3);
    for (const auto& f : all_connections(x, x)) CHECK(same_connection(from_lower(x, x, f.lower), f));
    CHECK_THROWS_AS(make_connection(x, x, {2, 1, 0}, {2, 1, 0}), std::invalid_argument);
}

TEST_CASE("normal factorisation in Ltc") {
    LtcCat c;
    auto x = chain(3);
    auto z = zero_connection(x, x);
    auto fz = normal_factorise(c, z);
    CHECK(c.dom(fz.ker).size == 3);
    CHECK(c.cod(fz.cok).size == 3);
    auto fi = normal_factorise(c, identity_connection(x));
    CHECK(c.dom(fi.ker).size == 1);
    CHECK(c.cod(fi.cok).size == 1);
    // lower map sending the middle element to the top
    auto f = from_lower(x, x, {0, 2, 2});
    auto ff = normal_factorise(c, f);
    CHECK(c.equal(c.compose(ff.nim, c.compose(ff.central, ff.ncm)), f));
    CHECK(c.is_null(c.compose(f, ff.ker)));
    CHECK(c.is_null(c.compose(ff.cok, f)));
}

TEST_CASE("exactness and modularity") {
    auto x = chain(3);
    CHECK(is_exact_connection(identity_connection(x)));
    CHECK(is_modular_connection(identity_connection(x)));
    auto d = diamond();
    for (int a = 0; a < d.size; ++a) {
        auto s = element_sequence(d, a);
        CHECK(is_exact_connection(s.m));
        CHECK(is_exact_connection(s.p));
    }
    // 2-chain into N5 through the non-normal pair a < b
    auto n5 = pentagon();
    bool witness = false;
    for (const auto& f : all_connections(chain(2), n5))
        if (!is_exact_connection(f)) witness = true;
    CHECK(witness);
    CHECK_THROWS_AS(is_modular_connection(identity_connection(n5)), std::invalid_argument);
}

TEST_CASE("modular connections are closed under composition") {
    auto x = diamond();
    auto all = all_connections(chain(3), x);
    auto back = all_connections(x, chain(3));
    for (const auto& f : all)
        for (const auto& g : back)
            if (is_modular_connection(f) && is_modular_connection(g)) CHECK(is_modular_connection(compose(g, f)));
}

TEST_CASE("biproduct equations") {
    LtcCat c;
    auto b = biproduct(chain(2), chain(2));
    CHECK(b.prod.size == 4);
    CHECK(same_connection(compose(b.p, b.i), identity_connection(chain(2))));
    CHECK(same_connection(compose(b.q, b.j), identity_connection(chain(2))));
    CHECK(c.is_null(compose(b.q, b.i)));
    CHECK(c.is_null(compose(b.p, b.j)));
    CHECK(same_connection(sum(compose(b.i, b.p), compose(b.j, b.q)), identity_connection(b.prod)));
    CHECK(is_normal_mono(c, b.i));
    CHECK(is_normal_epi(c, b.p));
    auto one = biproduct(chain(3), chain(1));
    CHECK(one.prod == chain(3));
}

TEST_CASE("idempotent sum") {
    auto x = chain(3);
    auto all = all_connections(x, x);
    for (const auto& f : all) {
        CHECK(same_connection(sum(f, f), f));
        CHECK(same_connection(sum(f, zero_connection(x, x)), f));
        for (const auto& g : all) {
            CHECK(connection_leq(f, sum(f, g)));
            CHECK(connection_leq(g, sum(f, g)));
        }
    }
}

TEST_CASE("duality is an involution compatible with composition") {
    auto x = chain(3), d = diamond();
    for (const auto& f : all_connections(x, d)) {
        auto dd = dual(dual(f));
        CHECK(same_connection(dd, f));
        for (const auto& g : all_connections(d, x)) CHECK(same_connection(dual(compose(g, f)), compose(dual(f), dual(g))));
    }
}

TEST_CASE("Ltc passes the axiom audits") {
    Bounds b;
    b.max_set = 4;
    b.mor_cap = 6;
    LtcCat c(b);
    for (const auto& r : check_axioms(c, b)) CHECK_MESSAGE(r.pass, r.to_json().dump());
}

TEST_CASE("json round trip") {
    auto f = from_lower(chain(3), diamond(), {0, 1, 4});
    auto g = connection_from_json(connection_json(f));
    CHECK(same_connection(f, g));
}
