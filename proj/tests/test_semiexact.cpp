#include "doctest.h"
#include "homolog/ltc.hpp"
#include "homolog/semiexact.hpp"

using namespace homolog;

TEST_CASE("ordered interval: the strict ideal is not closed") {
    OrderedInterval c(0, 4);
    Bounds b;
    auto objs = c.objects();
    auto ms = sample_morphisms(c, objs, b);
    auto r = check_ex0(c, objs, ms);
    CHECK_FALSE(r.pass);
    CHECK(r.to_json()["status"] == "fail");
    CHECK(r.to_json().contains("counterexample"));
}

TEST_CASE("ordered interval: kernels fail at the boundary") {
    OrderedInterval c(0, 4);
    CHECK_THROWS(c.kernel({0, 0}));
    CHECK_NOTHROW(c.kernel({2, 2}));
}

TEST_CASE("composability is enforced") {
    LtcCat c;
    auto f = identity_connection(chain(2));
    auto g = identity_connection(chain(3));
    CHECK_THROWS_WITH_AS(is_exact_at(c, f, g), "non-composable pair", std::invalid_argument);
}

TEST_CASE("null and exact morphisms in Ltc") {
    LtcCat c;
    auto x = chain(3);
    CHECK(is_null_object(c, chain(1)));
    CHECK_FALSE(is_null_object(c, x));
    CHECK(is_exact_morphism(c, identity_connection(x)));
    for (int a = 0; a < 3; ++a) {
        auto s = element_sequence(x, a);
        CHECK(is_normal_mono(c, s.m));
        CHECK(is_normal_epi(c, s.p));
        CHECK(is_short_exact(c, s.m, s.p));
        CHECK(is_exact_at(c, s.m, s.p));
        CHECK(is_order_two(c, s.m, s.p));
    }
}

TEST_CASE("factorisation pieces are kernels and cokernels") {
    LtcCat c;
    auto d = diamond();
    for (const auto& f : all_connections(chain(3), d)) {
        auto fac = normal_factorise(c, f);
        CHECK(c.equal(c.compose(fac.nim, c.compose(fac.central, fac.ncm)), f));
        CHECK(is_short_exact(c, fac.ker, fac.ncm));
        CHECK(is_short_exact(c, fac.nim, fac.cok));
        CHECK(is_N_mono(c, fac.nim));
        CHECK(is_N_epi(c, fac.ncm));
        CHECK(is_exact_morphism(c, f) == is_exact_connection(f));
    }
}

TEST_CASE("audit report json") {
    AuditReport r{"ex2", "Demo"};
    r.checked = 3;
    auto j = r.to_json();
    CHECK(j["status"] == "pass");
    CHECK(j["note"].get<std::string>().find("bounded") != std::string::npos);
    r.fail({{"reason", "x"}});
    r.fail({{"reason", "y"}});
    CHECK(r.counterexample["reason"] == "x");
}

TEST_CASE("functor exactness: identity on Ltc") {
    LtcCat c;
    Functor<LtcCat, LtcCat> id{"1", &c, &c, [](const FinLattice& x) { return x; },
                               [](const Connection& f) { return f; }};
    std::vector<FinLattice> objs{chain(2), chain(3), diamond()};
    std::vector<Connection> ms;
    for (const auto& x : objs)
        for (const auto& y : objs)
            for (const auto& f : all_connections(x, y)) ms.push_back(f);
    auto r = check_functor_exactness(id, ExactMode::Exact, objs, ms);
    CHECK(r.pass);
    CHECK(r.extra["exact_iff_short_and_long"] == true);
}
