#include "doctest.h"
#include "homolog/couples.hpp"

using namespace homolog;

namespace {

const GroupRef z2 = share(cyclic(2));
const GroupRef z4 = share(cyclic(4));
const GroupRef z8 = share(cyclic(8));

std::vector<int> mod(int from, int to) {
    std::vector<int> f(from);
    for (int i = 0; i < from; ++i) f[i] = i % to;
    return f;
}

std::vector<int> times(int from, int k) {
    std::vector<int> f(from);
    for (int i = 0; i < from; ++i) f[i] = i * k;
    return f;
}

// Z4 -2-> Z4 -> Z2 -> Z4 style couple: D = Z4, u = multiplication by 2.
Couple<GpCat> doubling() {
    for (const auto& x : abelian_couples(4, 400))
        if (x.D.group->size == 4 && x.u.map == std::vector<int>{0, 2, 0, 2} && x.E.group->size == 4) return x;
    FAIL("doubling couple missing from the catalogue");
    return {};
}

// x0 at level 0, x1 at level 1, and y at level 2 with d y = x0: d^2 kills x0.
FilteredComplex jumping() {
    FilteredComplex fc;
    fc.steps = 3;
    fc.level = {{0, 1}, {2}};
    fc.diff = {{0u, 0u}, {1u}};
    return fc;
}

bool same_dims(const std::map<Bidegree, int>& page, const std::map<Bidegree, int>& oracle) {
    for (const auto& [k, d] : oracle) {
        auto it = page.find(k);
        if ((it == page.end() ? 0 : it->second) != d) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("catalogue of abelian groups up to order sixteen") {
    const auto gs = small_abelian_groups(16);
    CHECK(gs.size() == 25);
    for (const auto& g : gs) CHECK(g.group->abelian());
    CHECK(small_abelian_groups(4).size() == 5);
    CHECK_THROWS_AS(small_abelian_groups(17), std::invalid_argument);
}

TEST_CASE("generated abelian couples are exact and derive") {
    GpCat gp;
    const auto cs = abelian_couples(8, 120);
    REQUIRE(cs.size() >= 100);
    int nontrivial = 0;
    for (const auto& x : cs) {
        const auto rep = check_exact_couple(gp, x);
        REQUIRE(rep.exact());
        const auto d = derive_couple(gp, x);
        CHECK(check_exact_couple(gp, d.couple).exact());
        if (!gp.is_null(gp.compose(x.v, x.del))) ++nontrivial;
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("iterated derivation agrees with the closed form") {
    GpCat gp;
    int compared = 0;
    for (const auto& x : abelian_couples(8, 60)) {
        auto prev = iterate(gp, x, 1);
        for (int r = 2; r <= 3; ++r) {
            const auto next = iterate(gp, x, r);
            const auto derived = derive_couple(gp, prev.couple);
            CHECK(compare_with_derivation(gp, next, prev, derived).empty());
            prev = next;
            ++compared;
        }
    }
    CHECK(compared >= 100);
}

TEST_CASE("doubling couple on Z4") {
    GpCat gp;
    const auto x = doubling();
    const auto rep = check_exact_couple(gp, x);
    CHECK(rep.exact());
    CHECK(rep.horizon >= 1);
    const auto d = derive_couple(gp, x);
    CHECK(d.couple.D.group->size == 2);
    // d = v del kills E^2 down to a point or leaves Z2
    CHECK(d.couple.E.group->size <= 4);
    CHECK(rep.to_json()["exact"] == true);
}

TEST_CASE("a couple that is not exact is rejected by derivation") {
    GpCat gp;
    auto x = doubling();
    x.v = GroupHom{x.D, x.E, std::vector<int>(4, 0)};
    const auto rep = check_exact_couple(gp, x);
    CHECK_FALSE(rep.exact());
    CHECK(rep.first_failure() == "a");
    CHECK_THROWS_WITH_AS(derive_couple(gp, x), "couple is not exact: clause (a) fails", std::invalid_argument);
}

TEST_CASE("couple whose E is zero") {
    GpCat gp;
    const GroupObj d{z4};
    const GroupObj zero{share(FinGroup{})};
    Couple<GpCat> x{d, zero, gp.identity(d), GroupHom{d, zero, std::vector<int>(4, 0)}, GroupHom{zero, d, {0}}};
    CHECK(check_exact_couple(gp, x).exact());
    const auto y = derive_couple(gp, x);
    CHECK(y.couple.D.group->size == 4);
    CHECK(y.couple.E.group->size == 1);
}

TEST_CASE("filtered complex validation") {
    CHECK(is_filtered_complex(jumping()));
    auto bad = jumping();
    bad.level[0][0] = 1;
    bad.level[1][0] = 0;
    std::string why;
    CHECK_FALSE(is_filtered_complex(bad, &why));
    CHECK(why == "boundary leaves the filtration step");
    CHECK_THROWS_AS(filtered_couple(bad), std::invalid_argument);
    const auto j = filtered_complex_json(jumping());
    CHECK(filtered_complex_json(filtered_complex_from_json(j)) == j);
}

TEST_CASE("pages of a filtered complex match the associated graded") {
    GpCat gp;
    const auto fc = jumping();
    const auto x = filtered_couple(fc);
    validate_couple(gp, x);
    CHECK(check_bigraded_couple(gp, x).exact());
    const auto ss = bigraded_pages(gp, x, 4);
    CHECK(ss.audit.dd_null);
    CHECK(ss.audit.homology);
    CHECK(ss.audit.den_below_num);
    REQUIRE(ss.audit.stable_from > 0);
    const auto oracle = associated_graded_oracle(fc);
    CHECK(same_dims(page_dimensions(ss.pages.back()), oracle));
    CHECK(oracle.at({0, 0}) == 0);
    CHECK(oracle.at({0, 1}) == 1);
    CHECK(oracle.at({1, 2}) == 0);
    CHECK(page_dimensions(ss.pages.front()).at({0, 0}) == 1);
    CHECK(compare_pages_with_derivation(gp, x, 3).empty());
}

TEST_CASE("enumerated filtered complexes agree with brute force") {
    GpCat gp;
    const auto all = enumerate_filtered_complexes(4, 3, 1, 7);
    REQUIRE(all.size() > 100);
    for (std::size_t i = 0; i < all.size(); i += 7) {
        const auto& fc = all[i];
        REQUIRE(is_filtered_complex(fc));
        const auto x = filtered_couple(fc);
        const auto ss = bigraded_pages(gp, x, 4);
        REQUIRE(ss.audit.stable_from > 0);
        CHECK(ss.audit.dd_null);
        CHECK(ss.audit.homology);
        CHECK(same_dims(page_dimensions(ss.pages.back()), associated_graded_oracle(fc)));
    }
}

TEST_CASE("enumeration is deterministic and counts isomorphism types") {
    const auto a = enumerate_filtered_complexes(3, 2, 1, 1);
    const auto b = enumerate_filtered_complexes(3, 2, 1, 1);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(filtered_complex_json(a[i]) == filtered_complex_json(b[i]));
    // single pieces: 2 degrees x 2 levels; pairs: 3 level choices
    CHECK(enumerate_filtered_complexes(1, 2, 1, 1).size() == 4);
    CHECK(enumerate_filtered_complexes(2, 2, 1, 1).size() == 4 + 10 + 3);
}

TEST_CASE("bigraded derivation raises the type") {
    GpCat gp;
    const auto x = filtered_couple(jumping());
    const auto d = derive_bigraded(gp, x);
    CHECK(d.couple.type == 2);
    CHECK(d.couple.p_hi == x.p_hi + 1);
    CHECK(check_bigraded_couple(gp, d.couple).exact());
}

TEST_CASE("bigraded couple json round trip") {
    GpCat gp;
    const auto x = filtered_couple(jumping());
    const auto j = bigraded_json(gp, x);
    ObjParser<GpCat> obj = [](const json& o) { return GroupObj{group_from_json(o)}; };
    MorParser<GpCat> mor = [](const json& m, const GroupObj& a, const GroupObj& b) {
        return GroupHom{a, b, m.at("map").get<std::vector<int>>()};
    };
    const auto y = bigraded_from_json(gp, j, obj, mor);
    CHECK(bigraded_json(gp, y) == j);
    CHECK(pages_json(gp, bigraded_pages(gp, y, 3)) == pages_json(gp, bigraded_pages(gp, x, 3)));
}

TEST_CASE("maps with the wrong ends are refused") {
    GpCat gp;
    auto x = filtered_couple(jumping());
    x.u.begin()->second.cod = GroupObj{z4};
    CHECK_THROWS_AS(validate_couple(gp, x), std::invalid_argument);
}

TEST_CASE("unknown continuation is flagged on the page") {
    GpCat gp;
    auto x = filtered_couple(jumping());
    x.above = Extend::Unknown;
    const auto ss = bigraded_pages(gp, x, 3);
    bool flagged = false;
    for (const auto& n : ss.audit.notices) flagged = flagged || n.rfind("truncation:", 0) == 0;
    CHECK(flagged);
    CHECK(extend_from_name(extend_name(Extend::Unknown)) == Extend::Unknown);
    CHECK_THROWS_AS(extend_from_name("sideways"), std::invalid_argument);
}

TEST_CASE("surjective group tower gives an exact couple in Ngp") {
    PairCat ngp(PairMode::Ngp);
    const auto t = group_tower({z2, z4, z8}, {{}, mod(4, 2), mod(8, 4)});
    CHECK(t.path_connected());
    const auto x = tower_couple_ngp(t);
    validate_couple(ngp, x);
    const auto rep = check_bigraded_couple(ngp, x);
    CHECK(rep.exact());
    const auto ss = bigraded_pages(ngp, x, 4);
    CHECK(ss.audit.dd_null);
    CHECK(ss.audit.homology);
    const auto j = tower_json(t);
    CHECK(tower_json(tower_from_json(j)) == j);
}

TEST_CASE("tower with disconnected fibres lives in Nac") {
    ActionCat nac(ActionMode::Nac);
    // Z2 -> Z4 by doubling: pi_0 of the fibre is Z4 / 2Z4, two points swapped by the generator
    const auto t = group_tower({z4, z2}, {{}, times(2, 2)});
    CHECK(t.path_connected());
    CHECK(t.levels[1].pi0_f.n == 2);
    const auto x = tower_couple_nac(t);
    validate_couple(nac, x);
    CHECK(x.quasi);
    CHECK(check_bigraded_couple(nac, x).exact());
    PairCat ngp(PairMode::Ngp);
    CHECK(check_bigraded_couple(ngp, tower_couple_ngp(t)).exact());
}

TEST_CASE("towers with several components") {
    ActionCat nac(ActionMode::Nac);
    // P_1 has a second component over the base point of P_0 = {0, a}
    const auto t = group_tower({z2, z2}, {{}, {0, 1}}, {Pointed{2}, Pointed{3}}, {{}, {0, 0, 1}});
    CHECK_FALSE(t.path_connected());
    CHECK_THROWS_AS(tower_couple_ngp(t), std::invalid_argument);
    const auto x = tower_couple_nac(t);
    validate_couple(nac, x);
    CHECK(check_bigraded_couple(nac, x).exact());
}

TEST_CASE("tower typing errors") {
    CHECK_THROWS_AS(group_tower({z2, z4}, {{}, {0, 1, 1, 0}}), std::invalid_argument);
    auto t = group_tower({z2, z4}, {{}, mod(4, 2)});
    t.levels[1].i_star[1] = {0, 1};
    CHECK_THROWS_WITH_AS(validate_tower(t), doctest::Contains("supplied maps fail morphism typing"), std::invalid_argument);
}
