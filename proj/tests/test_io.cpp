#include <cstdlib>
#include <filesystem>
#include <regex>

#include "doctest.h"
#include "homolog/io.hpp"

using namespace homolog;
using homolog::io::Options;

namespace {

json set2_map() {
    return io::stamp("morphism", {{"instance", "Set2"},
                                  {"morphism",
                                   {{"dom", {{"n", 4}, {"base", {0}}}},
                                    {"cod", {{"n", 3}, {"base", {0, 1}}}},
                                    {"map", {0, 1, 2, 2}}}}});
}

json jumping_complex() {
    return io::stamp("filtered-complex", {{"complex", {{"steps", 3}, {"levels", {{0, 1}, {2}}}, {"diff", {{0, 0}, {1}}}}}});
}

Options with_input(json in, std::string instance = "") {
    Options o;
    o.input = std::move(in);
    o.instance = std::move(instance);
    return o;
}

int count_lines(const std::string& dot, const std::regex& re) {
    int n = 0;
    std::istringstream in(dot);
    for (std::string line; std::getline(in, line);) n += std::regex_search(line, re) ? 1 : 0;
    return n;
}

const std::regex node_line(R"(^\s+"[^"]+"\s*(\[|;))");
const std::regex edge_line("->");

}  // namespace

TEST_CASE("schema tag and kind are enforced") {
    const auto j = io::stamp("object", {{"object", "Z4"}});
    CHECK(j["schema"] == "homolog/1");
    CHECK_NOTHROW(io::expect_schema(j, "object"));
    CHECK_THROWS_AS(io::expect_schema(j, "morphism"), io::SchemaError);
    CHECK_THROWS_AS(io::expect_schema(json{{"kind", "object"}}), io::SchemaError);
    CHECK_THROWS_AS(io::parse_json_text("{not json"), io::SchemaError);
}

TEST_CASE("bounds, windows and the seed variable") {
    const auto b = io::parse_bounds("4,6");
    CHECK(b.max_set == 4);
    CHECK(b.max_group == 6);
    CHECK(io::parse_bounds("3,4,10,2").pair_stride == 2);
    CHECK_THROWS_AS(io::parse_bounds("4"), io::SchemaError);
    CHECK_THROWS_AS(io::parse_bounds("4,x"), io::SchemaError);
    const auto w = io::parse_window("0:2,-3:0");
    CHECK(w.n_hi == 2);
    CHECK(w.p_lo == -3);
    CHECK_THROWS_AS(io::parse_window("2:0,0:1"), io::SchemaError);
    setenv("HOMOLOG_SEED", "17", 1);
    CHECK(io::seed_from_env() == 17);
    setenv("HOMOLOG_SEED", "seven", 1);
    CHECK_THROWS_AS(io::seed_from_env(), io::SchemaError);
    unsetenv("HOMOLOG_SEED");
    CHECK(io::seed_from_env(5) == 5);
}

TEST_CASE("factorise a Set2 map into five morphisms") {
    const auto out = io::run("factorise", with_input(set2_map()));
    REQUIRE(out.status == io::kOk);
    const auto& r = out.report;
    CHECK(r["kind"] == "factorisation");
    for (const char* key : {"kernel", "coimage", "central", "image", "cokernel"}) CHECK(r.contains(key));
    CHECK(r["exact"].is_boolean());
    const auto& dot = out.dot.at("factorisation.dot");
    CHECK(count_lines(dot, node_line) == 6);
    CHECK(count_lines(dot, edge_line) == 5);
}

TEST_CASE("exit codes") {
    SUBCASE("wrong kind is a schema error") {
        auto in = set2_map();
        in["kind"] = "object";
        CHECK(io::run("factorise", with_input(in)).status == io::kSchemaError);
    }
    SUBCASE("a map that is not a morphism is a schema error") {
        auto in = set2_map();
        in["morphism"]["map"] = {2, 1, 2, 2};
        const auto out = io::run("factorise", with_input(in));
        CHECK(out.status == io::kSchemaError);
        CHECK(out.report["kind"] == "error");
    }
    SUBCASE("unknown command and instance") {
        CHECK(io::run("integrate", with_input(set2_map())).status == io::kSchemaError);
        CHECK(io::run("factorise", with_input(set2_map(), "Rings")).status == io::kSchemaError);
    }
    SUBCASE("a couple that is not exact fails its audit") {
        GpCat gp;
        const GroupObj z4{share(cyclic(4))}, z2{share(cyclic(2))};
        Couple<GpCat> x{z4, z2, GroupHom{z4, z4, {0, 2, 0, 2}}, GroupHom{z4, z2, {0, 0, 0, 0}}, GroupHom{z2, z4, {0, 2}}};
        const auto in = io::stamp("couple", {{"couple", couple_json(gp, x)}});
        const auto out = io::run("derive-couple", with_input(in, "Gp"));
        CHECK(out.status == io::kAuditFailure);
        CHECK(out.report["check"]["exact"] == false);
    }
    SUBCASE("a refused induction is an operation error") {
        const auto in = io::stamp("induced", {{"morphism", {{"dom", "Z4"}, {"cod", "Z4"}, {"map", {0, 1, 2, 3}}}},
                                              {"source", {{"num", {0, 1, 2, 3}}, {"den", {0}}}},
                                              {"target", {{"num", {0, 2}}, {"den", {0}}}}});
        Options o = with_input(in, "Gp");
        o.op = "induced";
        CHECK(io::run("factorise", o).status == io::kOperationError);
    }
}

TEST_CASE("check-exact: Z2 -> Z4 -> Z2 in groups and in pairs") {
    const json z2 = {{"group", "Z2"}, {"sub", {0}}}, z4 = {{"group", "Z4"}, {"sub", {0}}};
    const json z4_half = {{"group", "Z4"}, {"sub", {0, 2}}};
    const json inc = {{"dom", z2}, {"cod", z4}, {"map", {0, 2}}};
    const json proj = {{"dom", z4}, {"cod", z2}, {"map", {0, 1, 0, 1}}};

    const auto gp = io::run("check-exact", with_input(io::stamp("sequence", {{"maps", {{{"dom", "Z2"}, {"cod", "Z4"}, {"map", {0, 2}}},
                                                                                     {{"dom", "Z4"}, {"cod", "Z2"}, {"map", {0, 1, 0, 1}}}}}}),
                                                      "Gp"));
    REQUIRE(gp.status == io::kOk);
    CHECK(gp.report["short_exact"] == true);

    // in pairs the cokernel of the inclusion keeps Z4 and enlarges the base
    const auto pairs = io::run("check-exact", with_input(io::stamp("sequence", {{"maps", {inc, proj}}}), "Gp2"));
    REQUIRE(pairs.status == io::kOk);
    CHECK(pairs.report["joints"][0]["order_two"] == true);
    CHECK(pairs.report["short_exact"] == false);
    CHECK(pairs.report["maps"][1]["normal_epi"] == false);

    const json to_half = {{"dom", z4}, {"cod", z4_half}, {"map", {0, 1, 2, 3}}};
    const auto fixed = io::run("check-exact", with_input(io::stamp("sequence", {{"maps", {inc, to_half}}}), "Gp2"));
    REQUIRE(fixed.status == io::kOk);
    CHECK(fixed.report["short_exact"] == true);
}

TEST_CASE("nsb lattice of Z4 is a three-chain") {
    const auto out = io::run("nsb", with_input(io::stamp("object", {{"object", "Z4"}}), "Gp"));
    REQUIRE(out.status == io::kOk);
    CHECK(out.report["lattice"]["size"] == 3);
    CHECK(out.report["distributive"] == true);
    CHECK(out.report["operations_audit"] == "pass");
    const auto& dot = out.dot.at("nsb.dot");
    CHECK(count_lines(dot, node_line) == 3);
    CHECK(count_lines(dot, edge_line) == 2);
}

TEST_CASE("Hasse diagram of a bare chain") {
    FinLattice chain = FinLattice::from_leq(3, {{true, true, true}, {false, true, true}, {false, false, true}});
    const auto dot = io::emit_dot(io::stamp("lattice", lattice_json(chain)));
    CHECK(count_lines(dot, node_line) == 3);
    CHECK(count_lines(dot, edge_line) == 2);
    CHECK_THROWS_AS(io::emit_dot(io::stamp("mystery", {})), std::invalid_argument);
}

TEST_CASE("induced factorisation draws two bicartesian squares") {
    const auto in = io::stamp("induced", {{"morphism", {{"dom", "Z4"}, {"cod", "Z4"}, {"map", {0, 2, 0, 2}}}},
                                          {"source", {{"num", {0, 1, 2, 3}}, {"den", {0, 2}}}},
                                          {"target", {{"num", {0, 2}}, {"den", {0}}}}});
    Options o = with_input(in, "Gp");
    o.op = "induced";
    const auto out = io::run("factorise", o);
    REQUIRE(out.status == io::kOk);
    CHECK(out.report["agrees_with_direct"] == true);
    CHECK(out.report["bicartesian_audit"] == "pass");
    for (const char* name : {"source.dot", "target.dot"}) {
        const auto& dot = out.dot.at(name);
        CHECK(count_lines(dot, node_line) == 4);
        CHECK(count_lines(dot, edge_line) == 4);
    }
}

TEST_CASE("spectral pages of a filtered complex") {
    Options o = with_input(jumping_complex());
    o.r_max = 4;
    const auto out = io::run("spectral", o);
    REQUIRE(out.status == io::kOk);
    CHECK(out.report["matches_oracle"] == true);
    CHECK(out.dot.size() == 4);
    // d^r goes from (n, p) to (n - 1, p - r)
    const std::regex arrow(R"xx("E_(-?\d+)_(-?\d+)" -> "E_(-?\d+)_(-?\d+)" \[label="d(\d+)", bidegree="\(-1,-(\d+)\)"\])xx");
    int arrows = 0;
    for (const auto& [name, dot] : out.dot) {
        std::istringstream in(dot);
        for (std::string line; std::getline(in, line);) {
            std::smatch m;
            if (!std::regex_search(line, m, arrow)) continue;
            ++arrows;
            const int r = std::stoi(m[5]);
            CHECK(name == "page_" + std::to_string(r) + ".dot");
            CHECK(std::stoi(m[3]) == std::stoi(m[1]) - 1);
            CHECK(std::stoi(m[4]) == std::stoi(m[2]) - r);
            CHECK(std::stoi(m[6]) == r);
        }
    }
    CHECK(arrows == 1);  // only d^2 from (1,2) to (0,0) is non-null
}

TEST_CASE("spectral refuses a couple of higher type") {
    GpCat gp;
    FilteredComplex fc;
    fc.steps = 3;
    fc.level = {{0, 1}, {2}};
    fc.diff = {{0u, 0u}, {1u}};
    const auto d = derive_bigraded(gp, filtered_couple(fc));
    const auto in = io::stamp("bigraded-couple", {{"couple", bigraded_json(gp, d.couple)}});
    Options o = with_input(in, "Gp");
    o.audit = false;
    CHECK(io::run("spectral", o).status == io::kOperationError);
}

TEST_CASE("check-axioms on Act with bounds (4, 6)") {
    Options o;
    o.instance = "Act";
    o.bounds = io::parse_bounds("4,6");
    const auto out = io::run("check-axioms", o);
    CHECK(out.status == io::kOk);
    CHECK(out.report["pass"] == true);
    CHECK(out.report["audits"].size() >= 4);
}

TEST_CASE("perspective quotient needs ex2") {
    const auto in = io::stamp("hom-set", {{"dom", {{"n", 3}, {"base", {0}}}}, {"cod", {{"n", 3}, {"base", {0}}}}});
    const auto out = io::run("psp", with_input(in, "Set2"));
    REQUIRE(out.status == io::kOk);
    int members = 0;
    for (const auto& c : out.report["classes"]) members += c["members"].get<int>();
    CHECK(members == out.report["base_morphisms"].get<int>());
}

TEST_CASE("tower command covers Ngp and Nac") {
    const auto in = io::stamp("group-tower", {{"groups", {"Z2", "Z4", "Z8"}},
                                              {"phi", {json::array(), {0, 1, 0, 1}, {0, 1, 2, 3, 0, 1, 2, 3}}}});
    const auto out = io::run("tower", with_input(in));
    REQUIRE(out.status == io::kOk);
    CHECK(out.report["ngp"]["check"]["exact"] == true);
    CHECK(out.report["nac"]["check"]["exact"] == true);
    CHECK(out.dot.count("ngp_page_1.dot") == 1);
}

TEST_CASE("reports are deterministic and round trip through text") {
    const auto a = io::run("spectral", with_input(jumping_complex()));
    const auto b = io::run("spectral", with_input(jumping_complex()));
    CHECK(io::dump(a.report) == io::dump(b.report));
    CHECK(a.dot == b.dot);
    CHECK(io::parse_json_text(io::dump(a.report)) == a.report);

    setenv("HOMOLOG_SEED", "3", 1);
    Options o = with_input(io::stamp("filtered-complex-sample", {{"max_dim", 3}, {"steps", 2}, {"max_degree", 1}, {"count", 5}}));
    o.seed = io::seed_from_env();
    unsetenv("HOMOLOG_SEED");
    const auto s1 = io::run("spectral", o);
    const auto s2 = io::run("spectral", o);
    REQUIRE(s1.status == io::kOk);
    CHECK(s1.report["runs"].size() == 5);
    CHECK(io::dump(s1.report) == io::dump(s2.report));
}

TEST_CASE("write_outcome lays out the report and DOT files") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "homolog_io_test";
    fs::remove_all(dir);
    const auto out = io::run("factorise", with_input(set2_map()));
    io::write_outcome("factorise", out, dir.string());
    CHECK(fs::exists(dir / "factorise.json"));
    CHECK(fs::exists(dir / "factorisation.dot"));
    CHECK(io::read_json_file((dir / "factorise.json").string()) == out.report);
    fs::remove_all(dir);
}

TEST_CASE("derive-couple iterates an exact couple") {
    GpCat gp;
    const auto x = abelian_couples(4, 10).front();
    Options o = with_input(io::stamp("couple", {{"couple", couple_json(gp, x)}}), "Gp");
    o.r_max = 3;
    const auto out = io::run("derive-couple", o);
    REQUIRE(out.status == io::kOk);
    REQUIRE(out.report["derived"].size() == 2);
    for (const auto& step : out.report["derived"]) CHECK(step["check"]["exact"] == true);
}

TEST_CASE("a view window wider than the couple is clipped for the derivation audit") {
    const auto in = io::stamp("group-tower", {{"groups", {"Z2", "Z4"}}, {"phi", {json::array(), {0, 1, 0, 1}}}});
    Options o = with_input(in);
    o.window = io::parse_window("0:3,-5:3");
    const auto out = io::run("tower", o);
    CHECK(out.status == io::kOk);
    CHECK(out.report["ngp"]["derivation_audit"].empty());
}
