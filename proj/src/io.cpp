#include "homolog/io.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "homolog/actions.hpp"
#include "homolog/nsb.hpp"
#include "homolog/subquotient.hpp"

namespace homolog::io {

// ---- schema plumbing -----------------------------------------------------------------------

json stamp(const std::string& kind, json body) {
    if (body.is_null()) body = json::object();
    body["schema"] = kSchema;
    body["kind"] = kind;
    return body;
}

void expect_schema(const json& j, const std::string& kind) {
    if (!j.is_object()) throw SchemaError("input must be a JSON object");
    if (!j.contains("schema") || j.at("schema") != kSchema)
        throw SchemaError(std::string("input must carry \"schema\": \"") + kSchema + "\"");
    if (!kind.empty() && j.value("kind", std::string()) != kind)
        throw SchemaError("expected input of kind \"" + kind + "\", got \"" + j.value("kind", std::string()) + "\"");
}

json parse_json_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed JSON: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str());
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

namespace {

std::vector<int> split_ints(const std::string& s, char sep) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(part, &used);
        } catch (const std::exception&) {
            throw SchemaError("not an integer: \"" + part + "\"");
        }
        if (used != part.size()) throw SchemaError("not an integer: \"" + part + "\"");
        out.push_back(v);
    }
    return out;
}

}  // namespace

Bounds parse_bounds(const std::string& s) {
    const auto v = split_ints(s, ',');
    if (v.size() < 2 || v.size() > 4) throw SchemaError("bounds are sets,groups[,mor_cap[,pair_stride]]");
    Bounds b;
    b.max_set = v[0];
    b.max_group = v[1];
    if (v.size() > 2) b.mor_cap = v[2];
    if (v.size() > 3) b.pair_stride = v[3];
    if (b.max_set < 1 || b.max_set > 6 || b.max_group < 1 || b.max_group > 8 || b.mor_cap < 0 || b.pair_stride < 1)
        throw SchemaError("bounds out of range: sets 1..6, groups 1..8");
    return b;
}

Window parse_window(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw SchemaError("window is n_lo:n_hi,p_lo:p_hi");
    const auto n = split_ints(s.substr(0, comma), ':');
    const auto p = split_ints(s.substr(comma + 1), ':');
    if (n.size() != 2 || p.size() != 2 || n[0] > n[1] || p[0] > p[1]) throw SchemaError("window is n_lo:n_hi,p_lo:p_hi");
    return {n[0], n[1], p[0], p[1]};
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
    const char* s = std::getenv("HOMOLOG_SEED");
    if (!s || !*s) return fallback;
    try {
        std::size_t used = 0;
        const auto v = std::stoull(s, &used);
        if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw SchemaError(std::string("HOMOLOG_SEED is not an unsigned integer: ") + s);
}

std::vector<std::string> instance_names() { return {"Set2", "Set*", "Gp", "Gp2", "Q", "Ngp", "Ltc", "Act", "Act'", "Nac"}; }

std::vector<std::string> command_names() {
    return {"factorise", "check-exact", "nsb", "psp", "derive-couple", "spectral", "check-axioms", "tower"};
}

namespace {

// ---- codecs: JSON to typed objects, with validation ---------------------------------------------

SetPair parse_obj(const Set2Cat&, const json& j) { return set_pair_from_json(j); }
Pointed parse_obj(const PointedCat&, const json& j) {
    const int n = j.is_number() ? j.get<int>() : j.at("points").get<int>();
    if (n < 1 || n > 31) throw std::invalid_argument("pointed set needs 1..31 points");
    return {n};
}
GroupObj parse_obj(const GpCat&, const json& j) { return {group_from_json(j)}; }
GroupPair parse_obj(const PairCat&, const json& j) { return pair_from_json(j); }
FinLattice parse_obj(const LtcCat&, const json& j) { return lattice_from_json(j); }
Action parse_obj(const ActionCat&, const json& j) { return action_from_json(j); }

void check_size(const std::vector<int>& f, int dom, int cod) {
    if (static_cast<int>(f.size()) != dom) throw std::invalid_argument("map has the wrong length");
    for (int y : f)
        if (y < 0 || y >= cod) throw std::invalid_argument("map leaves its codomain");
}

SetPairMap parse_mor(const Set2Cat&, const json& j, const SetPair& a, const SetPair& b) {
    SetPairMap f{a, b, j.at("map").get<std::vector<int>>()};
    check_size(f.map, a.n, b.n);
    if (!is_pair_map(f)) throw std::invalid_argument("map does not send X0 into Y0");
    return f;
}
PointedMap parse_mor(const PointedCat&, const json& j, const Pointed& a, const Pointed& b) {
    PointedMap f{a, b, j.at("map").get<std::vector<int>>()};
    check_size(f.map, a.n, b.n);
    if (f.map[0] != 0) throw std::invalid_argument("map does not preserve the base point");
    return f;
}
GroupHom parse_mor(const GpCat&, const json& j, const GroupObj& a, const GroupObj& b) {
    GroupHom f{a, b, j.at("map").get<std::vector<int>>()};
    check_size(f.map, a.group->size, b.group->size);
    if (!is_hom(*a.group, *b.group, f.map)) throw std::invalid_argument("map is not a homomorphism");
    return f;
}
PairMap parse_mor(const PairCat& c, const json& j, const GroupPair& a, const GroupPair& b) {
    PairMap f{a, b, j.at("map").get<std::vector<int>>()};
    check_size(f.map, a.group->size, b.group->size);
    if (!c.valid(f)) throw std::invalid_argument("map is not a morphism of " + c.name());
    return f;
}
Connection parse_mor(const LtcCat&, const json& j, const FinLattice& a, const FinLattice& b) {
    auto f = make_connection(a, b, j.at("lower").get<std::vector<int>>(), j.at("upper").get<std::vector<int>>());
    return f;
}
ActionMap parse_mor(const ActionCat& c, const json& j, const Action& a, const Action& b) {
    auto f = action_map_from_json(j, a, b);
    check_size(f.points, a.n, b.n);
    check_size(f.ops, a.order(), b.order());
    if (!c.valid(f)) throw std::invalid_argument("map is not a morphism of " + c.name());
    return f;
}

unsigned mask_from(const json& j) {
    unsigned m = 0;
    for (int x : j.get<std::vector<int>>()) {
        if (x < 0 || x > 30) throw std::invalid_argument("element out of range");
        m |= 1u << x;
    }
    return m;
}

unsigned parse_sub(const Set2Cat&, const SetPair&, const json& j) { return mask_from(j); }
unsigned parse_sub(const PointedCat&, const Pointed&, const json& j) { return mask_from(j); }
Subgroup parse_sub(const GpCat&, const GroupObj&, const json& j) {
    auto v = j.get<std::vector<int>>();
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return Subgroup{v};
}
Subgroup parse_sub(const PairCat&, const GroupPair& a, const json& j) { return parse_sub(GpCat{}, GroupObj{a.group}, j); }
int parse_sub(const LtcCat&, const FinLattice&, const json& j) { return j.get<int>(); }
unsigned parse_sub(const ActionCat&, const Action&, const json& j) { return mask_from(j.is_object() ? j.at("points") : j); }

template <class C>
typename C::Mor parse_mor(const C& c, const json& j) {
    return parse_mor(c, j, parse_obj(c, j.at("dom")), parse_obj(c, j.at("cod")));
}

template <class C>
typename C::Sub parse_normal_sub(const C& c, const typename C::Obj& a, const json& j) {
    auto x = parse_sub(c, a, j);
    for (const auto& s : c.subobjects(a))
        if (s == x) return x;
    throw std::invalid_argument("not a normal subobject: " + j.dump());
}

// Short node text for diagrams.
std::string short_label(const Set2Cat&, const SetPair& a) {
    return "(" + std::to_string(a.n) + "," + std::to_string(std::popcount(a.base)) + ")";
}
std::string short_label(const PointedCat&, const Pointed& a) { return std::to_string(a.n) + " pts"; }
std::string short_label(const GpCat&, const GroupObj& a) { return "order " + std::to_string(a.group->size); }
std::string short_label(const PairCat&, const GroupPair& a) {
    return std::to_string(a.group->size) + "/" + std::to_string(a.base.order());
}
std::string short_label(const LtcCat&, const FinLattice& a) { return std::to_string(a.size) + " elts"; }
std::string short_label(const ActionCat&, const Action& a) {
    return std::to_string(a.n) + " pts, order " + std::to_string(a.order());
}

// Runs f(category) for a named instance.
template <class F>
auto with_instance(const std::string& name, const Bounds& b, F&& f) {
    if (name == "Set2") return f(Set2Cat(b));
    if (name == "Set*") return f(PointedCat(b));
    if (name == "Gp") return f(GpCat(b));
    if (name == "Gp2") return f(PairCat(PairMode::Gp2, b));
    if (name == "Q") return f(PairCat(PairMode::Q, b));
    if (name == "Ngp") return f(PairCat(PairMode::Ngp, b));
    if (name == "Ltc") return f(LtcCat(b));
    if (name == "Act") return f(ActionCat(ActionMode::Act, b));
    if (name == "Act'") return f(ActionCat(ActionMode::ActPrime, b));
    if (name == "Nac") return f(ActionCat(ActionMode::Nac, b));
    throw SchemaError("unknown instance \"" + name + "\"");
}

// Parsing stage: everything thrown here is a schema problem.
template <class F>
auto parsing(F&& f) {
    try {
        return f();
    } catch (const SchemaError&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaError(e.what());
    }
}

std::string instance_of(const Options& opt) {
    if (!opt.instance.empty()) return opt.instance;
    if (opt.input.is_object() && opt.input.contains("instance")) return opt.input.at("instance").get<std::string>();
    throw SchemaError("no instance given: use --instance or an \"instance\" field");
}

const json& need_input(const Options& opt, const std::string& kind) {
    if (opt.input.is_null()) throw SchemaError("this command needs --input");
    expect_schema(opt.input, kind);
    return opt.input;
}

json window_json(const Window& w) { return {{"n", {w.n_lo, w.n_hi}}, {"p", {w.p_lo, w.p_hi}}}; }

// ---- factorise --------------------------------------------------------------------------------

template <class C>
json factorisation_body(const C& c, const typename C::Mor& f) {
    const auto fz = normal_factorise(c, f);
    return {{"instance", c.name()},
            {"morphism", c.mor_json(f)},
            {"kernel", c.mor_json(fz.ker)},
            {"coimage", c.mor_json(fz.ncm)},
            {"central", c.mor_json(fz.central)},
            {"image", c.mor_json(fz.nim)},
            {"cokernel", c.mor_json(fz.cok)},
            {"exact", c.is_iso(fz.central)},
            {"labels",
             {short_label(c, c.dom(fz.ker)), short_label(c, c.dom(f)), short_label(c, c.cod(fz.ncm)),
              short_label(c, c.dom(fz.nim)), short_label(c, c.cod(f)), short_label(c, c.cod(fz.cok))}}};
}

template <class C>
json subquotient_body(const C& c, const Subquotient<C>& s) {
    return {{"instance", c.name()},
            {"ambient", c.obj_json(s.ambient)},
            {"num", c.sub_json(s.ambient, s.num)},
            {"den", c.sub_json(s.ambient, s.den)},
            {"object", c.obj_json(realised(c, s))},
            {"m", c.mor_json(s.m)},
            {"q", c.mor_json(s.q)},
            {"h", c.mor_json(s.h)},
            {"k", c.mor_json(s.k)},
            {"labels",
             {short_label(c, c.dom(s.m)), short_label(c, s.ambient), short_label(c, realised(c, s)),
              short_label(c, c.cod(s.q))}}};
}

Outcome factorise(const Options& opt) {
    const auto name = instance_of(opt);
    if (opt.op.empty() || opt.op == "normal") {
        const auto& in = need_input(opt, "morphism");
        return with_instance(name, opt.bounds, [&](const auto& c) {
            const auto f = parsing([&] { return parse_mor(c, in.at("morphism")); });
            Outcome out;
            out.report = stamp("factorisation", factorisation_body(c, f));
            out.dot["factorisation.dot"] = emit_dot(out.report);
            return out;
        });
    }
    if (opt.op == "induced") {
        const auto& in = need_input(opt, "induced");
        return with_instance(name, opt.bounds, [&](const auto& c) {
            using C = std::decay_t<decltype(c)>;
            const auto f = parsing([&] { return parse_mor(c, in.at("morphism")); });
            const auto [s, t] = parsing([&] {
                const auto& a = c.dom(f);
                const auto& b = c.cod(f);
                auto ss = subquotient(c, a, parse_normal_sub(c, a, in.at("source").at("num")),
                                      parse_normal_sub(c, a, in.at("source").at("den")));
                auto tt = subquotient(c, b, parse_normal_sub(c, b, in.at("target").at("num")),
                                      parse_normal_sub(c, b, in.at("target").at("den")));
                return std::pair<Subquotient<C>, Subquotient<C>>{ss, tt};
            });
            Outcome out;
            const auto fz = induced_factorisation(c, f, s, t);
            json body = {{"instance", c.name()},
                         {"morphism", c.mor_json(f)},
                         {"source", subquotient_body(c, s)},
                         {"target", subquotient_body(c, t)},
                         {"induced", c.mor_json(regular_induction(c, f, s, t))},
                         {"kernel", c.mor_json(fz.ker)},
                         {"coimage", c.mor_json(fz.ncm)},
                         {"central", c.mor_json(fz.central)},
                         {"image", c.mor_json(fz.nim)},
                         {"cokernel", c.mor_json(fz.cok)},
                         {"agrees_with_direct", fz.agrees}};
            bool ok = fz.agrees;
            if (opt.audit) {
                const bool sq = audit_bicartesian(c, s) && audit_bicartesian(c, t);
                body["bicartesian_audit"] = sq ? "pass" : "fail";
                ok = ok && sq;
            }
            out.report = stamp("induced-factorisation", body);
            out.dot["source.dot"] = emit_dot(stamp("subquotient", body["source"]));
            out.dot["target.dot"] = emit_dot(stamp("subquotient", body["target"]));
            if (!ok) {
                out.status = kAuditFailure;
                out.message = "induced factorisation audit failed";
            }
            return out;
        });
    }
    throw SchemaError("factorise: --op is normal or induced");
}

// ---- check-exact ------------------------------------------------------------------------------

Outcome check_exact(const Options& opt) {
    const auto& in = need_input(opt, "sequence");
    return with_instance(instance_of(opt), opt.bounds, [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        const auto maps = parsing([&] {
            std::vector<typename C::Mor> ms;
            for (const auto& j : in.at("maps")) ms.push_back(parse_mor(c, j));
            if (ms.empty()) throw std::invalid_argument("a sequence needs at least one map");
            for (std::size_t i = 0; i + 1 < ms.size(); ++i)
                if (!(c.cod(ms[i]) == c.dom(ms[i + 1]))) throw std::invalid_argument("maps are not composable");
            return ms;
        });
        json per_map = json::array(), joints = json::array();
        bool exact_everywhere = true;
        for (const auto& f : maps)
            per_map.push_back({{"exact", is_exact_morphism(c, f)},
                               {"normal_mono", is_normal_mono(c, f)},
                               {"normal_epi", is_normal_epi(c, f)},
                               {"null", c.is_null(f)}});
        for (std::size_t i = 0; i + 1 < maps.size(); ++i) {
            const bool e = is_exact_at(c, maps[i], maps[i + 1]);
            exact_everywhere = exact_everywhere && e;
            joints.push_back({{"at", i + 1}, {"order_two", is_order_two(c, maps[i], maps[i + 1])}, {"exact", e}});
        }
        json body = {{"instance", c.name()}, {"maps", per_map}, {"joints", joints}, {"exact_sequence", exact_everywhere}};
        if (maps.size() == 2) body["short_exact"] = is_short_exact(c, maps[0], maps[1]);
        Outcome out;
        out.report = stamp("exactness", body);
        return out;
    });
}

// ---- nsb -------------------------------------------------------------------------------------

Outcome nsb(const Options& opt) {
    const auto name = instance_of(opt);
    if (opt.op.empty() || opt.op == "lattice") {
        const auto& in = need_input(opt, "object");
        return with_instance(name, opt.bounds, [&](const auto& c) {
            const auto a = parsing([&] { return parse_obj(c, in.at("object")); });
            const auto l = nsb_lattice(c, a);
            json labels = json::array();
            for (const auto& x : l.labels) labels.push_back(c.sub_json(a, x));
            json body = {{"instance", c.name()},
                         {"object", c.obj_json(a)},
                         {"lattice", lattice_json(l.lattice)},
                         {"labels", labels},
                         {"modular", is_modular_lattice(l.lattice)},
                         {"distributive", is_distributive_lattice(l.lattice)}};
            Outcome out;
            if (opt.audit) {
                const bool ok = nsb_operations_agree(c, a);
                body["operations_audit"] = ok ? "pass" : "fail";
                if (!ok) {
                    out.status = kAuditFailure;
                    out.message = "instance meets and joins disagree with the lattice order";
                }
            }
            out.report = stamp("nsb-lattice", body);
            out.dot["nsb.dot"] = emit_dot(out.report);
            return out;
        });
    }
    if (opt.op == "connection") {
        const auto& in = need_input(opt, "morphism");
        return with_instance(name, opt.bounds, [&](const auto& c) {
            const auto f = parsing([&] { return parse_mor(c, in.at("morphism")); });
            const auto k = nsb_connection(c, f);
            json body = {{"instance", c.name()},
                         {"morphism", c.mor_json(f)},
                         {"connection", connection_json(k)},
                         {"exact_connection", is_exact_connection(k)},
                         {"modular_connection", is_modular_connection(k)},
                         {"left_modular", is_left_modular(c, f)},
                         {"right_modular", is_right_modular(c, f)}};
            Outcome out;
            out.report = stamp("nsb-connection", body);
            return out;
        });
    }
    throw SchemaError("nsb: --op is lattice or connection");
}

// ---- psp ------------------------------------------------------------------------------------

Outcome psp(const Options& opt) {
    const auto& in = need_input(opt, "hom-set");
    return with_instance(instance_of(opt), opt.bounds, [&](const auto& c) {
        using C = std::decay_t<decltype(c)>;
        const auto [a, b] = parsing([&] {
            return std::pair<typename C::Obj, typename C::Obj>{parse_obj(c, in.at("dom")), parse_obj(c, in.at("cod"))};
        });
        Outcome out;
        std::optional<PspCat<C>> p;
        try {
            p.emplace(c, opt.audit);
        } catch (const std::invalid_argument& e) {
            out.report = stamp("psp", {{"instance", c.name()}, {"ex2_audit", "fail"}, {"error", e.what()}});
            out.status = kAuditFailure;
            out.message = e.what();
            return out;
        }
        const auto base = c.homs(a, b);
        const auto reps = p->homs(a, b);
        json classes = json::array();
        for (const auto& f : reps) {
            int members = 0;
            for (const auto& g : base) members += p->equal(f, g) ? 1 : 0;
            classes.push_back({{"representative", c.mor_json(f)},
                               {"members", members},
                               {"connection", connection_json(nsb_connection(c, f))}});
        }
        json body = {{"instance", p->name()},
                     {"dom", c.obj_json(a)},
                     {"cod", c.obj_json(b)},
                     {"base_morphisms", base.size()},
                     {"classes", classes}};
        if (opt.audit) body["ex2_audit"] = "pass";
        out.report = stamp("psp", body);
        return out;
    });
}

// ---- couples ------------------------------------------------------------------------------------

template <class C>
Couple<C> parse_couple(const C& c, const json& j) {
    Couple<C> x;
    const auto& objs = j.contains("objects") ? j.at("objects") : j;
    x.D = parse_obj(c, objs.at("D"));
    x.E = parse_obj(c, objs.at("E"));
    x.u = parse_mor(c, j.at("u"), x.D, x.D);
    x.v = parse_mor(c, j.at("v"), x.D, x.E);
    x.del = parse_mor(c, j.at("del"), x.E, x.D);
    return x;
}

template <class C>
BigradedCouple<C> parse_bigraded(const C& c, const json& j) {
    ObjParser<C> obj = [&c](const json& o) { return parse_obj(c, o); };
    MorParser<C> mor = [&c](const json& m, const typename C::Obj& a, const typename C::Obj& b) {
        return parse_mor(c, m, a, b);
    };
    return bigraded_from_json(c, j, obj, mor);
}

Outcome derive_couple_cmd(const Options& opt) {
    if (opt.input.is_null()) throw SchemaError("this command needs --input");
    expect_schema(opt.input);
    const auto kind = opt.input.value("kind", std::string());
    if (kind != "couple" && kind != "bigraded-couple") throw SchemaError("derive-couple reads a couple or a bigraded-couple");
    return with_instance(instance_of(opt), opt.bounds, [&](const auto& c) {
        Outcome out;
        json body = {{"instance", c.name()}};
        if (kind == "couple") {
            const auto x = parsing([&] { return parse_couple(c, opt.input.at("couple")); });
            const auto rep = check_exact_couple(c, x);
            body["check"] = rep.to_json();
            if (!rep.exact()) {
                out.report = stamp("derived-couple", body);
                out.status = kAuditFailure;
                out.message = "couple is not exact: clause (" + rep.first_failure() + ") fails";
                return out;
            }
            const int r = std::max(2, opt.r_max);
            json chain = json::array();
            for (int k = 2; k <= r; ++k) {
                const auto d = iterate(c, x, k, false);
                json step = {{"r", k}, {"couple", couple_json(c, d.couple)}};
                if (opt.audit) step["check"] = check_exact_couple(c, d.couple).to_json();
                chain.push_back(step);
            }
            body["derived"] = chain;
        } else {
            const auto x = parsing([&] { return parse_bigraded(c, opt.input.at("couple")); });
            const auto rep = check_bigraded_couple(c, x);
            body["check"] = rep.to_json();
            if (!rep.exact()) {
                out.report = stamp("derived-couple", body);
                out.status = kAuditFailure;
                out.message = "couple is not exact: clause (" + rep.first_failure() + ") fails";
                return out;
            }
            const auto d = derive_bigraded(c, x, false);
            body["derived"] = bigraded_json(c, d.couple);
            if (opt.audit) body["derived_check"] = check_bigraded_couple(c, d.couple).to_json();
        }
        out.report = stamp("derived-couple", body);
        return out;
    });
}

// ---- spectral ---------------------------------------------------------------------------------

template <class C>
json page_report(const C& c, const SpectralSequence<C>& ss, const SpectralPage<C>& pg) {
    json entries = json::array();
    for (const auto& [k, e] : pg.entries) {
        const auto& obj = realised(c, e.sub);
        entries.push_back({{"n", k.first},
                           {"p", k.second},
                           {"null", is_null_object(c, obj)},
                           {"label", is_null_object(c, obj) ? std::string("0") : short_label(c, obj)},
                           {"d_null", c.is_null(e.d)},
                           {"truncated", e.truncated}});
    }
    return stamp("page", {{"instance", c.name()}, {"r", pg.r}, {"window", window_json(ss.window)}, {"entries", entries}});
}

// Fills body with the check, pages and derivation audit; returns the pages unless the check failed.
template <class C>
std::optional<SpectralSequence<C>> run_pages(const C& c, const BigradedCouple<C>& x, const Options& opt, json& body,
                                             Outcome& out) {
    if (opt.audit) {
        const auto rep = check_bigraded_couple(c, x);
        body["check"] = rep.to_json();
        if (!rep.exact()) {
            out.status = kAuditFailure;
            out.message = "couple is not exact: clause (" + rep.first_failure() + ") fails";
            return std::nullopt;
        }
    }
    const Window* w = opt.window ? &*opt.window : nullptr;
    const auto ss = bigraded_pages(c, x, opt.r_max, w);
    body["pages"] = pages_json(c, ss);
    for (const auto& pg : ss.pages) out.dot["page_" + std::to_string(pg.r) + ".dot"] = emit_dot(page_report(c, ss, pg));
    bool ok = ss.audit.dd_null && ss.audit.homology && ss.audit.den_below_num;
    if (opt.audit) {
        const auto diffs = compare_pages_with_derivation(c, x, opt.r_max, w);
        body["derivation_audit"] = diffs;
        ok = ok && diffs.empty();
    }
    if (!ok && out.status == kOk) {
        out.status = kAuditFailure;
        out.message = "page audit failed";
    }
    return ss;
}

json dims_json(const std::map<Bidegree, int>& m) {
    json a = json::array();
    for (const auto& [k, d] : m) a.push_back({{"n", k.first}, {"p", k.second}, {"dim", d}});
    return a;
}

json filtered_run(const FilteredComplex& fc, const Options& opt, Outcome& out) {
    GpCat gp;
    const auto x = filtered_couple(fc);
    json body = {{"instance", "Gp"}, {"complex", filtered_complex_json(fc)}};
    if (const auto ss = run_pages(gp, x, opt, body, out)) {
        const auto got = page_dimensions(ss->pages.back());
        std::map<Bidegree, int> oracle, last;
        for (const auto& [k, d] : associated_graded_oracle(fc)) {
            const auto& w = ss->window;
            if (k.first < w.n_lo || k.first > w.n_hi || k.second < w.p_lo || k.second > w.p_hi) continue;
            oracle[k] = d;
            last[k] = got.count(k) ? got.at(k) : 0;
        }
        body["associated_graded"] = dims_json(oracle);
        body["last_page"] = dims_json(last);
        const bool match = ss->audit.stable_from > 0 && last == oracle;
        body["matches_oracle"] = match;
        if (!match && out.status == kOk) {
            out.status = kAuditFailure;
            out.message = "last page differs from the associated graded of homology";
        }
    }
    return body;
}

Outcome spectral(const Options& opt) {
    if (opt.input.is_null()) throw SchemaError("this command needs --input");
    expect_schema(opt.input);
    const auto kind = opt.input.value("kind", std::string());
    Outcome out;
    if (kind == "filtered-complex") {
        const auto fc = parsing([&] { return filtered_complex_from_json(opt.input.at("complex")); });
        out.report = stamp("spectral", filtered_run(fc, opt, out));
        return out;
    }
    if (kind == "filtered-complex-sample") {
        const auto [dim, steps, degree, count] = parsing([&] {
            const int d = opt.input.at("max_dim").get<int>(), s = opt.input.at("steps").get<int>();
            const int g = opt.input.at("max_degree").get<int>(), k = opt.input.at("count").get<int>();
            if (d < 1 || d > 8 || s < 1 || s > 4 || g < 0 || g > 3 || k < 1) throw std::invalid_argument("sample out of range");
            return std::array<int, 4>{d, s, g, k};
        });
        auto all = enumerate_filtered_complexes(dim, steps, degree, opt.seed);
        std::mt19937_64 rng(opt.seed);
        std::shuffle(all.begin(), all.end(), rng);
        all.resize(std::min<std::size_t>(all.size(), count));
        json runs = json::array();
        for (const auto& fc : all) {
            Options quiet = opt;
            quiet.window.reset();
            Outcome one;
            json b = filtered_run(fc, quiet, one);
            runs.push_back({{"complex", b["complex"]}, {"matches_oracle", b.value("matches_oracle", false)},
                            {"stable_from", b["pages"]["audit"]["stable_from"]}});
            if (one.status != kOk && out.status == kOk) {
                out.status = one.status;
                out.message = one.message;
            }
        }
        out.report = stamp("spectral-sample", {{"seed", opt.seed}, {"runs", runs}});
        return out;
    }
    if (kind == "bigraded-couple") {
        return with_instance(instance_of(opt), opt.bounds, [&](const auto& c) {
            Outcome o;
            const auto x = parsing([&] { return parse_bigraded(c, opt.input.at("couple")); });
            json body = {{"instance", c.name()}};
            run_pages(c, x, opt, body, o);
            o.report = stamp("spectral", body);
            return o;
        });
    }
    throw SchemaError("spectral reads a filtered-complex, filtered-complex-sample or bigraded-couple");
}

// ---- check-axioms -------------------------------------------------------------------------------

Outcome check_axioms_cmd(const Options& opt) {
    const auto name = instance_of(opt);
    return with_instance(name, opt.bounds, [&](const auto& c) {
        const auto reps = check_axioms(c, opt.bounds);
        json audits = json::array();
        bool ok = true;
        for (const auto& r : reps) {
            audits.push_back(r.to_json());
            ok = ok && r.pass;
        }
        Outcome out;
        out.report = stamp("axioms", {{"instance", c.name()},
                                      {"bounds",
                                       {{"sets", opt.bounds.max_set},
                                        {"groups", opt.bounds.max_group},
                                        {"mor_cap", opt.bounds.mor_cap},
                                        {"pair_stride", opt.bounds.pair_stride}}},
                                      {"audits", audits},
                                      {"pass", ok}});
        if (!ok) {
            out.status = kAuditFailure;
            for (const auto& r : reps)
                if (!r.pass) {
                    out.message = c.name() + " fails " + r.axiom;
                    break;
                }
        }
        return out;
    });
}

// ---- tower -----------------------------------------------------------------------------------

Tower parse_group_tower(const json& j) {
    std::vector<GroupRef> groups;
    for (const auto& g : j.at("groups")) groups.push_back(group_from_json(g));
    const auto phi = j.value("phi", std::vector<std::vector<int>>(groups.size()));
    std::vector<Pointed> sets;
    for (int n : j.value("sets", std::vector<int>{})) sets.push_back({n});
    const auto psi = j.value("psi", std::vector<std::vector<int>>{});
    return group_tower(groups, phi, sets, psi);
}

Outcome tower_cmd(const Options& opt) {
    if (opt.input.is_null()) throw SchemaError("this command needs --input");
    expect_schema(opt.input);
    const auto kind = opt.input.value("kind", std::string());
    const auto t = parsing([&] {
        if (kind == "tower") return tower_from_json(opt.input.at("tower"));
        if (kind == "group-tower") return parse_group_tower(opt.input);
        throw SchemaError("tower reads a tower or a group-tower");
    });
    Outcome out;
    json body = {{"tower", tower_json(t)}, {"path_connected", t.path_connected()}};
    if (t.path_connected()) {
        PairCat ngp(PairMode::Ngp, opt.bounds);
        json part;
        Outcome o;
        const auto x = tower_couple_ngp(t);
        part["couple"] = bigraded_json(ngp, x);
        run_pages(ngp, x, opt, part, o);
        body["ngp"] = part;
        for (auto& [k, v] : o.dot) out.dot["ngp_" + k] = v;
        if (o.status != kOk) {
            out.status = o.status;
            out.message = "Ngp: " + o.message;
        }
    }
    ActionCat nac(ActionMode::Nac, opt.bounds);
    json part;
    Outcome o;
    const auto x = tower_couple_nac(t);
    part["couple"] = bigraded_json(nac, x);
    run_pages(nac, x, opt, part, o);
    body["nac"] = part;
    for (auto& [k, v] : o.dot) out.dot["nac_" + k] = v;
    if (o.status != kOk && out.status == kOk) {
        out.status = o.status;
        out.message = "Nac: " + o.message;
    }
    out.report = stamp("tower", body);
    return out;
}

Outcome error_outcome(int status, const std::string& command, const std::string& what) {
    Outcome out;
    out.status = status;
    out.message = what;
    out.report = stamp("error", {{"command", command}, {"status", status}, {"error", what}});
    return out;
}

}  // namespace

Outcome run(const std::string& command, const Options& opt) {
    try {
        if (command == "factorise") return factorise(opt);
        if (command == "check-exact") return check_exact(opt);
        if (command == "nsb") return nsb(opt);
        if (command == "psp") return psp(opt);
        if (command == "derive-couple") return derive_couple_cmd(opt);
        if (command == "spectral") return spectral(opt);
        if (command == "check-axioms") return check_axioms_cmd(opt);
        if (command == "tower") return tower_cmd(opt);
        return error_outcome(kSchemaError, command, "unknown command");
    } catch (const SchemaError& e) {
        return error_outcome(kSchemaError, command, e.what());
    } catch (const json::exception& e) {
        return error_outcome(kSchemaError, command, e.what());
    } catch (const AuditFailure& e) {
        return error_outcome(kAuditFailure, command, e.what());
    } catch (const std::exception& e) {
        return error_outcome(kOperationError, command, e.what());
    }
}

void write_outcome(const std::string& command, const Outcome& out, const std::string& out_dir) {
    if (out_dir.empty()) {
        std::cout << dump(out.report);
        return;
    }
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream(fs::path(out_dir) / (command + ".json")) << dump(out.report);
    for (const auto& [name, text] : out.dot) std::ofstream(fs::path(out_dir) / name) << text;
}

// ---- DOT ---------------------------------------------------------------------------------------

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '\\';
        out += ch;
    }
    return out + "\"";
}

std::string label_text(const json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

std::string dot_square(const json& r) {
    const auto& l = r.at("labels");
    std::ostringstream o;
    o << "digraph subquotient {\n  rankdir=LR;\n";
    const char* names[] = {"M", "A", "M/N", "A/N"};
    for (int i = 0; i < 4; ++i) o << "  " << quote(names[i]) << " [label=" << quote(std::string(names[i]) + "\\n" + label_text(l.at(i))) << "];\n";
    o << "  \"M\" -> \"A\" [label=\"m\"];\n";
    o << "  \"M\" -> \"M/N\" [label=\"h\"];\n";
    o << "  \"A\" -> \"A/N\" [label=\"q\"];\n";
    o << "  \"M/N\" -> \"A/N\" [label=\"k\"];\n";
    o << "  { rank=same; \"M\"; \"A\"; }\n  { rank=same; \"M/N\"; \"A/N\"; }\n}\n";
    return o.str();
}

std::string dot_factorisation(const json& r) {
    const auto& l = r.at("labels");
    const char* names[] = {"Ker", "A", "Coim", "Im", "B", "Cok"};
    const char* arrows[] = {"ker", "ncm", "central", "nim", "cok"};
    std::ostringstream o;
    o << "digraph factorisation {\n  rankdir=LR;\n";
    for (int i = 0; i < 6; ++i) o << "  " << quote(names[i]) << " [label=" << quote(std::string(names[i]) + "\\n" + label_text(l.at(i))) << "];\n";
    for (int i = 0; i < 5; ++i) o << "  " << quote(names[i]) << " -> " << quote(names[i + 1]) << " [label=" << quote(arrows[i]) << "];\n";
    o << "}\n";
    return o.str();
}

std::string dot_page(const json& r) {
    const int rr = r.at("r").get<int>();
    const auto& w = r.at("window");
    const int n_lo = w.at("n").at(0), n_hi = w.at("n").at(1), p_lo = w.at("p").at(0), p_hi = w.at("p").at(1);
    auto node = [](int n, int p) { return quote("E_" + std::to_string(n) + "_" + std::to_string(p)); };
    std::ostringstream o;
    o << "digraph page_" << rr << " {\n  node [shape=box];\n";
    std::map<Bidegree, json> at;
    for (const auto& e : r.at("entries")) at[{e.at("n").get<int>(), e.at("p").get<int>()}] = e;
    for (const auto& [k, e] : at) {
        std::string text = "E" + std::to_string(rr) + "(" + std::to_string(k.first) + "," + std::to_string(k.second) + ")\\n" +
                           e.at("label").get<std::string>();
        if (e.value("truncated", false)) text += "\\ntruncated";
        o << "  " << node(k.first, k.second) << " [label=" << quote(text) << ", pos=" << quote(std::to_string(k.second) + "," + std::to_string(k.first) + "!");
        if (e.at("null").get<bool>()) o << ", style=dashed";
        o << "];\n";
    }
    for (const auto& [k, e] : at) {
        const int tn = k.first - 1, tp = k.second - rr;
        if (e.at("d_null").get<bool>() || tn < n_lo || tn > n_hi || tp < p_lo || tp > p_hi || !at.count({tn, tp})) continue;
        o << "  " << node(k.first, k.second) << " -> " << node(tn, tp) << " [label=" << quote("d" + std::to_string(rr))
          << ", bidegree=" << quote("(-1,-" + std::to_string(rr) + ")") << "];\n";
    }
    o << "}\n";
    return o.str();
}

}  // namespace

std::string dot_hasse(const FinLattice& l, const std::vector<std::string>& labels) {
    std::ostringstream o;
    o << "digraph hasse {\n  rankdir=BT;\n";
    auto name = [&](int i) { return quote(labels.empty() ? std::to_string(i) : labels.at(i)); };
    for (int i = 0; i < l.size; ++i) o << "  " << name(i) << ";\n";
    for (int a = 0; a < l.size; ++a)
        for (int b = 0; b < l.size; ++b) {
            if (a == b || !l.leq(a, b)) continue;
            bool cover = true;
            for (int c = 0; c < l.size && cover; ++c)
                if (c != a && c != b && l.leq(a, c) && l.leq(c, b)) cover = false;
            if (cover) o << "  " << name(a) << " -> " << name(b) << ";\n";
        }
    o << "}\n";
    return o.str();
}

std::string emit_dot(const json& report) {
    const auto kind = report.is_object() ? report.value("kind", std::string()) : std::string();
    if (kind == "lattice") return dot_hasse(lattice_from_json(report), {});
    if (kind == "nsb-lattice") {
        std::vector<std::string> labels;
        for (const auto& x : report.at("labels")) labels.push_back(label_text(x));
        return dot_hasse(lattice_from_json(report.at("lattice")), labels);
    }
    if (kind == "subquotient") return dot_square(report);
    if (kind == "factorisation") return dot_factorisation(report);
    if (kind == "page") return dot_page(report);
    throw std::invalid_argument("emit_dot: unsupported report kind \"" + kind + "\"");
}

}  // namespace homolog::io
