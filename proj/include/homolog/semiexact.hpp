#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace homolog {

using json = nlohmann::json;

// Enumeration limits shared by every concrete instance.
struct Bounds {
    int max_set = 4;     // points / set elements
    int max_group = 8;   // group order
    int mor_cap = 0;     // morphisms kept per hom-set in audits, 0 = all
    int pair_stride = 1; // audit every k-th ordered pair of objects
    int probe_cap = 16;  // test morphisms per probe object in universal-property audits
};

// The contract a concrete category has to meet. Normal subobjects are carried as
// canonical data (Sub) so that comparing them is plain equality.
template <class C>
concept SemiexactInstance =
    std::equality_comparable<typename C::Obj> && std::equality_comparable<typename C::Sub> &&
    requires(const C& c, const typename C::Obj& a, const typename C::Mor& f, const typename C::Sub& x) {
        { c.name() } -> std::convertible_to<std::string>;
        { c.dom(f) } -> std::convertible_to<typename C::Obj>;
        { c.cod(f) } -> std::convertible_to<typename C::Obj>;
        { c.compose(f, f) } -> std::same_as<typename C::Mor>;
        { c.identity(a) } -> std::same_as<typename C::Mor>;
        { c.is_null(f) } -> std::same_as<bool>;
        { c.equal(f, f) } -> std::same_as<bool>;
        { c.kernel(f) } -> std::same_as<typename C::Mor>;
        { c.cokernel(f) } -> std::same_as<typename C::Mor>;
        { c.lift(f, f) } -> std::same_as<std::optional<typename C::Mor>>;
        { c.descend(f, f) } -> std::same_as<std::optional<typename C::Mor>>;
        { c.is_iso(f) } -> std::same_as<bool>;
        { c.inverse(f) } -> std::same_as<typename C::Mor>;
        { c.kernel_sub(f) } -> std::same_as<typename C::Sub>;
        { c.image_sub(f) } -> std::same_as<typename C::Sub>;
        { c.sub_mono(a, x) } -> std::same_as<typename C::Mor>;
        { c.subobjects(a) } -> std::same_as<std::vector<typename C::Sub>>;
        { c.sub_leq(a, x, x) } -> std::same_as<bool>;
        { c.sub_meet(a, x, x) } -> std::same_as<typename C::Sub>;
        { c.sub_join(a, x, x) } -> std::same_as<typename C::Sub>;
        { c.sub_bottom(a) } -> std::same_as<typename C::Sub>;
        { c.sub_top(a) } -> std::same_as<typename C::Sub>;
        { c.direct_image(f, x) } -> std::same_as<typename C::Sub>;
        { c.inverse_image(f, x) } -> std::same_as<typename C::Sub>;
        { c.objects() } -> std::same_as<std::vector<typename C::Obj>>;
        { c.probes() } -> std::same_as<std::vector<typename C::Obj>>;
        { c.homs(a, a) } -> std::same_as<std::vector<typename C::Mor>>;
        { c.obj_json(a) } -> std::same_as<json>;
        { c.mor_json(f) } -> std::same_as<json>;
        { c.sub_json(a, x) } -> std::same_as<json>;
    };

template <class C>
struct Factorisation {
    typename C::Mor ker, ncm, central, nim, cok;
};

template <SemiexactInstance C>
Factorisation<C> normal_factorise(const C& c, const typename C::Mor& f) {
    auto k = c.kernel(f);
    auto p = c.cokernel(f);
    auto ncm = c.cokernel(k);
    auto nim = c.kernel(p);
    auto through = c.descend(ncm, f);
    if (!through) throw std::logic_error(std::string(c.name()) + ": morphism does not factor through its normal coimage");
    auto g = c.lift(nim, *through);
    if (!g) throw std::logic_error(std::string(c.name()) + ": morphism does not factor through its normal image");
    return {k, ncm, *g, nim, p};
}

template <SemiexactInstance C>
bool is_null_object(const C& c, const typename C::Obj& a) {
    return c.is_null(c.identity(a));
}

template <SemiexactInstance C>
bool is_exact_morphism(const C& c, const typename C::Mor& f) {
    return c.is_iso(normal_factorise(c, f).central);
}

template <SemiexactInstance C>
bool is_N_mono(const C& c, const typename C::Mor& f) {
    return c.is_null(c.kernel(f));
}

template <SemiexactInstance C>
bool is_N_epi(const C& c, const typename C::Mor& f) {
    return c.is_null(c.cokernel(f));
}

template <SemiexactInstance C>
bool is_normal_mono(const C& c, const typename C::Mor& m) {
    auto x = c.lift(c.kernel(c.cokernel(m)), m);
    return x && c.is_iso(*x);
}

template <SemiexactInstance C>
bool is_normal_epi(const C& c, const typename C::Mor& p) {
    auto x = c.descend(c.cokernel(c.kernel(p)), p);
    return x && c.is_iso(*x);
}

template <SemiexactInstance C>
void require_composable(const C& c, const typename C::Mor& f, const typename C::Mor& g) {
    if (!(c.cod(f) == c.dom(g))) throw std::invalid_argument("non-composable pair");
}

template <SemiexactInstance C>
bool is_order_two(const C& c, const typename C::Mor& f, const typename C::Mor& g) {
    require_composable(c, f, g);
    return c.sub_leq(c.cod(f), c.image_sub(f), c.kernel_sub(g));
}

template <SemiexactInstance C>
bool is_exact_at(const C& c, const typename C::Mor& f, const typename C::Mor& g) {
    require_composable(c, f, g);
    return c.image_sub(f) == c.kernel_sub(g);
}

// f = ker g and g = cok f, each up to a canonical isomorphism.
template <SemiexactInstance C>
bool is_short_exact(const C& c, const typename C::Mor& f, const typename C::Mor& g) {
    require_composable(c, f, g);
    auto x = c.lift(c.kernel(g), f);
    if (!x || !c.is_iso(*x)) return false;
    auto y = c.descend(c.cokernel(f), g);
    return y && c.is_iso(*y);
}

struct AuditReport {
    std::string axiom;
    std::string instance;
    bool pass = true;
    long long checked = 0;
    std::string scope;
    json counterexample;  // null when the audit passes
    json extra;

    json to_json() const {
        json j = {{"axiom", axiom},
                  {"instance", instance},
                  {"status", pass ? "pass" : "fail"},
                  {"checked", checked},
                  {"scope", scope},
                  {"note", "bounded certification: a pass is evidence on the enumerated fragment, not a proof"}};
        if (!pass) j["counterexample"] = counterexample;
        if (!extra.is_null()) j["details"] = extra;
        return j;
    }

    void fail(json witness) {
        if (pass) counterexample = std::move(witness);
        pass = false;
    }
};

template <class C>
struct Sampled {
    typename C::Mor f;
    int src;
    int dst;
};

// Deterministic selection: every pair_stride-th ordered object pair, at most mor_cap morphisms each
// (evenly spaced through the hom-set).
template <SemiexactInstance C>
std::vector<Sampled<C>> sample_morphisms(const C& c, const std::vector<typename C::Obj>& objs, const Bounds& b) {
    std::vector<Sampled<C>> out;
    const int n = static_cast<int>(objs.size());
    const int stride = std::max(1, b.pair_stride);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if ((i * n + j) % stride != 0) continue;
            auto hs = c.homs(objs[i], objs[j]);
            const size_t m = hs.size();
            if (b.mor_cap <= 0 || m <= static_cast<size_t>(b.mor_cap)) {
                for (auto& h : hs) out.push_back({std::move(h), i, j});
            } else {
                for (int k = 0; k < b.mor_cap; ++k) out.push_back({hs[k * m / b.mor_cap], i, j});
            }
        }
    return out;
}

inline std::string scope_text(const std::string& what, size_t objects, size_t morphisms) {
    return what + ": " + std::to_string(objects) + " objects, " + std::to_string(morphisms) + " morphisms";
}

template <SemiexactInstance C>
bool factors_through_null(const C& c, const typename C::Mor& f, const std::vector<typename C::Obj>& objs) {
    try {
        auto fac = normal_factorise(c, f);
        if (is_null_object(c, c.cod(fac.ncm))) return true;
    } catch (const std::exception&) {
    }
    for (const auto& n : objs) {
        if (!is_null_object(c, n)) continue;
        for (const auto& a : c.homs(c.dom(f), n))
            for (const auto& b : c.homs(n, c.cod(f)))
                if (c.equal(c.compose(b, a), f)) return true;
    }
    return false;
}

// (ex0): the null morphisms form a closed ideal, and nullness matches the kernel/cokernel test.
template <SemiexactInstance C>
AuditReport check_ex0(const C& c, const std::vector<typename C::Obj>& objs, const std::vector<Sampled<C>>& ms) {
    AuditReport r{"ex0", c.name()};
    r.scope = scope_text("closed null ideal", objs.size(), ms.size());
    std::vector<std::vector<size_t>> out_of(objs.size());
    for (size_t k = 0; k < ms.size(); ++k) out_of[ms[k].src].push_back(k);
    for (const auto& s : ms) {
        const auto& f = s.f;
        ++r.checked;
        const bool null = c.is_null(f);
        if (null && !factors_through_null(c, f, objs)) {
            r.fail({{"reason", "null morphism does not factor through a null identity"}, {"morphism", c.mor_json(f)}});
            continue;
        }
        try {
            const bool by_ker = c.kernel_sub(f) == c.sub_top(c.dom(f));
            const bool by_cok = c.image_sub(f) == c.sub_bottom(c.cod(f));
            if (by_ker != null || by_cok != null)
                r.fail({{"reason", "nullness disagrees with ker f = 1 / cok f = 1"}, {"morphism", c.mor_json(f)}});
        } catch (const std::exception& e) {
            r.fail({{"reason", std::string("kernel or cokernel missing: ") + e.what()}, {"morphism", c.mor_json(f)}});
            continue;
        }
        const auto& next = out_of[s.dst];
        for (size_t t = 0; t < next.size() && t < 4; ++t) {
            const auto& g = ms[next[t]].f;
            if ((null || c.is_null(g)) && !c.is_null(c.compose(g, f)))
                r.fail({{"reason", "composite with a null morphism is not null"},
                        {"first", c.mor_json(f)},
                        {"second", c.mor_json(g)}});
        }
    }
    return r;
}

// (ex1): kernels and cokernels exist and satisfy their universal property against probe maps.
template <SemiexactInstance C>
AuditReport check_ex1(const C& c, const std::vector<typename C::Obj>& objs, const std::vector<Sampled<C>>& ms,
                      const Bounds& b) {
    AuditReport r{"ex1", c.name()};
    r.scope = scope_text("kernel/cokernel universal property", objs.size(), ms.size());
    const auto probes = c.probes();
    auto capped = [&](std::vector<typename C::Mor> v) {
        if (b.probe_cap > 0 && v.size() > static_cast<size_t>(b.probe_cap)) v.resize(b.probe_cap);
        return v;
    };
    std::vector<std::vector<std::vector<typename C::Mor>>> into(objs.size()), outof(objs.size());
    for (size_t i = 0; i < objs.size(); ++i)
        for (const auto& z : probes) {
            into[i].push_back(capped(c.homs(z, objs[i])));
            outof[i].push_back(capped(c.homs(objs[i], z)));
        }
    for (const auto& s : ms) {
        const auto& f = s.f;
        ++r.checked;
        typename C::Mor k = c.identity(c.dom(f)), p = c.identity(c.cod(f));
        try {
            k = c.kernel(f);
            p = c.cokernel(f);
        } catch (const std::exception& e) {
            r.fail({{"reason", std::string("missing kernel or cokernel: ") + e.what()}, {"morphism", c.mor_json(f)}});
            continue;
        }
        if (!c.is_null(c.compose(f, k)) || !c.is_null(c.compose(p, f))) {
            r.fail({{"reason", "f ker f or cok f f is not null"}, {"morphism", c.mor_json(f)}});
            continue;
        }
        for (size_t z = 0; z < probes.size(); ++z) {
            // competing factorisations y with their composites, built on first use
            std::optional<std::vector<std::pair<typename C::Mor, typename C::Mor>>> via_k, via_p;
            for (const auto& a : into[s.src][z]) {
                if (!c.is_null(c.compose(f, a))) continue;
                auto x = c.lift(k, a);
                if (!x || !c.equal(c.compose(k, *x), a)) {
                    r.fail({{"reason", "test map killed by f does not factor through ker f"},
                            {"morphism", c.mor_json(f)},
                            {"test", c.mor_json(a)}});
                    continue;
                }
                if (!via_k) {
                    via_k.emplace();
                    for (auto& y : capped(c.homs(probes[z], c.dom(k)))) via_k->emplace_back(y, c.compose(k, y));
                }
                for (const auto& [y, ky] : *via_k)
                    if (c.equal(ky, a) && !c.equal(y, *x))
                        r.fail({{"reason", "factorisation through ker f is not unique"},
                                {"morphism", c.mor_json(f)},
                                {"test", c.mor_json(a)}});
            }
            for (const auto& a : outof[s.dst][z]) {
                if (!c.is_null(c.compose(a, f))) continue;
                auto x = c.descend(p, a);
                if (!x || !c.equal(c.compose(*x, p), a)) {
                    r.fail({{"reason", "test map killing f does not factor through cok f"},
                            {"morphism", c.mor_json(f)},
                            {"test", c.mor_json(a)}});
                    continue;
                }
                if (!via_p) {
                    via_p.emplace();
                    for (auto& y : capped(c.homs(c.cod(p), probes[z]))) via_p->emplace_back(y, c.compose(y, p));
                }
                for (const auto& [y, yp] : *via_p)
                    if (c.equal(yp, a) && !c.equal(y, *x))
                        r.fail({{"reason", "factorisation through cok f is not unique"},
                                {"morphism", c.mor_json(f)},
                                {"test", c.mor_json(a)}});
            }
        }
    }
    return r;
}

// (ex2): composites of normal monos (epis) are normal monos (epis).
template <SemiexactInstance C>
AuditReport check_ex2(const C& c, const std::vector<typename C::Obj>& objs) {
    AuditReport r{"ex2", c.name()};
    r.scope = scope_text("normal monos/epis closed under composition", objs.size(), 0);
    for (const auto& a : objs) {
        for (const auto& x : c.subobjects(a)) {
            auto m = c.sub_mono(a, x);
            for (const auto& y : c.subobjects(c.dom(m))) {
                ++r.checked;
                auto mm = c.compose(m, c.sub_mono(c.dom(m), y));
                if (!is_normal_mono(c, mm))
                    r.fail({{"reason", "composite of normal monos is not a normal mono"},
                            {"object", c.obj_json(a)},
                            {"outer", c.sub_json(a, x)},
                            {"inner", c.sub_json(c.dom(m), y)}});
            }
            auto p = c.cokernel(m);
            for (const auto& y : c.subobjects(c.cod(p))) {
                ++r.checked;
                auto pp = c.compose(c.cokernel(c.sub_mono(c.cod(p), y)), p);
                if (!is_normal_epi(c, pp))
                    r.fail({{"reason", "composite of normal epis is not a normal epi"},
                            {"object", c.obj_json(a)},
                            {"first", c.sub_json(a, x)},
                            {"second", c.sub_json(c.cod(p), y)}});
            }
        }
    }
    return r;
}

// (ex3): for m a normal mono and q a normal epi with m >= ker q, qm is exact.
template <SemiexactInstance C>
AuditReport check_ex3(const C& c, const std::vector<typename C::Obj>& objs) {
    AuditReport r{"ex3", c.name()};
    r.scope = scope_text("subquotient axiom", objs.size(), 0);
    for (const auto& a : objs) {
        const auto subs = c.subobjects(a);
        for (const auto& num : subs) {
            auto m = c.sub_mono(a, num);
            for (const auto& den : subs) {
                if (!c.sub_leq(a, den, num)) continue;
                ++r.checked;
                auto q = c.cokernel(c.sub_mono(a, den));
                if (!is_exact_morphism(c, c.compose(q, m)))
                    r.fail({{"reason", "qm is not exact"},
                            {"object", c.obj_json(a)},
                            {"num", c.sub_json(a, num)},
                            {"den", c.sub_json(a, den)}});
            }
        }
    }
    return r;
}

template <SemiexactInstance C>
std::vector<AuditReport> check_axioms(const C& c, const Bounds& b) {
    const auto objs = c.objects();
    const auto ms = sample_morphisms(c, objs, b);
    std::vector<AuditReport> out;
    out.push_back(check_ex0(c, objs, ms));
    out.push_back(check_ex1(c, objs, ms, b));
    out.push_back(check_ex2(c, objs));
    out.push_back(check_ex3(c, objs));
    return out;
}

template <class A, class B>
struct Functor {
    std::string name;
    const A* src;
    const B* dst;
    std::function<typename B::Obj(const typename A::Obj&)> on_obj;
    std::function<typename B::Mor(const typename A::Mor&)> on_mor;
};

enum class ExactMode { N, Left, Right, Short, Long, Exact };

inline std::string mode_name(ExactMode m) {
    switch (m) {
        case ExactMode::N: return "N";
        case ExactMode::Left: return "left";
        case ExactMode::Right: return "right";
        case ExactMode::Short: return "short";
        case ExactMode::Long: return "long";
        case ExactMode::Exact: return "exact";
    }
    return "?";
}

namespace detail {

template <SemiexactInstance A, SemiexactInstance B>
void functor_check(const Functor<A, B>& F, ExactMode mode, const std::vector<typename A::Obj>& objs,
                   const std::vector<typename A::Mor>& ms, AuditReport& r) {
    const A& a = *F.src;
    const B& b = *F.dst;
    switch (mode) {
        case ExactMode::N:
            for (const auto& f : ms) {
                ++r.checked;
                if (a.is_null(f) && !b.is_null(F.on_mor(f)))
                    r.fail({{"reason", "null morphism not preserved"}, {"morphism", a.mor_json(f)}});
            }
            break;
        case ExactMode::Left:
            for (const auto& f : ms) {
                ++r.checked;
                auto x = b.lift(b.kernel(F.on_mor(f)), F.on_mor(a.kernel(f)));
                if (!x || !b.is_iso(*x)) r.fail({{"reason", "kernel not preserved"}, {"morphism", a.mor_json(f)}});
            }
            break;
        case ExactMode::Right:
            for (const auto& f : ms) {
                ++r.checked;
                auto x = b.descend(b.cokernel(F.on_mor(f)), F.on_mor(a.cokernel(f)));
                if (!x || !b.is_iso(*x)) r.fail({{"reason", "cokernel not preserved"}, {"morphism", a.mor_json(f)}});
            }
            break;
        case ExactMode::Short:
            for (const auto& o : objs)
                for (const auto& x : a.subobjects(o)) {
                    ++r.checked;
                    auto m = a.sub_mono(o, x);
                    auto p = a.cokernel(m);
                    if (!is_short_exact(b, F.on_mor(m), F.on_mor(p)))
                        r.fail({{"reason", "short exact sequence not preserved"},
                                {"object", a.obj_json(o)},
                                {"sub", a.sub_json(o, x)}});
                }
            break;
        case ExactMode::Long: {
            auto test = [&](const typename A::Mor& f, const typename A::Mor& g) {
                ++r.checked;
                if (!is_exact_at(a, f, g)) return;
                if (!is_exact_at(b, F.on_mor(f), F.on_mor(g)))
                    r.fail({{"reason", "exact sequence not preserved"}, {"first", a.mor_json(f)}, {"second", a.mor_json(g)}});
            };
            for (const auto& f : ms) {
                test(a.kernel(f), f);
                test(f, a.cokernel(f));
            }
            for (size_t i = 0; i < ms.size(); ++i) {
                int partners = 0;
                for (size_t j = 0; j < ms.size() && partners < 4; ++j)
                    if (a.cod(ms[i]) == a.dom(ms[j])) {
                        ++partners;
                        test(ms[i], ms[j]);
                    }
            }
            break;
        }
        case ExactMode::Exact:
            functor_check(F, ExactMode::Left, objs, ms, r);
            functor_check(F, ExactMode::Right, objs, ms, r);
            break;
    }
}

}  // namespace detail

template <SemiexactInstance A, SemiexactInstance B>
AuditReport check_functor_exactness(const Functor<A, B>& F, ExactMode mode, const std::vector<typename A::Obj>& objs,
                                    const std::vector<typename A::Mor>& ms) {
    AuditReport r{"functor " + F.name + " " + mode_name(mode) + "-exact", F.src->name() + "->" + F.dst->name()};
    r.scope = scope_text("functor preservation", objs.size(), ms.size());
    detail::functor_check(F, mode, objs, ms, r);
    if (mode == ExactMode::Exact) {
        AuditReport s{"", ""}, l{"", ""};
        detail::functor_check(F, ExactMode::Short, objs, ms, s);
        detail::functor_check(F, ExactMode::Long, objs, ms, l);
        const bool meta = r.pass == (s.pass && l.pass);
        r.extra = {{"short", s.pass}, {"long", l.pass}, {"exact_iff_short_and_long", meta}};
        if (!meta) r.fail({{"reason", "exact disagrees with short and long exactness on this fragment"}});
    }
    return r;
}

// The ordered set of integers in [lo, hi] as a category, with the ideal of strict inequalities.
// Kernels exist away from the lower end but the ideal is not closed.
class OrderedInterval {
public:
    using Obj = int;
    struct Mor {
        int from, to;
    };
    using Sub = int;

    OrderedInterval(int lo, int hi) : lo_(lo), hi_(hi) {}
    std::string name() const { return "OrderedInterval"; }
    Obj dom(const Mor& f) const { return f.from; }
    Obj cod(const Mor& f) const { return f.to; }
    Mor compose(const Mor& g, const Mor& f) const { return {f.from, g.to}; }
    Mor identity(Obj a) const { return {a, a}; }
    bool is_null(const Mor& f) const { return f.from < f.to; }
    bool equal(const Mor& f, const Mor& g) const { return f.from == g.from && f.to == g.to; }
    Mor kernel(const Mor& f) const {
        if (f.from < f.to) return identity(f.from);
        if (f.from - 1 < lo_) throw std::out_of_range("kernel leaves the interval");
        return {f.from - 1, f.from};
    }
    Mor cokernel(const Mor& f) const {
        if (f.from < f.to) return identity(f.to);
        if (f.to + 1 > hi_) throw std::out_of_range("cokernel leaves the interval");
        return {f.to, f.to + 1};
    }
    std::optional<Mor> lift(const Mor& m, const Mor& a) const {
        if (a.from <= m.from) return Mor{a.from, m.from};
        return std::nullopt;
    }
    std::optional<Mor> descend(const Mor& p, const Mor& a) const {
        if (p.to <= a.to) return Mor{p.to, a.to};
        return std::nullopt;
    }
    bool is_iso(const Mor& f) const { return f.from == f.to; }
    Mor inverse(const Mor& f) const { return f; }
    Sub kernel_sub(const Mor& f) const { return kernel(f).from; }
    Sub image_sub(const Mor& f) const { return kernel(cokernel(f)).from; }
    Mor sub_mono(Obj a, Sub x) const { return {x, a}; }
    std::vector<Sub> subobjects(Obj a) const {
        std::vector<Sub> v;
        for (int x = lo_; x <= a; ++x) v.push_back(x);
        return v;
    }
    bool sub_leq(Obj, Sub x, Sub y) const { return x <= y; }
    Sub sub_meet(Obj, Sub x, Sub y) const { return std::min(x, y); }
    Sub sub_join(Obj, Sub x, Sub y) const { return std::max(x, y); }
    Sub sub_bottom(Obj) const { return lo_; }
    Sub sub_top(Obj a) const { return a; }
    Sub direct_image(const Mor& f, Sub x) const { return image_sub(compose(f, sub_mono(f.from, x))); }
    Sub inverse_image(const Mor& f, Sub y) const { return kernel_sub(compose(cokernel(sub_mono(f.to, y)), f)); }
    std::vector<Obj> objects() const {
        std::vector<Obj> v;
        for (int x = lo_; x <= hi_; ++x) v.push_back(x);
        return v;
    }
    std::vector<Obj> probes() const { return {lo_}; }
    std::vector<Mor> homs(Obj a, Obj b) const {
        if (a <= b) return {Mor{a, b}};
        return {};
    }
    json obj_json(Obj a) const { return a; }
    json mor_json(const Mor& f) const { return {{"from", f.from}, {"to", f.to}}; }
    json sub_json(Obj, Sub x) const { return x; }

private:
    int lo_, hi_;
};

}  // namespace homolog
