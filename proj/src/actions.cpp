#include "homolog/actions.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "homolog/nsb.hpp"

namespace homolog {

namespace {

std::vector<int> iota_map(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> mask_members(unsigned m) {
    std::vector<int> out;
    for (int i = 0; m >> i; ++i)
        if ((m >> i) & 1u) out.push_back(i);
    return out;
}

Subgroup subgroup_of(std::vector<int> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return Subgroup{std::move(xs)};
}

const GroupRef& trivial_group() {
    static const GroupRef g = share(FinGroup{});
    return g;
}

GroupPair as_pair(const Action& a) { return {a.group, a.base}; }

// Sym(n) written so that p + q means "first p, then q"; that makes a right action a homomorphism.
struct Symmetric {
    FinGroup group;
    std::vector<std::vector<int>> perms;
};

Symmetric symmetric(int n) {
    Symmetric out;
    std::vector<int> p = iota_map(n);
    do out.perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < out.perms.size(); ++i) index[out.perms[i]] = static_cast<int>(i);
    const size_t m = out.perms.size();
    Table t(m, std::vector<int>(m));
    for (size_t i = 0; i < m; ++i)
        for (size_t j = 0; j < m; ++j) {
            std::vector<int> r(n);
            for (int x = 0; x < n; ++x) r[x] = out.perms[j][out.perms[i][x]];
            t[i][j] = index[r];
        }
    out.group = FinGroup::from_table(t);
    return out;
}

bool all_in(const Subgroup& h, const std::vector<int>& xs) {
    for (int x : xs)
        if (!h.contains(x)) return false;
    return true;
}

}  // namespace

bool is_action(int n, const FinGroup& g, const std::vector<int>& act) {
    if (n < 1 || act.size() != static_cast<size_t>(n) * g.size) return false;
    for (int v : act)
        if (v < 0 || v >= n) return false;
    auto at = [&](int x, int s) { return act[static_cast<size_t>(x) * g.size + s]; };
    for (int x = 0; x < n; ++x) {
        if (at(x, 0) != x) return false;
        for (int s = 0; s < g.size; ++s)
            for (int t = 0; t < g.size; ++t)
                if (at(at(x, s), t) != at(x, g.add(s, t))) return false;
    }
    return true;
}

Action make_action(int n, const GroupRef& g, std::vector<int> act) {
    if (!is_action(n, *g, act)) throw std::invalid_argument("not a right action on a pointed set");
    Action a{n, g, std::move(act), {}};
    a.base = fixer(a, 0);
    return a;
}

Subgroup fixer(const Action& a, int x) {
    std::vector<int> out;
    for (int s = 0; s < a.order(); ++s)
        if (a.at(x, s) == x) out.push_back(s);
    return Subgroup{out};
}

Subgroup stabiliser(const Action& a, unsigned mask) {
    std::vector<int> out;
    const auto xs = mask_members(mask);
    for (int s = 0; s < a.order(); ++s) {
        bool ok = true;
        for (int x : xs) ok = ok && ((mask >> a.at(x, s)) & 1u);
        if (ok) out.push_back(s);
    }
    return Subgroup{out};
}

std::vector<int> orbits(const Action& a, int* count) {
    std::vector<int> id(a.n, -1);
    int k = 0;
    for (int x = 0; x < a.n; ++x) {
        if (id[x] >= 0) continue;
        for (int s = 0; s < a.order(); ++s) id[a.at(x, s)] = k;
        ++k;
    }
    if (count) *count = k;
    return id;
}

unsigned orbit_mask(const Action& a, int x) {
    unsigned m = 0;
    for (int s = 0; s < a.order(); ++s) m |= 1u << a.at(x, s);
    return m;
}

NormalCheck is_normal_subaction(const Action& a, unsigned mask) {
    if (!(mask & 1u) || (mask & ~a.all_points())) return {};
    const auto xs = mask_members(mask);
    const auto stab = stabiliser(a, mask);
    std::vector<int> linking;
    for (int s = 0; s < a.order(); ++s) {
        bool links = false;
        for (int x : xs) links = links || ((mask >> a.at(x, s)) & 1u);
        if (links) linking.push_back(s);
    }
    // (a') and (b'): linking operators preserve X1, and then they are exactly the stabiliser.
    const bool primed = all_in(stab, linking);
    // (a) and (b): some subgroup containing the linking operators keeps X1 stable.
    const Subgroup spanned = span(*a.group, linking);
    const bool plain = subset_of(spanned, stab);
    // (a'') and (b''): x + s in X1 iff s in S1, which forces S1 = {s | 0 + s in X1}.
    std::vector<int> from_zero;
    for (int s = 0; s < a.order(); ++s)
        if ((mask >> a.at(0, s)) & 1u) from_zero.push_back(s);
    bool doubled = is_subgroup(*a.group, from_zero);
    const Subgroup s2{from_zero};
    for (int x : xs)
        for (int s = 0; s < a.order() && doubled; ++s)
            doubled = (((mask >> a.at(x, s)) & 1u) != 0) == s2.contains(s);
    if (primed != plain || primed != doubled)
        throw std::logic_error("normal subaction: the three characterisations disagree");
    if (!primed) return {};
    if (Subgroup{linking} != stab || spanned != stab || s2 != stab)
        throw std::logic_error("normal subaction: operator group descriptions disagree");
    return {true, stab};
}

std::vector<int> generated_congruence(const Action& a, unsigned mask) {
    std::vector<int> parent = iota_map(a.n);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    auto unite = [&](int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (x > y) std::swap(x, y);
        parent[y] = x;
        return true;
    };
    const auto xs = mask_members(mask);
    for (size_t i = 1; i < xs.size(); ++i) unite(xs[0], xs[i]);
    for (bool changed = true; changed;) {
        changed = false;
        for (int x = 0; x < a.n; ++x) {
            const int r = find(x);
            if (r == x) continue;
            for (int s = 0; s < a.order(); ++s) changed = unite(a.at(x, s), a.at(r, s)) || changed;
        }
    }
    std::vector<int> label(a.n);
    for (int x = 0; x < a.n; ++x) label[x] = find(x);
    return label;
}

std::vector<int> closed_form_congruence(const Action& a, unsigned mask) {
    const auto check = is_normal_subaction(a, mask);
    if (!check.normal) throw std::invalid_argument("closed form needs a normal subaction");
    const FinGroup& g = *a.group;
    const auto xs = mask_members(mask);
    std::vector<int> label = iota_map(a.n);
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < x && label[x] == x; ++y)
            for (int x1 : xs)
                for (int s = 0; s < g.size && label[x] == x; ++s) {
                    if (a.at(x1, s) != x) continue;
                    for (int y1 : xs)
                        for (int t = 0; t < g.size; ++t)
                            if (a.at(y1, t) == y && check.ops.contains(g.sub(s, t))) {
                                label[x] = y;
                                break;
                            }
                }
    return label;
}

unsigned zero_class(const Action& a, unsigned mask) {
    const auto label = generated_congruence(a, mask);
    unsigned m = 0;
    for (int x = 0; x < a.n; ++x)
        if (label[x] == label[0]) m |= 1u << x;
    return m;
}

ActionMap quotient_projection(const Action& a, unsigned mask) {
    const auto label = generated_congruence(a, mask);
    std::vector<int> index(a.n, -1);
    int k = 0;
    for (int x = 0; x < a.n; ++x)
        if (label[x] == x) index[x] = k++;
    std::vector<int> points(a.n);
    for (int x = 0; x < a.n; ++x) points[x] = index[label[x]];
    std::vector<int> act(static_cast<size_t>(k) * a.order());
    for (int x = 0; x < a.n; ++x)
        for (int s = 0; s < a.order(); ++s) act[static_cast<size_t>(points[x]) * a.order() + s] = points[a.at(x, s)];
    Action q = make_action(k, a.group, std::move(act));
    return {a, std::move(q), std::move(points), iota_map(a.order())};
}

bool kernel_operator_descriptions_agree(const ActionMap& f) {
    const unsigned x1 = preimage_mask(f.points, 1u);
    const FinGroup& s = *f.dom.group;
    std::vector<int> d[5];
    const Subgroup t0 = fixer(f.cod, 0);
    for (int x = 0; x < s.size; ++x) {
        if (t0.contains(f.ops[x])) d[0].push_back(x);
        if (f.cod.at(0, f.ops[x]) == 0) d[1].push_back(x);
        unsigned moved = 0;
        bool links = false;
        for (int p : mask_members(x1)) {
            moved |= 1u << f.dom.at(p, x);
            links = links || ((x1 >> f.dom.at(p, x)) & 1u);
        }
        if ((moved & ~x1) == 0) d[2].push_back(x);
        if (moved == x1) d[3].push_back(x);
        if (links) d[4].push_back(x);
    }
    for (int i = 1; i < 5; ++i)
        if (d[i] != d[0]) return false;
    return true;
}

bool consistent(const Action& a, const Action& b, const std::vector<int>& points, const std::vector<int>& ops) {
    if (points.size() != static_cast<size_t>(a.n) || ops.size() != static_cast<size_t>(a.order())) return false;
    if (points[0] != 0) return false;
    for (int v : points)
        if (v < 0 || v >= b.n) return false;
    for (int v : ops)
        if (v < 0 || v >= b.order()) return false;
    for (int x = 0; x < a.n; ++x)
        for (int s = 0; s < a.order(); ++s)
            if (points[a.at(x, s)] != b.at(points[x], ops[s])) return false;
    return true;
}

void visit_point_maps(const Action& a, const Action& b, const std::vector<int>& ops,
                      const std::function<bool(const std::vector<int>&)>& visit) {
    int count = 0;
    const auto orbit = orbits(a, &count);
    std::vector<int> rep(count, -1);
    for (int x = a.n - 1; x >= 0; --x) rep[orbit[x]] = x;
    // For each orbit, the assignments on it that are consistent with ops.
    std::vector<std::vector<std::vector<int>>> options(count);
    for (int o = 0; o < count; ++o) {
        const int r = rep[o];
        for (int y = 0; y < (o == 0 ? 1 : b.n); ++y) {
            std::vector<int> tmp(a.n, -1);
            bool ok = true;
            for (int s = 0; s < a.order() && ok; ++s) {
                const int x = a.at(r, s);
                const int v = b.at(y, ops[s]);
                if (tmp[x] < 0) tmp[x] = v;
                else ok = tmp[x] == v;
            }
            for (int x = 0; x < a.n && ok; ++x)
                if (orbit[x] == o)
                    for (int s = 0; s < a.order() && ok; ++s) ok = tmp[a.at(x, s)] == b.at(tmp[x], ops[s]);
            if (ok && (o != 0 || tmp[0] == 0)) options[o].push_back(std::move(tmp));
        }
        if (options[o].empty()) return;
    }
    std::vector<int> points(a.n, 0);
    bool stop = false;
    std::function<void(int)> go = [&](int o) {
        if (stop) return;
        if (o == count) {
            if (!visit(points)) stop = true;
            return;
        }
        for (const auto& opt : options[o]) {
            for (int x = 0; x < a.n; ++x)
                if (orbit[x] == o) points[x] = opt[x];
            go(o + 1);
            if (stop) return;
        }
    };
    go(0);
}

std::vector<Action> small_actions(int max_set, int max_group) {
    std::vector<Action> out;
    const auto groups = small_groups(max_group);
    for (int n = 1; n <= max_set; ++n) {
        const Symmetric sym = symmetric(n);
        std::vector<std::vector<int>> relabel;  // permutations fixing 0
        for (const auto& p : sym.perms)
            if (p[0] == 0) relabel.push_back(p);
        for (const auto& g : groups) {
            const FinGroup& s = *g.group;
            std::vector<std::vector<int>> autos;
            for (auto& h : all_homs(s, s)) {
                std::vector<int> sorted = h;
                std::sort(sorted.begin(), sorted.end());
                if (sorted == iota_map(s.size)) autos.push_back(std::move(h));
            }
            std::set<std::vector<int>> seen;
            for (const auto& rho : all_homs(s, sym.group)) {
                std::vector<int> act(static_cast<size_t>(n) * s.size);
                for (int x = 0; x < n; ++x)
                    for (int e = 0; e < s.size; ++e) act[static_cast<size_t>(x) * s.size + e] = sym.perms[rho[e]][x];
                std::vector<int> best;
                std::vector<int> cand(act.size());
                for (const auto& pi : relabel)
                    for (const auto& al : autos) {
                        for (int x = 0; x < n; ++x)
                            for (int e = 0; e < s.size; ++e)
                                cand[static_cast<size_t>(pi[x]) * s.size + al[e]] = pi[act[static_cast<size_t>(x) * s.size + e]];
                        if (best.empty() || cand < best) best = cand;
                    }
                if (seen.insert(best).second) out.push_back(make_action(n, g.group, best));
            }
        }
    }
    return out;
}

// ---- the categories ---------------------------------------------------------------

std::string ActionCat::name() const {
    switch (mode_) {
        case ActionMode::Act: return "Act";
        case ActionMode::ActPrime: return "Act'";
        case ActionMode::Nac: return "Nac";
    }
    return "?";
}

bool ActionCat::ops_ok(const Action& a, const Action& b, const std::vector<int>& ops) const {
    if (mode_ == ActionMode::Act) return is_hom(*a.group, *b.group, ops);
    return is_quasi_hom(ops, as_pair(a), as_pair(b));
}

bool ActionCat::valid(const Mor& f) const { return consistent(f.dom, f.cod, f.points, f.ops) && ops_ok(f.dom, f.cod, f.ops); }

ActionMap ActionCat::compose(const Mor& g, const Mor& f) const {
    if (!(f.cod == g.dom)) throw std::invalid_argument("non-composable pair");
    Mor h{f.dom, g.cod, std::vector<int>(f.points.size()), std::vector<int>(f.ops.size())};
    for (size_t x = 0; x < f.points.size(); ++x) h.points[x] = g.points[f.points[x]];
    for (size_t s = 0; s < f.ops.size(); ++s) h.ops[s] = g.ops[f.ops[s]];
    return h;
}

ActionMap ActionCat::identity(const Obj& a) const { return {a, a, iota_map(a.n), iota_map(a.order())}; }

bool ActionCat::is_null(const Mor& f) const {
    return std::all_of(f.points.begin(), f.points.end(), [](int y) { return y == 0; });
}

bool ActionCat::equal(const Mor& f, const Mor& g) const {
    if (!(f.dom == g.dom) || !(f.cod == g.cod) || f.points != g.points) return false;
    if (mode_ != ActionMode::Nac) return f.ops == g.ops;
    const FinGroup& t = *f.cod.group;
    for (size_t s = 0; s < f.ops.size(); ++s)
        if (!f.cod.base.contains(t.sub(f.ops[s], g.ops[s]))) return false;
    return true;
}

unsigned ActionCat::kernel_sub(const Mor& f) const { return preimage_mask(f.points, 1u); }

unsigned ActionCat::image_sub(const Mor& f) const {
    return zero_class(f.cod, image_mask(f.points, f.dom.all_points()) | 1u);
}

ActionMap ActionCat::cokernel(const Mor& f) const {
    return quotient_projection(f.cod, image_mask(f.points, f.dom.all_points()) | 1u);
}

bool ActionCat::is_sub(const Obj& a, Sub x) const {
    const auto c = is_normal_subaction(a, x);
    return c.normal && subset_of(a.base, c.ops);
}

ActionMap ActionCat::sub_mono(const Obj& a, Sub x) const {
    const auto c = is_normal_subaction(a, x);
    if (!c.normal || !subset_of(a.base, c.ops)) throw std::invalid_argument("not a normal subaction");
    std::vector<int> embed;
    auto g = share(subgroup_as_group(*a.group, c.ops, &embed));
    const auto pts = mask_members(x);
    std::vector<int> pos(a.n, -1);
    for (size_t i = 0; i < pts.size(); ++i) pos[pts[i]] = static_cast<int>(i);
    std::vector<int> act(pts.size() * embed.size());
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < embed.size(); ++j) act[i * embed.size() + j] = pos[a.at(pts[i], embed[j])];
    std::vector<int> base;
    for (size_t j = 0; j < embed.size(); ++j)
        if (a.base.contains(embed[j])) base.push_back(static_cast<int>(j));
    Action d{static_cast<int>(pts.size()), g, std::move(act), Subgroup{base}};
    return {std::move(d), a, pts, std::move(embed)};
}

std::vector<unsigned> ActionCat::subobjects(const Obj& a) const {
    std::vector<unsigned> out;
    for (unsigned m = 1; m <= a.all_points(); m += 2)
        if (is_sub(a, m)) out.push_back(m);
    return out;
}

unsigned ActionCat::direct_image(const Mor& f, Sub x) const { return zero_class(f.cod, image_mask(f.points, x) | 1u); }

unsigned ActionCat::inverse_image(const Mor& f, Sub y) const { return preimage_mask(f.points, y); }

std::optional<ActionMap> ActionCat::solve(const Action& a, const Action& b, const std::vector<int>& points,
                                          const std::vector<std::vector<int>>& choices,
                                          const std::function<bool(const Mor&)>& accept) const {
    std::optional<Mor> found;
    auto test = [&](const std::vector<int>& ops) {
        Mor m{a, b, points, ops};
        if (consistent(a, b, points, ops) && accept(m)) {
            found = std::move(m);
            return true;
        }
        return false;
    };
    if (mode_ == ActionMode::Act) {
        const bool fixed = std::all_of(choices.begin(), choices.end(), [](const auto& c) { return c.size() == 1; });
        if (fixed) {
            std::vector<int> ops;
            for (const auto& c : choices) ops.push_back(c.front());
            if (is_hom(*a.group, *b.group, ops)) test(ops);
            return found;
        }
        for (const auto& h : all_homs(*a.group, *b.group)) {
            bool inside = true;
            for (size_t s = 0; s < h.size() && inside; ++s)
                inside = std::find(choices[s].begin(), choices[s].end(), h[s]) != choices[s].end();
            if (inside && test(h)) break;
        }
        return found;
    }
    visit_quasi_homs(as_pair(a), as_pair(b), choices,
                     [&](const std::vector<int>& ops) { return test(ops) ? SearchStep::Stop : SearchStep::Reject; });
    return found;
}

std::optional<ActionMap> ActionCat::lift(const Mor& m, const Mor& a) const {
    const Action& z = a.dom;
    const Action& mid = m.dom;
    std::vector<int> points(z.n);
    for (int p = 0; p < z.n; ++p) {
        auto it = std::find(m.points.begin(), m.points.end(), a.points[p]);
        if (it == m.points.end()) return std::nullopt;
        points[p] = static_cast<int>(it - m.points.begin());
    }
    const FinGroup& s = *m.cod.group;
    std::vector<std::vector<int>> choices(z.order());
    for (int e = 0; e < z.order(); ++e) {
        for (int j = 0; j < mid.order(); ++j)
            if (m.ops[j] == a.ops[e]) choices[e].insert(choices[e].begin(), j);
            else if (mode_ == ActionMode::Nac && m.cod.base.contains(s.sub(m.ops[j], a.ops[e]))) choices[e].push_back(j);
        if (choices[e].empty()) return std::nullopt;
    }
    return solve(z, mid, points, choices, [&](const Mor& x) { return equal(compose(m, x), a); });
}

std::optional<ActionMap> ActionCat::descend(const Mor& p, const Mor& a) const {
    const Action& q = p.cod;
    const Action& z = a.cod;
    std::vector<int> points(q.n, -1);
    for (int y = 0; y < p.dom.n; ++y) {
        int& v = points[p.points[y]];
        if (v < 0) v = a.points[y];
        else if (v != a.points[y]) return std::nullopt;
    }
    if (std::find(points.begin(), points.end(), -1) != points.end()) return std::nullopt;
    const FinGroup& zg = *z.group;
    std::vector<std::vector<int>> pre(q.order());
    for (int t = 0; t < p.dom.order(); ++t) pre[p.ops[t]].push_back(t);
    std::vector<std::vector<int>> choices(q.order());
    for (int e = 0; e < q.order(); ++e) {
        if (pre[e].empty()) {
            choices[e] = iota_map(zg.size);
            continue;
        }
        const int want = a.ops[pre[e].front()];
        for (int v = 0; v < zg.size; ++v) {
            bool ok = true;
            for (int t : pre[e])
                ok = ok && (mode_ == ActionMode::Nac ? z.base.contains(zg.sub(v, a.ops[t])) : v == a.ops[t]);
            if (!ok) continue;
            if (v == want) choices[e].insert(choices[e].begin(), v);
            else choices[e].push_back(v);
        }
        if (choices[e].empty()) return std::nullopt;
    }
    return solve(q, z, points, choices, [&](const Mor& x) { return equal(compose(x, p), a); });
}

std::optional<ActionMap> ActionCat::find_inverse(const Mor& f) const {
    const Action& a = f.dom;
    const Action& b = f.cod;
    if (a.n != b.n) return std::nullopt;
    std::vector<int> back(b.n, -1);
    for (int x = 0; x < a.n; ++x) {
        if (back[f.points[x]] >= 0) return std::nullopt;
        back[f.points[x]] = x;
    }
    const FinGroup& t = *b.group;
    std::vector<std::vector<int>> choices(b.order());
    for (int e = 0; e < b.order(); ++e) {
        for (int s = 0; s < a.order(); ++s)
            if (f.ops[s] == e) choices[e].insert(choices[e].begin(), s);
            else if (mode_ == ActionMode::Nac && b.base.contains(t.sub(f.ops[s], e))) choices[e].push_back(s);
        if (choices[e].empty()) return std::nullopt;
    }
    if (mode_ != ActionMode::Nac && a.order() != b.order()) return std::nullopt;
    const Mor ia = identity(a), ib = identity(b);
    return solve(b, a, back, choices, [&](const Mor& g) {
        return ops_ok(b, a, g.ops) && equal(compose(g, f), ia) && equal(compose(f, g), ib);
    });
}

ActionMap ActionCat::inverse(const Mor& f) const {
    auto g = find_inverse(f);
    if (!g) throw std::invalid_argument(name() + ": morphism is not invertible");
    return *g;
}

std::vector<Action> ActionCat::objects() const {
    return small_actions(bounds_.max_set, bounds_.max_group);
}

std::vector<Action> ActionCat::probes() const {
    const GroupRef z2 = share(cyclic(2));
    return {make_action(1, trivial_group(), {0}), make_action(2, trivial_group(), {0, 1}), make_action(1, z2, {0, 0}),
            make_action(2, z2, {0, 1, 1, 0}), make_action(2, z2, {0, 0, 1, 1})};
}

std::vector<ActionMap> ActionCat::homs(const Obj& a, const Obj& b) const {
    std::vector<Mor> out;
    if (mode_ == ActionMode::Act) {
        for (const auto& h : all_homs(*a.group, *b.group))
            visit_point_maps(a, b, h, [&](const std::vector<int>& pts) {
                out.push_back({a, b, pts, h});
                return true;
            });
        return out;
    }
    const int cap = search_cap();
    std::vector<int> cosets;
    if (mode_ == ActionMode::Nac) cosets = right_cosets(*b.group, b.base);
    visit_quasi_homs(
        as_pair(a), as_pair(b), default_choices(as_pair(a), as_pair(b)),
        [&](const std::vector<int>& ops) {
            const size_t before = out.size();
            visit_point_maps(a, b, ops, [&](const std::vector<int>& pts) {
                out.push_back({a, b, pts, ops});
                return static_cast<int>(out.size()) < cap;
            });
            if (static_cast<int>(out.size()) >= cap) return SearchStep::Stop;
            return out.size() > before ? SearchStep::Accept : SearchStep::Reject;
        },
        mode_ == ActionMode::Nac ? &cosets : nullptr);
    return out;
}

json ActionCat::obj_json(const Obj& a) const { return action_json(a); }

json ActionCat::mor_json(const Mor& f) const {
    json j = action_map_json(f);
    j["dom"] = obj_json(f.dom);
    j["cod"] = obj_json(f.cod);
    return j;
}

json ActionCat::sub_json(const Obj& a, Sub x) const {
    return {{"points", mask_members(x)}, {"ops", stabiliser(a, x).members}};
}

// ---- functors -----------------------------------------------------------------------

Action functor_U(const Pointed& z) { return make_action(z.n, trivial_group(), iota_map(z.n)); }

ActionMap functor_U(const PointedMap& f) { return {functor_U(f.dom), functor_U(f.cod), f.map, {0}}; }

Pointed functor_V(const Action& a) {
    int k = 0;
    orbits(a, &k);
    return {k};
}

PointedMap functor_V(const ActionMap& f) {
    int k = 0, l = 0;
    const auto src = orbits(f.dom, &k);
    const auto dst = orbits(f.cod, &l);
    PointedMap m{{k}, {l}, std::vector<int>(k, 0)};
    for (int x = 0; x < f.dom.n; ++x) m.map[src[x]] = dst[f.points[x]];
    return m;
}

Action functor_F(const GroupPair& p) {
    const FinGroup& s = *p.group;
    std::vector<int> reps;
    const auto coset = right_cosets(s, p.base, &reps);
    const int k = static_cast<int>(reps.size());
    std::vector<int> act(static_cast<size_t>(k) * s.size);
    for (int c = 0; c < k; ++c)
        for (int e = 0; e < s.size; ++e) act[static_cast<size_t>(c) * s.size + e] = coset[s.add(reps[c], e)];
    return make_action(k, p.group, std::move(act));
}

ActionMap functor_F(const PairMap& f) {
    std::vector<int> reps;
    right_cosets(*f.dom.group, f.dom.base, &reps);
    const auto target = right_cosets(*f.cod.group, f.cod.base);
    std::vector<int> points;
    for (int r : reps) points.push_back(target[f.map[r]]);
    return {functor_F(f.dom), functor_F(f.cod), std::move(points), f.map};
}

GroupPair functor_G(const Action& a) { return {a.group, fixer(a, 0)}; }

PairMap functor_G(const ActionMap& f) { return {functor_G(f.dom), functor_G(f.cod), f.ops}; }

Action regular_action(const GroupObj& g) {
    const FinGroup& s = *g.group;
    std::vector<int> act(static_cast<size_t>(s.size) * s.size);
    for (int x = 0; x < s.size; ++x)
        for (int e = 0; e < s.size; ++e) act[static_cast<size_t>(x) * s.size + e] = s.add(x, e);
    return make_action(s.size, g.group, std::move(act));
}

ActionMap regular_action(const GroupHom& f) { return {regular_action(f.dom), regular_action(f.cod), f.map, f.map}; }

Functor<PointedCat, ActionCat> make_U(const PointedCat& set, const ActionCat& act) {
    return {"U", &set, &act, [](const Pointed& z) { return functor_U(z); },
            [](const PointedMap& f) { return functor_U(f); }};
}

Functor<ActionCat, PointedCat> make_V(const ActionCat& act, const PointedCat& set) {
    return {"V", &act, &set, [](const Action& a) { return functor_V(a); },
            [](const ActionMap& f) { return functor_V(f); }};
}

Functor<PairCat, ActionCat> make_F(const PairCat& gp2, const ActionCat& act) {
    return {"F", &gp2, &act, [](const GroupPair& p) { return functor_F(p); },
            [](const PairMap& f) { return functor_F(f); }};
}

Functor<ActionCat, PairCat> make_G(const ActionCat& act, const PairCat& gp2) {
    return {"G", &act, &gp2, [](const Action& a) { return functor_G(a); },
            [](const ActionMap& f) { return functor_G(f); }};
}

Functor<GpCat, ActionCat> make_regular(const GpCat& gp, const ActionCat& act) {
    return {"FI", &gp, &act, [](const GroupObj& g) { return regular_action(g); },
            [](const GroupHom& f) { return regular_action(f); }};
}

Functor<ActionCat, ActionCat> make_embedding(const ActionCat& act, const ActionCat& target) {
    return {target.mode() == ActionMode::Nac ? "P" : "E", &act, &target, [](const Action& a) { return a; },
            [](const ActionMap& f) { return f; }};
}

bool is_transitive(const Action& a) { return orbit_mask(a, 0) == a.all_points(); }

ActionMap counit(const Action& a) {
    if (!is_transitive(a)) throw std::invalid_argument("counit: action is not transitive");
    const GroupPair p = functor_G(a);
    std::vector<int> reps;
    right_cosets(*p.group, p.base, &reps);
    std::vector<int> points;
    for (int r : reps) points.push_back(a.at(0, r));
    return {functor_F(p), a, std::move(points), iota_map(a.order())};
}

ActionMap action_sigma(const Action& a, const Subgroup& n) {
    const FinGroup& s = *a.group;
    if (!is_subgroup(s, n.members) || !is_normal(s, n)) throw std::invalid_argument("sigma: subgroup is not normal");
    for (int x = 0; x < a.n; ++x)
        for (int e : n.members)
            if (a.at(x, e) != x) throw std::invalid_argument("sigma: subgroup does not act trivially");
    auto q = quotient_group(s, n);
    const int k = q.group.size;
    std::vector<int> act(static_cast<size_t>(a.n) * k);
    for (int x = 0; x < a.n; ++x)
        for (int c = 0; c < k; ++c) act[static_cast<size_t>(x) * k + c] = a.at(x, q.section[c]);
    Action cod = make_action(a.n, share(std::move(q.group)), std::move(act));
    return {a, std::move(cod), iota_map(a.n), std::move(q.projection)};
}

ActionMap nac_sigma_invert(const ActionMap& p) {
    const FinGroup& s = *p.dom.group;
    const FinGroup& t = *p.cod.group;
    if (p.dom.n != p.cod.n || p.points != iota_map(p.dom.n)) throw std::invalid_argument("sigma: point map is not the identity");
    if (!is_hom(s, t, p.ops)) throw std::invalid_argument("sigma: operator map is not a homomorphism");
    std::vector<int> section(t.size, -1);
    for (int e = 0; e < s.size; ++e)
        if (section[p.ops[e]] < 0) section[p.ops[e]] = e;
    if (std::find(section.begin(), section.end(), -1) != section.end())
        throw std::invalid_argument("sigma: operator map is not surjective");
    for (int e = 0; e < s.size; ++e)
        if (p.ops[e] == 0)
            for (int x = 0; x < p.dom.n; ++x)
                if (p.dom.at(x, e) != x) throw std::invalid_argument("sigma: kernel does not act trivially");
    if (!consistent(p.dom, p.cod, p.points, p.ops)) throw std::invalid_argument("sigma: maps are not consistent");
    ActionMap j{p.cod, p.dom, p.points, std::move(section)};
    if (!ActionCat(ActionMode::Nac).valid(j)) throw std::logic_error("sigma section is not a Nac morphism");
    return j;
}

// ---- exactness from groups to pointed sets ------------------------------------------

ActionMap orbit_map(const Action& x) {
    const Action dom = regular_action(GroupObj{x.group});
    std::vector<int> points(x.order());
    for (int s = 0; s < x.order(); ++s) points[s] = x.at(0, s);
    return {dom, x, std::move(points), iota_map(x.order())};
}

MixedReport mixed_sequence_exactness(const MixedSequence& q) {
    if (!(q.u.cod == q.v.dom)) throw std::invalid_argument("sequence shape: u and v do not compose");
    if (!same_group(q.v.cod.group, q.x.group)) throw std::invalid_argument("sequence shape: v does not land in the acting group");
    if (q.g.size() != static_cast<size_t>(q.x.n) || q.g[0] != 0)
        throw std::invalid_argument("sequence shape: g is not a pointed map on X");
    for (int v : q.g)
        if (v < 0 || v >= q.y.n) throw std::invalid_argument("sequence shape: g leaves Y");
    for (int x = 0; x < q.x.n; ++x)
        for (int s = 0; s < q.x.order(); ++s)
            if (q.g[q.x.at(x, s)] != q.g[x]) throw std::invalid_argument("sequence shape: g is not constant on orbits");
    if (!(q.h.dom == q.y)) throw std::invalid_argument("sequence shape: h does not start at Y");

    const ActionCat c(ActionMode::Act);
    const ActionMap u = regular_action(q.u), v = regular_action(q.v), f = orbit_map(q.x);
    const ActionMap g{q.x, functor_U(q.y), q.g, std::vector<int>(q.x.order(), 0)};
    const ActionMap h = functor_U(q.h);

    const FinGroup& gg = *q.u.cod.group;
    const Subgroup im_u = subgroup_of(image_of(q.u.map, iota_map(q.u.dom.group->size)));
    const Subgroup ker_v = subgroup_of(preimage_of(q.v.map, trivial_subgroup()));
    const Subgroup im_v = subgroup_of(image_of(q.v.map, iota_map(gg.size)));
    MixedReport r;
    r.clauses.push_back({"a", is_exact_at(c, u, v), im_u == ker_v});
    r.clauses.push_back({"b", is_exact_at(c, v, f), im_v == fixer(q.x, 0)});
    r.clauses.push_back({"c", is_exact_at(c, f, g), orbit_mask(q.x, 0) == preimage_mask(q.g, 1u)});
    r.clauses.push_back({"d", is_exact_at(c, g, h), (image_mask(q.g, q.x.all_points()) | 1u) == preimage_mask(q.h.map, 1u)});
    r.f_exact = is_exact_morphism(c, f);
    r.g_right_modular = is_right_modular(c, g);
    const auto orbit = orbits(q.x);
    r.classical_at_action = r.clauses[2].elementwise;
    for (int x = 0; x < q.x.n; ++x)
        for (int y = 0; y < q.x.n; ++y)
            if ((q.g[x] == q.g[y]) != (orbit[x] == orbit[y])) r.classical_at_action = false;
    return r;
}

json MixedReport::to_json() const {
    json j = json::object();
    for (const auto& c : clauses)
        j[c.clause] = {{"categorical", c.categorical}, {"elementwise", c.elementwise}, {"agree", c.categorical == c.elementwise}};
    j["e"] = {{"f_exact", f_exact}};
    j["f"] = {{"g_right_modular", g_right_modular}};
    j["classical_at_action"] = classical_at_action;
    return j;
}

// ---- json ---------------------------------------------------------------------------

json action_json(const Action& a) {
    json rows = json::array();
    for (int x = 0; x < a.n; ++x) {
        std::vector<int> row(a.order());
        for (int s = 0; s < a.order(); ++s) row[s] = a.at(x, s);
        rows.push_back(row);
    }
    return {{"points", a.n}, {"group", group_json(*a.group)}, {"act", rows}};
}

Action action_from_json(const json& j) {
    const int n = j.at("points").get<int>();
    GroupRef g = group_from_json(j.at("group"));
    std::vector<int> act;
    const auto& rows = j.at("act");
    if (!rows.is_array() || rows.size() != static_cast<size_t>(n)) throw std::invalid_argument("act needs one row per point");
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != static_cast<size_t>(g->size))
            throw std::invalid_argument("act rows need one entry per group element");
        for (const auto& v : row) act.push_back(v.get<int>());
    }
    return make_action(n, g, std::move(act));
}

json action_map_json(const ActionMap& f) { return {{"fprime", f.points}, {"fsecond", f.ops}}; }

ActionMap action_map_from_json(const json& j, const Action& dom, const Action& cod) {
    return {dom, cod, j.at("fprime").get<std::vector<int>>(), j.at("fsecond").get<std::vector<int>>()};
}

}  // namespace homolog
