#include "homolog/pairs.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace homolog {

namespace {

std::vector<int> iota_map(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<int> mask_elements(unsigned m) {
    std::vector<int> out;
    for (int i = 0; m >> i; ++i)
        if (m >> i & 1u) out.push_back(i);
    return out;
}

unsigned mask_of(const std::vector<int>& xs) {
    unsigned m = 0;
    for (int x : xs) m |= 1u << x;
    return m;
}

bool injective(const std::vector<int>& f, int cod_size) {
    std::vector<char> seen(cod_size, 0);
    for (int y : f) {
        if (seen[y]) return false;
        seen[y] = 1;
    }
    return true;
}

std::vector<int> invert_bijection(const std::vector<int>& f) {
    std::vector<int> g(f.size());
    for (size_t x = 0; x < f.size(); ++x) g[f[x]] = static_cast<int>(x);
    return g;
}

// Every function {0..n-1} -> {0..m-1} passing `keep`, first coordinate most significant.
template <class Keep>
std::vector<std::vector<int>> all_functions(int n, int m, Keep keep) {
    std::vector<std::vector<int>> out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    if (m == 0) return out;
    std::vector<int> f(n, 0);
    while (true) {
        if (keep(f)) out.push_back(f);
        int i = n - 1;
        while (i >= 0 && ++f[i] == m) f[i--] = 0;
        if (i < 0) break;
    }
    return out;
}

Subgroup subgroup_of(std::vector<int> xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return Subgroup{std::move(xs)};
}

Subgroup spanned(const FinGroup& g, const Subgroup& base, const std::vector<int>& extra) {
    std::vector<int> xs = base.members;
    xs.insert(xs.end(), extra.begin(), extra.end());
    return span(g, xs);
}

}  // namespace

// ---- pairs of sets ----------------------------------------------------------

unsigned image_mask(const std::vector<int>& f, unsigned xs) {
    unsigned m = 0;
    for (size_t x = 0; x < f.size(); ++x)
        if (xs >> x & 1u) m |= 1u << f[x];
    return m;
}

unsigned preimage_mask(const std::vector<int>& f, unsigned ys) {
    unsigned m = 0;
    for (size_t x = 0; x < f.size(); ++x)
        if (ys >> f[x] & 1u) m |= 1u << x;
    return m;
}

bool is_pair_map(const SetPairMap& f) {
    if (static_cast<int>(f.map.size()) != f.dom.n) return false;
    for (int y : f.map)
        if (y < 0 || y >= f.cod.n) return false;
    return (image_mask(f.map, f.dom.base) & ~f.cod.base) == 0;
}

SetPairMap Set2Cat::compose(const Mor& g, const Mor& f) const {
    if (!(f.cod == g.dom)) throw std::invalid_argument("non-composable pair");
    SetPairMap h{f.dom, g.cod, std::vector<int>(f.map.size())};
    for (size_t x = 0; x < f.map.size(); ++x) h.map[x] = g.map[f.map[x]];
    return h;
}

SetPairMap Set2Cat::identity(const Obj& a) const { return {a, a, iota_map(a.n)}; }

SetPairMap Set2Cat::cokernel(const Mor& f) const { return {f.cod, {f.cod.n, image_sub(f)}, iota_map(f.cod.n)}; }

SetPairMap Set2Cat::sub_mono(const Obj& a, Sub x) const {
    if ((a.base & ~x) != 0 || (x & ~a.full()) != 0) throw std::invalid_argument("not a normal subobject of the pair");
    auto elems = mask_elements(x);
    unsigned base = 0;
    for (size_t i = 0; i < elems.size(); ++i)
        if (a.base >> elems[i] & 1u) base |= 1u << i;
    return {{static_cast<int>(elems.size()), base}, a, elems};
}

std::optional<SetPairMap> Set2Cat::lift(const Mor& m, const Mor& a) const {
    SetPairMap x{a.dom, m.dom, std::vector<int>(a.dom.n, -1)};
    for (int z = 0; z < a.dom.n; ++z) {
        const bool in_base = a.dom.base >> z & 1u;
        for (int j = 0; j < m.dom.n; ++j) {
            if (m.map[j] != a.map[z]) continue;
            if (x.map[z] < 0) x.map[z] = j;
            if (in_base && (m.dom.base >> j & 1u)) {
                x.map[z] = j;
                break;
            }
        }
        if (x.map[z] < 0) return std::nullopt;
    }
    if (!is_pair_map(x)) return std::nullopt;
    return x;
}

std::optional<SetPairMap> Set2Cat::descend(const Mor& p, const Mor& a) const {
    SetPairMap x{p.cod, a.cod, std::vector<int>(p.cod.n, -1)};
    for (int s = 0; s < p.dom.n; ++s) {
        int& v = x.map[p.map[s]];
        if (v < 0) v = a.map[s];
        else if (v != a.map[s]) return std::nullopt;
    }
    for (int q = 0; q < p.cod.n; ++q) {
        if (x.map[q] >= 0) continue;
        if (p.cod.base >> q & 1u) {
            if (a.cod.base == 0) return std::nullopt;
            x.map[q] = mask_elements(a.cod.base).front();
        } else {
            if (a.cod.n == 0) return std::nullopt;
            x.map[q] = 0;
        }
    }
    if (!is_pair_map(x)) return std::nullopt;
    return x;
}

bool Set2Cat::is_iso(const Mor& f) const {
    return f.dom.n == f.cod.n && injective(f.map, f.cod.n) && image_mask(f.map, f.dom.base) == f.cod.base;
}

SetPairMap Set2Cat::inverse(const Mor& f) const {
    if (!is_iso(f)) throw std::invalid_argument("Set2: not an isomorphism");
    return {f.cod, f.dom, invert_bijection(f.map)};
}

std::vector<unsigned> Set2Cat::subobjects(const Obj& a) const {
    std::vector<unsigned> out;
    for (unsigned m = 0; m <= a.full(); ++m)
        if ((m & a.base) == a.base) out.push_back(m);
    return out;
}

std::vector<SetPair> Set2Cat::objects() const {
    std::vector<SetPair> out;
    for (int n = 0; n <= bounds_.max_set; ++n)
        for (int k = 0; k <= n; ++k) out.push_back({n, k == 0 ? 0u : ((1u << k) - 1u)});
    return out;
}

std::vector<SetPair> Set2Cat::probes() const { return {{1, 0u}, {1, 1u}, {2, 1u}}; }

std::vector<SetPairMap> Set2Cat::homs(const Obj& a, const Obj& b) const {
    std::vector<SetPairMap> out;
    for (auto& f : all_functions(a.n, b.n, [&](const std::vector<int>& f) {
             return (image_mask(f, a.base) & ~b.base) == 0;
         }))
        out.push_back({a, b, std::move(f)});
    return out;
}

json Set2Cat::obj_json(const Obj& a) const { return set_pair_json(a); }

json Set2Cat::mor_json(const Mor& f) const {
    return {{"dom", set_pair_json(f.dom)}, {"cod", set_pair_json(f.cod)}, {"map", f.map}};
}

json Set2Cat::sub_json(const Obj&, Sub x) const { return mask_elements(x); }

SetPair set2_tensor(const SetPair& p, const SetPair& q) {
    SetPair t{p.n * q.n, 0u};
    if (t.n > 31) throw std::invalid_argument("tensor product too large");
    for (int x = 0; x < p.n; ++x)
        for (int y = 0; y < q.n; ++y)
            if ((p.base >> x & 1u) || (q.base >> y & 1u)) t.base |= 1u << (x * q.n + y);
    return t;
}

SetPairMap set2_tensor_map(const SetPairMap& f, const SetPairMap& g) {
    SetPairMap h{set2_tensor(f.dom, g.dom), set2_tensor(f.cod, g.cod), {}};
    for (int x = 0; x < f.dom.n; ++x)
        for (int y = 0; y < g.dom.n; ++y) h.map.push_back(f.map[x] * g.cod.n + g.map[y]);
    return h;
}

SetPair set2_unit() { return {1, 0u}; }

HomPair set2_hom(const SetPair& p, const SetPair& q) {
    Set2Cat c;
    HomPair h{{}, c.homs(p, q)};
    if (h.maps.size() > 31) throw std::invalid_argument("hom pair too large to index");
    h.pair.n = static_cast<int>(h.maps.size());
    for (size_t i = 0; i < h.maps.size(); ++i)
        if (c.is_null(h.maps[i])) h.pair.base |= 1u << i;
    return h;
}

bool set2_adjunction_bijective(const SetPair& x, const SetPair& z, const SetPair& y) {
    Set2Cat c;
    const auto hom_zy = set2_hom(z, y);
    const auto left = c.homs(set2_tensor(x, z), y);
    const auto right = c.homs(x, hom_zy.pair);
    std::vector<std::vector<int>> seen;
    for (const auto& f : left) {
        std::vector<int> curried(x.n);
        for (int a = 0; a < x.n; ++a) {
            std::vector<int> slice(z.n);
            for (int b = 0; b < z.n; ++b) slice[b] = f.map[a * z.n + b];
            auto it = std::find_if(hom_zy.maps.begin(), hom_zy.maps.end(),
                                   [&](const SetPairMap& g) { return g.map == slice; });
            if (it == hom_zy.maps.end()) return false;
            curried[a] = static_cast<int>(it - hom_zy.maps.begin());
        }
        if (!is_pair_map({x, hom_zy.pair, curried})) return false;
        if (std::find(seen.begin(), seen.end(), curried) != seen.end()) return false;
        seen.push_back(curried);
    }
    return seen.size() == right.size();
}

Classifier set2_classifier() {
    SetPair terminal{1, 1u};
    SetPair omega{2, 2u};
    return {terminal, omega, {terminal, omega, {1}}};
}

SetPairMap characteristic_map(const SetPair& x, unsigned a) {
    if ((x.base & ~a) != 0) throw std::invalid_argument("characteristic map needs X0 <= A");
    SetPairMap chi{x, set2_classifier().omega, std::vector<int>(x.n)};
    for (int e = 0; e < x.n; ++e) chi.map[e] = (a >> e & 1u) ? 1 : 0;
    return chi;
}

bool classifier_pullback_holds(const Set2Cat& c, const SetPair& x, unsigned a) {
    const auto cl = set2_classifier();
    const auto chi = characteristic_map(x, a);
    const auto m = c.sub_mono(x, a);
    const SetPairMap bang{m.dom, cl.terminal, std::vector<int>(m.dom.n, 0)};
    if (!c.equal(c.compose(chi, m), c.compose(cl.t, bang))) return false;
    for (const auto& z : c.probes())
        for (const auto& u : c.homs(z, x)) {
            const SetPairMap to_t{z, cl.terminal, std::vector<int>(z.n, 0)};
            const bool commutes = c.equal(c.compose(chi, u), c.compose(cl.t, to_t));
            int through = 0;
            for (const auto& w : c.homs(z, m.dom))
                if (c.equal(c.compose(m, w), u)) ++through;
            if (commutes ? through != 1 : through != 0) return false;
        }
    return true;
}

// ---- pointed sets -------------------------------------------------------------

PointedMap PointedCat::compose(const Mor& g, const Mor& f) const {
    if (!(f.cod == g.dom)) throw std::invalid_argument("non-composable pair");
    PointedMap h{f.dom, g.cod, std::vector<int>(f.map.size())};
    for (size_t x = 0; x < f.map.size(); ++x) h.map[x] = g.map[f.map[x]];
    return h;
}

PointedMap PointedCat::identity(const Obj& a) const { return {a, a, iota_map(a.n)}; }

bool PointedCat::is_null(const Mor& f) const {
    return std::all_of(f.map.begin(), f.map.end(), [](int y) { return y == 0; });
}

PointedMap PointedCat::cokernel(const Mor& f) const {
    const unsigned img = image_sub(f);
    PointedMap p{f.cod, {1}, std::vector<int>(f.cod.n, 0)};
    for (int y = 0; y < f.cod.n; ++y)
        if (!(img >> y & 1u)) p.map[y] = p.cod.n++;
    return p;
}

PointedMap PointedCat::sub_mono(const Obj& a, Sub x) const {
    if (!(x & 1u) || (x >> a.n) != 0) throw std::invalid_argument("not a pointed subset");
    auto elems = mask_elements(x);
    return {{static_cast<int>(elems.size())}, a, elems};
}

std::optional<PointedMap> PointedCat::lift(const Mor& m, const Mor& a) const {
    PointedMap x{a.dom, m.dom, std::vector<int>(a.dom.n, -1)};
    for (int z = 0; z < a.dom.n; ++z) {
        for (int j = 0; j < m.dom.n && x.map[z] < 0; ++j)
            if (m.map[j] == a.map[z]) x.map[z] = j;
        if (x.map[z] < 0) return std::nullopt;
    }
    if (x.map[0] != 0) return std::nullopt;
    return x;
}

std::optional<PointedMap> PointedCat::descend(const Mor& p, const Mor& a) const {
    PointedMap x{p.cod, a.cod, std::vector<int>(p.cod.n, -1)};
    for (int s = 0; s < p.dom.n; ++s) {
        int& v = x.map[p.map[s]];
        if (v < 0) v = a.map[s];
        else if (v != a.map[s]) return std::nullopt;
    }
    for (auto& v : x.map)
        if (v < 0) v = 0;
    if (x.map[0] != 0) return std::nullopt;
    return x;
}

bool PointedCat::is_iso(const Mor& f) const { return f.dom.n == f.cod.n && injective(f.map, f.cod.n); }

PointedMap PointedCat::inverse(const Mor& f) const {
    if (!is_iso(f)) throw std::invalid_argument("Set*: not an isomorphism");
    return {f.cod, f.dom, invert_bijection(f.map)};
}

std::vector<unsigned> PointedCat::subobjects(const Obj& a) const {
    std::vector<unsigned> out;
    for (unsigned m = 1; m < (1u << a.n); m += 2) out.push_back(m);
    return out;
}

std::vector<Pointed> PointedCat::objects() const {
    std::vector<Pointed> out;
    for (int n = 1; n <= bounds_.max_set; ++n) out.push_back({n});
    return out;
}

std::vector<PointedMap> PointedCat::homs(const Obj& a, const Obj& b) const {
    std::vector<PointedMap> out;
    for (auto& f : all_functions(a.n, b.n, [](const std::vector<int>& f) { return f[0] == 0; }))
        out.push_back({a, b, std::move(f)});
    return out;
}

json PointedCat::mor_json(const Mor& f) const {
    return {{"dom", f.dom.n}, {"cod", f.cod.n}, {"map", f.map}};
}

json PointedCat::sub_json(const Obj&, Sub x) const { return mask_elements(x); }

Pointed pointed_quotient(const SetPair& x) {
    if (x.base == 0) return {x.n + 1};
    return {1 + x.n - std::popcount(x.base)};
}

std::vector<int> pointed_projection(const SetPair& x) {
    std::vector<int> p(x.n);
    int next = 1;
    for (int e = 0; e < x.n; ++e) p[e] = (x.base >> e & 1u) ? 0 : next++;
    return p;
}

PointedMap pointed_quotient(const SetPairMap& f) {
    PointedMap g{pointed_quotient(f.dom), pointed_quotient(f.cod), {}};
    g.map.assign(g.dom.n, 0);
    const auto px = pointed_projection(f.dom);
    const auto py = pointed_projection(f.cod);
    for (int e = 0; e < f.dom.n; ++e) g.map[px[e]] = py[f.map[e]];
    return g;
}

// ---- groups -------------------------------------------------------------------

GroupHom GpCat::compose(const Mor& g, const Mor& f) const {
    if (!(f.cod == g.dom)) throw std::invalid_argument("non-composable pair");
    GroupHom h{f.dom, g.cod, std::vector<int>(f.map.size())};
    for (size_t x = 0; x < f.map.size(); ++x) h.map[x] = g.map[f.map[x]];
    return h;
}

GroupHom GpCat::identity(const Obj& a) const { return {a, a, iota_map(a.group->size)}; }

bool GpCat::is_null(const Mor& f) const {
    return std::all_of(f.map.begin(), f.map.end(), [](int y) { return y == 0; });
}

Subgroup GpCat::kernel_sub(const Mor& f) const { return subgroup_of(preimage_of(f.map, trivial_subgroup())); }

Subgroup GpCat::image_sub(const Mor& f) const {
    return invariant_closure(*f.cod.group, span(*f.cod.group, f.map));
}

GroupHom GpCat::cokernel(const Mor& f) const {
    auto q = quotient_group(*f.cod.group, image_sub(f));
    return {f.cod, {share(std::move(q.group))}, std::move(q.projection)};
}

GroupHom GpCat::sub_mono(const Obj& a, const Sub& x) const {
    std::vector<int> embed;
    auto g = subgroup_as_group(*a.group, x, &embed);
    return {{share(std::move(g))}, a, std::move(embed)};
}

std::optional<GroupHom> GpCat::lift(const Mor& m, const Mor& a) const {
    GroupHom x{a.dom, m.dom, std::vector<int>(a.map.size(), -1)};
    for (size_t z = 0; z < a.map.size(); ++z) {
        for (size_t j = 0; j < m.map.size() && x.map[z] < 0; ++j)
            if (m.map[j] == a.map[z]) x.map[z] = static_cast<int>(j);
        if (x.map[z] < 0) return std::nullopt;
    }
    if (!is_hom(*x.dom.group, *x.cod.group, x.map)) return std::nullopt;
    return x;
}

std::optional<GroupHom> GpCat::descend(const Mor& p, const Mor& a) const {
    GroupHom x{p.cod, a.cod, std::vector<int>(p.cod.group->size, -1)};
    bool onto = true;
    for (size_t s = 0; s < p.map.size(); ++s) {
        int& v = x.map[p.map[s]];
        if (v < 0) v = a.map[s];
        else if (v != a.map[s]) return std::nullopt;
    }
    for (int v : x.map) onto = onto && v >= 0;
    if (onto) {
        if (!is_hom(*x.dom.group, *x.cod.group, x.map)) return std::nullopt;
        return x;
    }
    for (auto& h : all_homs(*x.dom.group, *x.cod.group)) {
        bool agrees = true;
        for (size_t s = 0; s < p.map.size() && agrees; ++s) agrees = h[p.map[s]] == a.map[s];
        if (agrees) return GroupHom{x.dom, x.cod, std::move(h)};
    }
    return std::nullopt;
}

bool GpCat::is_iso(const Mor& f) const {
    return f.dom.group->size == f.cod.group->size && injective(f.map, f.cod.group->size);
}

GroupHom GpCat::inverse(const Mor& f) const {
    if (!is_iso(f)) throw std::invalid_argument("Gp: not an isomorphism");
    return {f.cod, f.dom, invert_bijection(f.map)};
}

std::vector<Subgroup> GpCat::subobjects(const Obj& a) const {
    std::vector<Subgroup> out;
    for (auto& h : all_subgroups(*a.group))
        if (is_normal(*a.group, h)) out.push_back(std::move(h));
    return out;
}

Subgroup GpCat::direct_image(const Mor& f, const Sub& x) const {
    return invariant_closure(*f.cod.group, span(*f.cod.group, image_of(f.map, x.members)));
}

Subgroup GpCat::inverse_image(const Mor& f, const Sub& y) const { return subgroup_of(preimage_of(f.map, y)); }

std::vector<GroupObj> GpCat::objects() const {
    std::vector<GroupObj> out;
    for (const auto& g : small_groups(bounds_.max_group)) out.push_back({g.group});
    return out;
}

std::vector<GroupObj> GpCat::probes() const {
    return {{share(cyclic(2))}, {share(cyclic(3))}, {share(symmetric3())}};
}

std::vector<GroupHom> GpCat::homs(const Obj& a, const Obj& b) const {
    std::vector<GroupHom> out;
    for (auto& f : all_homs(*a.group, *b.group)) out.push_back({a, b, std::move(f)});
    return out;
}

json GpCat::obj_json(const Obj& a) const { return group_json(*a.group); }

json GpCat::mor_json(const Mor& f) const {
    return {{"dom", group_json(*f.dom.group)}, {"cod", group_json(*f.cod.group)}, {"map", f.map}};
}

// ---- pairs of groups ------------------------------------------------------------

GroupPair group_pair(const GroupRef& g, const Subgroup& base) {
    if (!is_subgroup(*g, base.members)) throw std::invalid_argument("base is not a subgroup");
    return {g, base};
}

bool is_quasi_hom(const std::vector<int>& f, const GroupPair& dom, const GroupPair& cod) {
    const FinGroup& s = *dom.group;
    const FinGroup& t = *cod.group;
    if (static_cast<int>(f.size()) != s.size) return false;
    for (int y : f)
        if (y < 0 || y >= t.size) return false;
    for (int x : dom.base.members)
        if (!cod.base.contains(f[x])) return false;
    bool left = true, right = true;
    for (int a = 0; a < s.size; ++a)
        for (int b = 0; b < s.size; ++b)
            for (int e : {1, -1}) {
                const int eb = e > 0 ? b : s.inv(b);
                const int efb = e > 0 ? f[b] : t.inv(f[b]);
                const int efa = e > 0 ? f[a] : t.inv(f[a]);
                // f(a + e b) - e f(b) - f(a)
                if (!cod.base.contains(t.sub(t.sub(f[s.add(a, eb)], efb), f[a]))) left = false;
                // -f(e a + b) + e f(a) + f(b), with the roles of a, b as in the mirrored condition
                const int ea = e > 0 ? a : s.inv(a);
                if (!cod.base.contains(t.add(t.add(t.inv(f[s.add(ea, b)]), efa), f[b]))) right = false;
            }
    if (left != right) throw std::logic_error("quasi-homomorphism conditions (d) and (d') disagree");
    return left;
}

bool r_equivalent(const PairMap& f, const PairMap& g) {
    const FinGroup& t = *f.cod.group;
    bool a = true, b = true;
    for (size_t s = 0; s < f.map.size(); ++s) {
        if (!f.cod.base.contains(t.sub(f.map[s], g.map[s]))) a = false;
        if (!f.cod.base.contains(t.add(t.inv(f.map[s]), g.map[s]))) b = false;
    }
    if (a != b) throw std::logic_error("R-equivalence conditions disagree");
    return a;
}

bool is_sigma(const PairMap& p) {
    const FinGroup& s = *p.dom.group;
    const FinGroup& t = *p.cod.group;
    if (!is_hom(s, t, p.map)) return false;
    std::vector<char> hit(t.size, 0);
    for (int y : p.map) hit[y] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) return false;
    return subgroup_of(preimage_of(p.map, p.cod.base)) == p.dom.base;
}

PairMap sigma_invert(const PairMap& p) {
    if (!is_sigma(p)) throw std::invalid_argument("not a sigma map: needs a surjective homomorphism with S0 = p^-1(T0)");
    PairMap j{p.cod, p.dom, std::vector<int>(p.cod.group->size, -1)};
    for (size_t s = 0; s < p.map.size(); ++s)
        if (j.map[p.map[s]] < 0) j.map[p.map[s]] = static_cast<int>(s);
    if (!is_quasi_hom(j.map, j.dom, j.cod)) throw std::logic_error("section of a sigma map is not a quasi-homomorphism");
    return j;
}

namespace {

// Depth-first search for quasi-homomorphisms, assigning f(0), f(1), ... in turn.
class QuasiSearch {
public:
    QuasiSearch(const GroupPair& dom, const GroupPair& cod, const std::vector<std::vector<int>>& choices)
        : s_(*dom.group), t_(*cod.group), t0_(cod.base), choices_(choices), f_(s_.size, -1) {
        in_s0_.assign(s_.size, 0);
        for (int x : dom.base.members) in_s0_[x] = 1;
    }

    // Visits every solution until the visitor says Stop.
    void run(const std::function<SearchStep(const std::vector<int>&)>& visit) {
        visit_ = &visit;
        stop_ = false;
        step(0);
    }

    // One accepted solution per sequence of target cosets: within a coset, later values are
    // skipped once an earlier one has led to an accepted solution.
    void run_by_coset(const std::vector<int>& coset_of, const std::function<SearchStep(const std::vector<int>&)>& visit) {
        coset_of_ = &coset_of;
        run(visit);
        coset_of_ = nullptr;
    }

private:
    bool consistent(int i) const {
        const int v = f_[i];
        if (in_s0_[i] && !t0_.contains(v)) return false;
        for (int a = 0; a <= i; ++a)
            for (int b = 0; b <= i; ++b)
                for (int e : {1, -1}) {
                    const int u = e > 0 ? s_.add(a, b) : s_.sub(a, b);
                    // only triples that involve the newly assigned element
                    if (u > i || (a != i && b != i && u != i)) continue;
                    if (!check(a, b, e)) return false;
                }
        return true;
    }

    bool check(int a, int b, int e) const {
        const int u = e > 0 ? s_.add(a, b) : s_.sub(a, b);
        const int efb = e > 0 ? f_[b] : t_.inv(f_[b]);
        return t0_.contains(t_.sub(t_.sub(f_[u], efb), f_[a]));
    }

    size_t step(int i) {
        if (stop_) return 0;
        if (i == s_.size) {
            const SearchStep r = (*visit_)(f_);
            if (r == SearchStep::Stop) stop_ = true;
            return r == SearchStep::Reject ? 0 : 1;
        }
        size_t found = 0;
        std::vector<char> done_coset;
        if (coset_of_) done_coset.assign(t_.size, 0);
        for (int v : choices_[i]) {
            if (coset_of_ && done_coset[(*coset_of_)[v]]) continue;
            f_[i] = v;
            if (!consistent(i)) continue;
            const size_t below = step(i + 1);
            found += below;
            if (coset_of_ && below > 0) done_coset[(*coset_of_)[v]] = 1;
            if (stop_) break;
        }
        f_[i] = -1;
        return found;
    }

    const FinGroup& s_;
    const FinGroup& t_;
    const Subgroup& t0_;
    const std::vector<std::vector<int>>& choices_;
    std::vector<int> f_;
    std::vector<char> in_s0_;
    const std::function<SearchStep(const std::vector<int>&)>* visit_ = nullptr;
    const std::vector<int>* coset_of_ = nullptr;
    bool stop_ = false;
};

}  // namespace

std::vector<std::vector<int>> default_choices(const GroupPair& dom, const GroupPair& cod) {
    std::vector<std::vector<int>> ch(dom.group->size);
    for (int s = 0; s < dom.group->size; ++s) {
        if (dom.base.contains(s)) ch[s] = cod.base.members;
        else ch[s] = iota_map(cod.group->size);
    }
    return ch;
}

void visit_quasi_homs(const GroupPair& dom, const GroupPair& cod, const std::vector<std::vector<int>>& choices,
                      const std::function<SearchStep(const std::vector<int>&)>& visit, const std::vector<int>* coset_of) {
    QuasiSearch q(dom, cod, choices);
    if (coset_of) q.run_by_coset(*coset_of, visit);
    else q.run(visit);
}

std::vector<std::vector<int>> search_quasi_homs(const GroupPair& dom, const GroupPair& cod,
                                                const std::vector<std::vector<int>>& choices, int cap) {
    std::vector<std::vector<int>> out;
    QuasiSearch q(dom, cod, choices);
    q.run([&](const std::vector<int>& f) {
        out.push_back(f);
        return cap <= 0 || static_cast<int>(out.size()) < cap ? SearchStep::Accept : SearchStep::Stop;
    });
    return out;
}

std::string PairCat::name() const {
    switch (mode_) {
        case PairMode::Gp2: return "Gp2";
        case PairMode::Q: return "Q";
        case PairMode::Ngp: return "Ngp";
    }
    return "?";
}

PairMap PairCat::compose(const Mor& g, const Mor& f) const {
    if (!(f.cod == g.dom)) throw std::invalid_argument("non-composable pair");
    PairMap h{f.dom, g.cod, std::vector<int>(f.map.size())};
    for (size_t x = 0; x < f.map.size(); ++x) h.map[x] = g.map[f.map[x]];
    return h;
}

PairMap PairCat::identity(const Obj& a) const { return {a, a, iota_map(a.group->size)}; }

bool PairCat::is_null(const Mor& f) const {
    return std::all_of(f.map.begin(), f.map.end(), [&](int y) { return f.cod.base.contains(y); });
}

bool PairCat::equal(const Mor& f, const Mor& g) const {
    if (!(f.dom == g.dom) || !(f.cod == g.cod)) return false;
    if (mode_ != PairMode::Ngp) return f.map == g.map;
    const FinGroup& t = *f.cod.group;
    for (size_t s = 0; s < f.map.size(); ++s)
        if (!f.cod.base.contains(t.sub(f.map[s], g.map[s]))) return false;
    return true;
}

bool PairCat::valid(const Mor& f) const {
    if (mode_ == PairMode::Gp2) {
        if (!is_hom(*f.dom.group, *f.cod.group, f.map)) return false;
        for (int x : f.dom.base.members)
            if (!f.cod.base.contains(f.map[x])) return false;
        return true;
    }
    return is_quasi_hom(f.map, f.dom, f.cod);
}

Subgroup PairCat::kernel_sub(const Mor& f) const { return subgroup_of(preimage_of(f.map, f.cod.base)); }

Subgroup PairCat::image_sub(const Mor& f) const { return spanned(*f.cod.group, f.cod.base, f.map); }

PairMap PairCat::cokernel(const Mor& f) const {
    return {f.cod, {f.cod.group, image_sub(f)}, iota_map(f.cod.group->size)};
}

PairMap PairCat::sub_mono(const Obj& a, const Sub& x) const {
    if (!subset_of(a.base, x)) throw std::invalid_argument("not a normal subobject of the pair");
    std::vector<int> embed;
    auto g = subgroup_as_group(*a.group, x, &embed);
    std::vector<int> base;
    for (size_t i = 0; i < embed.size(); ++i)
        if (a.base.contains(embed[i])) base.push_back(static_cast<int>(i));
    return {{share(std::move(g)), Subgroup{base}}, a, std::move(embed)};
}

Subgroup PairCat::direct_image(const Mor& f, const Sub& x) const {
    return spanned(*f.cod.group, f.cod.base, image_of(f.map, x.members));
}

Subgroup PairCat::inverse_image(const Mor& f, const Sub& y) const { return subgroup_of(preimage_of(f.map, y)); }

std::optional<PairMap> PairCat::lift(const Mor& m, const Mor& a) const {
    const FinGroup& s = *m.cod.group;
    const int mz = m.dom.group->size;
    std::vector<std::vector<int>> choices(a.map.size());
    PairMap x{a.dom, m.dom, std::vector<int>(a.map.size(), -1)};
    for (size_t z = 0; z < a.map.size(); ++z) {
        for (int j = 0; j < mz; ++j)
            if (m.map[j] == a.map[z]) choices[z].insert(choices[z].begin(), j);
            else if (mode_ == PairMode::Ngp && m.cod.base.contains(s.sub(m.map[j], a.map[z]))) choices[z].push_back(j);
        if (choices[z].empty()) return std::nullopt;
        x.map[z] = choices[z].front();
    }
    if (valid(x)) return x;
    if (mode_ == PairMode::Gp2) return std::nullopt;
    auto found = search_quasi_homs(x.dom, x.cod, choices, 1);
    if (found.empty()) return std::nullopt;
    x.map = std::move(found.front());
    return x;
}

std::optional<PairMap> PairCat::descend(const Mor& p, const Mor& a) const {
    const FinGroup& z = *a.cod.group;
    const int qn = p.cod.group->size;
    std::vector<std::vector<int>> pre(qn);
    for (size_t s = 0; s < p.map.size(); ++s) pre[p.map[s]].push_back(static_cast<int>(s));
    std::vector<std::vector<int>> choices(qn);
    PairMap x{p.cod, a.cod, std::vector<int>(qn, 0)};
    bool onto = true;
    for (int q = 0; q < qn; ++q) {
        if (pre[q].empty()) {
            onto = false;
            choices[q] = iota_map(z.size);
            continue;
        }
        const int want = a.map[pre[q].front()];
        if (mode_ != PairMode::Ngp) {
            for (int s : pre[q])
                if (a.map[s] != want) return std::nullopt;
            choices[q] = {want};
        } else {
            choices[q].push_back(want);
            for (int v = 0; v < z.size; ++v) {
                if (v == want) continue;
                bool ok = true;
                for (int s : pre[q]) ok = ok && a.cod.base.contains(z.sub(v, a.map[s]));
                if (ok) choices[q].push_back(v);
            }
            for (int s : pre[q])
                if (!a.cod.base.contains(z.sub(want, a.map[s]))) {
                    choices[q].erase(choices[q].begin());
                    break;
                }
            if (choices[q].empty()) return std::nullopt;
        }
        x.map[q] = choices[q].front();
    }
    if (onto && valid(x)) return x;
    if (mode_ == PairMode::Gp2) {
        if (onto) return std::nullopt;
        for (auto& h : all_homs(*x.dom.group, z)) {
            PairMap c{x.dom, x.cod, std::move(h)};
            bool agrees = valid(c);
            for (size_t s = 0; s < p.map.size() && agrees; ++s) agrees = c.map[p.map[s]] == a.map[s];
            if (agrees) return c;
        }
        return std::nullopt;
    }
    auto found = search_quasi_homs(x.dom, x.cod, choices, 1);
    if (found.empty()) return std::nullopt;
    x.map = std::move(found.front());
    return x;
}

std::optional<PairMap> PairCat::find_inverse(const Mor& f) const {
    const FinGroup& s = *f.dom.group;
    const FinGroup& t = *f.cod.group;
    if (mode_ != PairMode::Ngp) {
        if (s.size != t.size || !injective(f.map, t.size)) return std::nullopt;
        if (subgroup_of(image_of(f.map, f.dom.base.members)) != f.cod.base) return std::nullopt;
        PairMap g{f.cod, f.dom, invert_bijection(f.map)};
        if (!valid(g)) return std::nullopt;
        return g;
    }
    // Bijective on right cosets S0 + s -> T0 + f(s).
    std::vector<int> sreps, treps;
    const auto cs = right_cosets(s, f.dom.base, &sreps);
    const auto ct = right_cosets(t, f.cod.base, &treps);
    if (sreps.size() != treps.size()) return std::nullopt;
    std::vector<int> back(treps.size(), -1);
    for (size_t c = 0; c < sreps.size(); ++c) {
        const int img = ct[f.map[sreps[c]]];
        if (back[img] >= 0) return std::nullopt;
        back[img] = static_cast<int>(c);
    }
    std::vector<std::vector<int>> choices(t.size);
    for (int y = 0; y < t.size; ++y)
        for (int x = 0; x < s.size; ++x)
            if (cs[x] == back[ct[y]]) choices[y].push_back(x);
    auto found = search_quasi_homs(f.cod, f.dom, choices, 1);
    if (found.empty()) return std::nullopt;
    return PairMap{f.cod, f.dom, std::move(found.front())};
}

PairMap PairCat::inverse(const Mor& f) const {
    auto g = find_inverse(f);
    if (!g) throw std::invalid_argument(name() + ": not an isomorphism");
    return *g;
}

std::vector<Subgroup> PairCat::subobjects(const Obj& a) const {
    std::vector<Subgroup> out;
    for (auto& h : all_subgroups(*a.group))
        if (subset_of(a.base, h)) out.push_back(std::move(h));
    return out;
}

std::vector<GroupPair> PairCat::objects() const {
    std::vector<GroupPair> out;
    for (const auto& g : small_groups(bounds_.max_group))
        for (auto& h : all_subgroups(*g.group)) out.push_back({g.group, std::move(h)});
    return out;
}

std::vector<GroupPair> PairCat::probes() const {
    auto z2 = share(cyclic(2));
    auto z4 = share(cyclic(4));
    return {{z2, trivial_subgroup()}, {z2, whole(*z2)}, {share(cyclic(3)), trivial_subgroup()}, {z4, Subgroup{{0, 2}}}};
}

std::vector<PairMap> PairCat::homs(const Obj& a, const Obj& b) const {
    std::vector<PairMap> out;
    switch (mode_) {
        case PairMode::Gp2:
            for (auto& f : all_homs(*a.group, *b.group)) {
                PairMap m{a, b, std::move(f)};
                bool ok = true;
                for (int x : a.base.members) ok = ok && b.base.contains(m.map[x]);
                if (ok) out.push_back(std::move(m));
            }
            break;
        case PairMode::Q:
            for (auto& f : search_quasi_homs(a, b, default_choices(a, b), search_cap()))
                out.push_back({a, b, std::move(f)});
            break;
        case PairMode::Ngp: {
            const auto ch = default_choices(a, b);
            const auto coset_of = right_cosets(*b.group, b.base);
            QuasiSearch q(a, b, ch);
            const int cap = search_cap();
            q.run_by_coset(coset_of, [&](const std::vector<int>& f) {
                out.push_back({a, b, f});
                return static_cast<int>(out.size()) < cap ? SearchStep::Accept : SearchStep::Stop;
            });
            break;
        }
    }
    return out;
}

json PairCat::obj_json(const Obj& a) const { return pair_json(a); }

json PairCat::mor_json(const Mor& f) const {
    return {{"dom", pair_json(f.dom)}, {"cod", pair_json(f.cod)}, {"map", f.map}};
}

// ---- functors -------------------------------------------------------------------

GroupPair functor_I(const GroupObj& g) { return {g.group, trivial_subgroup()}; }

PairMap functor_I(const GroupHom& f) { return {functor_I(f.dom), functor_I(f.cod), f.map}; }

GroupObj functor_K(const GroupPair& p) {
    auto q = quotient_group(*p.group, invariant_closure(*p.group, p.base));
    return {share(std::move(q.group))};
}

GroupHom functor_K(const PairMap& f) {
    auto qs = quotient_group(*f.dom.group, invariant_closure(*f.dom.group, f.dom.base));
    auto qt = quotient_group(*f.cod.group, invariant_closure(*f.cod.group, f.cod.base));
    GroupHom h{{share(qs.group)}, {share(qt.group)}, std::vector<int>(qs.group.size)};
    for (int c = 0; c < qs.group.size; ++c) h.map[c] = qt.projection[f.map[qs.section[c]]];
    return h;
}

PairMap functor_J(const GroupHom& f) { return functor_I(f); }

bool k_adjunction_holds(const GroupPair& p, const GroupObj& g) {
    auto q = quotient_group(*p.group, invariant_closure(*p.group, p.base));
    auto left = all_homs(q.group, *g.group);
    PairCat gp2(PairMode::Gp2);
    auto right = gp2.homs(p, functor_I(g));
    if (left.size() != right.size()) return false;
    for (const auto& h : left) {
        std::vector<int> composite(p.group->size);
        for (int s = 0; s < p.group->size; ++s) composite[s] = h[q.projection[s]];
        if (std::none_of(right.begin(), right.end(), [&](const PairMap& m) { return m.map == composite; })) return false;
    }
    return true;
}

Functor<GpCat, PairCat> make_I(const GpCat& gp, const PairCat& gp2) {
    return {"I", &gp, &gp2, [](const GroupObj& g) { return functor_I(g); },
            [](const GroupHom& f) { return functor_I(f); }};
}

Functor<PairCat, GpCat> make_K(const PairCat& gp2, const GpCat& gp) {
    return {"K", &gp2, &gp, [](const GroupPair& p) { return functor_K(p); },
            [](const PairMap& f) { return functor_K(f); }};
}

Functor<PairCat, PairCat> make_P(const PairCat& gp2, const PairCat& ngp) {
    return {"P", &gp2, &ngp, [](const GroupPair& p) { return p; }, [](const PairMap& f) { return f; }};
}

Functor<GpCat, PairCat> make_J(const GpCat& gp, const PairCat& ngp) {
    return {"J", &gp, &ngp, [](const GroupObj& g) { return functor_I(g); },
            [](const GroupHom& f) { return functor_J(f); }};
}

Functor<Set2Cat, PointedCat> make_P(const Set2Cat& set2, const PointedCat& pointed) {
    return {"P", &set2, &pointed, [](const SetPair& x) { return pointed_quotient(x); },
            [](const SetPairMap& f) { return pointed_quotient(f); }};
}

// ---- json ---------------------------------------------------------------------------

json group_json(const FinGroup& g) { return {{"order", g.size}, {"table", g.to_table()}}; }

GroupRef group_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        for (const auto& g : small_groups(8))
            if (g.name == name) return g.group;
        if (name.size() > 1 && name[0] == 'Z' && std::all_of(name.begin() + 1, name.end(), ::isdigit))
            return share(cyclic(std::stoi(name.substr(1))));
        if (name.rfind("E2^", 0) == 0) return share(elementary2(std::stoi(name.substr(3))));
        throw std::invalid_argument("unknown group name: " + name);
    }
    if (j.is_object() && j.contains("table")) return share(FinGroup::from_table(j.at("table").get<Table>()));
    throw std::invalid_argument("group must be a catalogue name or {\"table\": ...}");
}

json pair_json(const GroupPair& p) { return {{"group", group_json(*p.group)}, {"sub", p.base.members}}; }

GroupPair pair_from_json(const json& j) {
    auto g = group_from_json(j.at("group"));
    std::vector<int> sub = j.value("sub", std::vector<int>{0});
    auto s = subgroup_of(sub);
    return group_pair(g, s);
}

json set_pair_json(const SetPair& p) { return {{"n", p.n}, {"base", mask_elements(p.base)}}; }

SetPair set_pair_from_json(const json& j) {
    SetPair p{j.at("n").get<int>(), 0u};
    if (p.n < 0 || p.n > 31) throw std::invalid_argument("pair of sets too large");
    const auto base = j.value("base", std::vector<int>{});
    for (int x : base)
        if (x < 0 || x >= p.n) throw std::invalid_argument("base element out of range");
    p.base = mask_of(base);
    return p;
}

}  // namespace homolog
