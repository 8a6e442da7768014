#include "homolog/couples.hpp"

#include <algorithm>
#include <random>

namespace homolog {

namespace {

std::vector<int> identity_map(int n) {
    std::vector<int> v(n);
    for (int i = 0; i < n; ++i) v[i] = i;
    return v;
}

const GroupRef& trivial() {
    static const GroupRef g = share(FinGroup{});
    return g;
}

int lead(unsigned x) { return 31 - __builtin_clz(x); }

// Rows with distinct leading bits, kept in descending order of leading bit. Each row carries a tag
// recording which generators it combines.
struct Echelon {
    std::vector<std::pair<unsigned, unsigned>> rows;

    unsigned reduce(unsigned v, unsigned* tag = nullptr) const {
        for (const auto& [r, t] : rows)
            if (v >> lead(r) & 1u) {
                v ^= r;
                if (tag) *tag ^= t;
            }
        return v;
    }

    // Returns the remainder (zero when v was already in the span); *tag picks up the combination.
    unsigned insert(unsigned v, unsigned* tag) {
        v = reduce(v, tag);
        if (v == 0) return 0;
        rows.emplace_back(v, *tag);
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return lead(a.first) > lead(b.first); });
        return v;
    }
};

unsigned boundary(const FilteredComplex& fc, int k, unsigned x) {
    if (k <= 0 || k > fc.top_degree()) return 0;
    unsigned out = 0;
    for (int j = 0; j < fc.dim(k); ++j)
        if (x >> j & 1u) out ^= fc.diff[k][j];
    return out;
}

// H_n(F_b / F_a) with F_(-1) = 0, as coordinates against chosen representative cycles.
struct Homology {
    Echelon basis;
    std::vector<unsigned> reps;

    int dim() const { return static_cast<int>(reps.size()); }
    unsigned coords(unsigned z) const {
        unsigned t = 0;
        if (basis.reduce(z, &t) != 0) throw std::logic_error("filtered complex: not a relative cycle");
        return t;
    }
};

Homology relative_homology(const FilteredComplex& fc, int n, int a, int b) {
    Homology h;
    if (n < 0 || n > fc.top_degree()) return h;
    const unsigned bn = fc.filtered(n, b);
    const unsigned an = a < 0 ? 0u : fc.filtered(n, a);
    const unsigned below = a < 0 ? 0u : fc.filtered(n - 1, a);
    // relative cycles: kernel of x -> d x mod A_(n-1) on B_n
    Echelon images;
    std::vector<unsigned> cycles;
    for (int j = 0; j < fc.dim(n); ++j) {
        if (!(bn >> j & 1u)) continue;
        unsigned tag = 1u << j;
        const unsigned w = boundary(fc, n, 1u << j) & ~below;
        if (images.insert(w, &tag) == 0) cycles.push_back(tag);
    }
    for (int j = 0; j < fc.dim(n); ++j)
        if (an >> j & 1u) {
            unsigned t = 0;
            h.basis.insert(1u << j, &t);
        }
    if (n + 1 <= fc.top_degree()) {
        const unsigned up = fc.filtered(n + 1, b);
        for (int j = 0; j < fc.dim(n + 1); ++j)
            if (up >> j & 1u) {
                unsigned t = 0;
                h.basis.insert(fc.diff[n + 1][j], &t);
            }
    }
    for (unsigned z : cycles) {
        unsigned t = 1u << h.reps.size();
        if (h.basis.insert(z, &t) != 0) h.reps.push_back(z);
    }
    return h;
}

GroupRef elementary(int dim) {
    static std::vector<GroupRef> cache;
    while (static_cast<int>(cache.size()) <= dim) cache.push_back(share(elementary2(static_cast<int>(cache.size()))));
    return cache[dim];
}

GroupHom linear_hom(const Homology& from, const Homology& to, const std::function<unsigned(unsigned)>& chain_map) {
    std::vector<unsigned> img(from.dim());
    for (int k = 0; k < from.dim(); ++k) img[k] = to.coords(chain_map(from.reps[k]));
    const int n = 1 << from.dim();
    std::vector<int> map(n, 0);
    for (int x = 1; x < n; ++x) {
        const int low = x & -x;
        map[x] = map[x ^ low] ^ static_cast<int>(img[__builtin_ctz(static_cast<unsigned>(x))]);
    }
    return {{elementary(from.dim())}, {elementary(to.dim())}, std::move(map)};
}

}  // namespace

// ---- reports -------------------------------------------------------------------------------

bool CoupleReport::exact() const {
    return std::all_of(clauses.begin(), clauses.end(), [](const ClauseCheck& c) { return c.pass; });
}

bool CoupleReport::semiexact() const {
    for (const auto& c : clauses)
        if (c.clause == "a") return c.pass;
    return false;
}

std::string CoupleReport::first_failure() const {
    for (const auto& c : clauses)
        if (!c.pass) return c.clause;
    return "";
}

json CoupleReport::to_json() const {
    json cs = json::array();
    for (const auto& c : clauses) {
        json j = {{"clause", c.clause}, {"status", c.pass ? "pass" : "fail"}, {"checked", c.checked}};
        if (!c.pass) j["witness"] = c.witness;
        cs.push_back(j);
    }
    return {{"instance", instance}, {"exact", exact()}, {"horizon", horizon}, {"clauses", cs}};
}

std::string extend_name(Extend e) {
    switch (e) {
        case Extend::Zero: return "zero";
        case Extend::Constant: return "constant";
        case Extend::Unknown: return "unknown";
    }
    return "unknown";
}

Extend extend_from_name(const std::string& s) {
    if (s == "zero") return Extend::Zero;
    if (s == "constant") return Extend::Constant;
    if (s == "unknown") return Extend::Unknown;
    throw std::invalid_argument("unknown window extension: " + s);
}

// ---- filtered complexes ----------------------------------------------------------------------

int FilteredComplex::total_dim() const {
    int t = 0;
    for (const auto& l : level) t += static_cast<int>(l.size());
    return t;
}

unsigned FilteredComplex::filtered(int k, int p) const {
    if (k < 0 || k > top_degree()) return 0;
    unsigned m = 0;
    for (int j = 0; j < dim(k); ++j)
        if (level[k][j] <= p) m |= 1u << j;
    return m;
}

bool is_filtered_complex(const FilteredComplex& fc, std::string* why) {
    auto no = [why](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (fc.steps < 1) return no("at least one filtration step is needed");
    if (fc.diff.size() != fc.level.size()) return no("one boundary list per degree is needed");
    for (int k = 0; k <= fc.top_degree(); ++k) {
        if (static_cast<int>(fc.diff[k].size()) != fc.dim(k)) return no("boundary list has the wrong length");
        if (fc.dim(k) > 16) return no("degree too large");
        for (int j = 0; j < fc.dim(k); ++j) {
            const int l = fc.level[k][j];
            if (l < 0 || l >= fc.steps) return no("filtration level out of range");
            const unsigned dj = fc.diff[k][j];
            if (k == 0 && dj != 0) return no("degree 0 has no boundary");
            if (k > 0 && (dj >> fc.dim(k - 1)) != 0) return no("boundary outside the previous degree");
            if (k > 0 && (dj & ~fc.filtered(k - 1, l)) != 0) return no("boundary leaves the filtration step");
            if (boundary(fc, k - 1, dj) != 0) return no("d d is not zero");
        }
    }
    return true;
}

BigradedCouple<GpCat> filtered_couple(const FilteredComplex& fc) {
    std::string why;
    if (!is_filtered_complex(fc, &why)) throw std::invalid_argument("filtered complex: " + why);
    BigradedCouple<GpCat> x;
    x.n_lo = 0;
    x.n_hi = fc.top_degree();
    x.p_lo = 0;
    x.p_hi = fc.steps - 1;
    x.below = Extend::Zero;
    x.above = Extend::Constant;
    x.zero = {elementary(0)};
    std::map<Bidegree, Homology> abs, rel;
    for (int n = 0; n <= fc.top_degree(); ++n)
        for (int p = 0; p < fc.steps; ++p) {
            abs[{n, p}] = relative_homology(fc, n, -1, p);
            rel[{n, p}] = relative_homology(fc, n, p - 1, p);
            x.D[{n, p}] = {elementary(abs[{n, p}].dim())};
            x.E[{n, p}] = {elementary(rel[{n, p}].dim())};
        }
    auto same = [](unsigned z) { return z; };
    for (int n = 0; n <= fc.top_degree(); ++n)
        for (int p = 0; p < fc.steps; ++p) {
            if (p > 0) x.u[{n, p}] = linear_hom(abs.at({n, p - 1}), abs.at({n, p}), same);
            x.v[{n, p}] = linear_hom(abs.at({n, p}), rel.at({n, p}), same);
            if (n > 0 && p > 0)
                x.del[{n, p}] = linear_hom(rel.at({n, p}), abs.at({n - 1, p - 1}),
                                           [&fc, n](unsigned z) { return boundary(fc, n, z); });
        }
    return x;
}

std::map<Bidegree, int> associated_graded_oracle(const FilteredComplex& fc) {
    std::map<Bidegree, int> out;
    auto log2 = [](std::size_t m) {
        int k = 0;
        while ((std::size_t{1} << k) < m) ++k;
        return k;
    };
    for (int n = 0; n <= fc.top_degree(); ++n) {
        const unsigned all = 1u << fc.dim(n);
        std::vector<unsigned> cycles;
        for (unsigned x = 0; x < all; ++x)
            if (boundary(fc, n, x) == 0) cycles.push_back(x);
        std::vector<char> is_boundary(all, 0);
        const unsigned above = 1u << fc.dim(n + 1);
        for (unsigned y = 0; y < (n + 1 <= fc.top_degree() ? above : 1u); ++y) is_boundary[boundary(fc, n + 1, y)] = 1;
        std::vector<unsigned> bounds;
        for (unsigned b = 0; b < all; ++b)
            if (is_boundary[b]) bounds.push_back(b);
        int prev = 0;
        for (int p = 0; p < fc.steps; ++p) {
            const unsigned fp = fc.filtered(n, p);
            std::vector<char> seen(all, 0);
            std::size_t count = 0;
            for (unsigned z : cycles) {
                if (z & ~fp) continue;
                for (unsigned b : bounds)
                    if (!seen[z ^ b]) {
                        seen[z ^ b] = 1;
                        ++count;
                    }
            }
            const int dim = log2(count) - log2(bounds.size());
            out[{n, p}] = dim - prev;
            prev = dim;
        }
    }
    return out;
}

std::map<Bidegree, int> page_dimensions(const SpectralPage<GpCat>& page) {
    std::map<Bidegree, int> out;
    for (const auto& [k, e] : page.entries) {
        const int size = realised(GpCat{}, e.sub).group->size;
        int d = 0;
        while ((1 << d) < size) ++d;
        out[k] = d;
    }
    return out;
}

namespace {

struct Piece {
    int degree;      // of the lower vector
    int low, high;   // levels; high < 0 for a single class
    int weight() const { return high < 0 ? 1 : 2; }
};

FilteredComplex assemble(const std::vector<Piece>& pieces, int steps, int max_degree, std::mt19937_64& rng) {
    struct Vec {
        int level;
        int id;
    };
    std::vector<std::vector<Vec>> deg(max_degree + 1);
    std::vector<std::pair<int, int>> where;  // id -> (degree, slot) after sorting
    std::vector<std::pair<int, int>> edges;  // (upper id, lower id)
    int next = 0;
    for (const auto& pc : pieces) {
        const int lo = next++;
        deg[pc.degree].push_back({pc.low, lo});
        if (pc.high >= 0) {
            const int hi = next++;
            deg[pc.degree + 1].push_back({pc.high, hi});
            edges.emplace_back(hi, lo);
        }
    }
    where.resize(next);
    FilteredComplex fc;
    fc.steps = steps;
    int top = 0;
    for (int k = 0; k <= max_degree; ++k)
        if (!deg[k].empty()) top = k;
    fc.level.assign(top + 1, {});
    fc.diff.assign(top + 1, {});
    for (int k = 0; k <= top; ++k) {
        std::stable_sort(deg[k].begin(), deg[k].end(), [](const Vec& a, const Vec& b) { return a.level < b.level; });
        for (int j = 0; j < static_cast<int>(deg[k].size()); ++j) {
            where[deg[k][j].id] = {k, j};
            fc.level[k].push_back(deg[k][j].level);
        }
        fc.diff[k].assign(deg[k].size(), 0u);
    }
    for (const auto& [hi, lo] : edges) fc.diff[where[hi].first][where[hi].second] |= 1u << where[lo].second;

    // Filtered change of basis: e'_j = e_j + random earlier vectors (levels are sorted).
    std::vector<std::vector<unsigned>> basis(top + 1);
    for (int k = 0; k <= top; ++k)
        for (int j = 0; j < fc.dim(k); ++j) basis[k].push_back((1u << j) | (static_cast<unsigned>(rng()) & ((1u << j) - 1u)));
    auto coords = [&](int k, unsigned w) {
        unsigned c = 0;
        for (int j = fc.dim(k) - 1; j >= 0; --j)
            if (w >> j & 1u) {
                w ^= basis[k][j];
                c |= 1u << j;
            }
        return c;
    };
    FilteredComplex out = fc;
    for (int k = 1; k <= top; ++k)
        for (int j = 0; j < fc.dim(k); ++j) out.diff[k][j] = coords(k - 1, boundary(fc, k, basis[k][j]));
    return out;
}

}  // namespace

std::vector<FilteredComplex> enumerate_filtered_complexes(int max_dim, int steps, int max_degree, std::uint64_t seed) {
    std::vector<Piece> kinds;
    for (int n = 0; n <= max_degree; ++n)
        for (int p = 0; p < steps; ++p) kinds.push_back({n, p, -1});
    for (int n = 0; n < max_degree; ++n)
        for (int p = 0; p < steps; ++p)
            for (int q = p; q < steps; ++q) kinds.push_back({n, p, q});
    std::mt19937_64 rng(seed);
    std::vector<FilteredComplex> out;
    std::vector<Piece> chosen;
    std::function<void(std::size_t, int)> go = [&](std::size_t i, int room) {
        if (i == kinds.size()) {
            if (!chosen.empty()) out.push_back(assemble(chosen, steps, max_degree, rng));
            return;
        }
        go(i + 1, room);
        int added = 0;
        while (room >= kinds[i].weight()) {
            chosen.push_back(kinds[i]);
            room -= kinds[i].weight();
            ++added;
            go(i + 1, room);
        }
        chosen.resize(chosen.size() - added);
    };
    go(0, max_dim);
    return out;
}

json filtered_complex_json(const FilteredComplex& fc) { return {{"steps", fc.steps}, {"levels", fc.level}, {"diff", fc.diff}}; }

FilteredComplex filtered_complex_from_json(const json& j) {
    FilteredComplex fc;
    fc.steps = j.at("steps").get<int>();
    fc.level = j.at("levels").get<std::vector<std::vector<int>>>();
    fc.diff = j.at("diff").get<std::vector<std::vector<unsigned>>>();
    std::string why;
    if (!is_filtered_complex(fc, &why)) throw std::invalid_argument("filtered complex: " + why);
    return fc;
}

// ---- abelian couples -------------------------------------------------------------------------

std::vector<NamedGroup> small_abelian_groups(int max_order) {
    if (max_order > 16) throw std::invalid_argument("abelian catalogue stops at order 16");
    static const std::vector<std::pair<std::string, std::vector<int>>> specs = {
        {"Z1", {1}},        {"Z2", {2}},         {"Z3", {3}},          {"Z4", {4}},           {"Z2xZ2", {2, 2}},
        {"Z5", {5}},        {"Z6", {6}},         {"Z7", {7}},          {"Z8", {8}},           {"Z4xZ2", {4, 2}},
        {"Z2^3", {2, 2, 2}}, {"Z9", {9}},         {"Z3xZ3", {3, 3}},    {"Z10", {10}},         {"Z11", {11}},
        {"Z12", {12}},      {"Z6xZ2", {6, 2}},   {"Z13", {13}},        {"Z14", {14}},         {"Z15", {15}},
        {"Z16", {16}},      {"Z8xZ2", {8, 2}},   {"Z4xZ4", {4, 4}},    {"Z4xZ2xZ2", {4, 2, 2}}, {"Z2^4", {2, 2, 2, 2}}};
    std::vector<NamedGroup> out;
    for (const auto& [name, fs] : specs) {
        int order = 1;
        for (int f : fs) order *= f;
        if (order > max_order) continue;
        FinGroup g = cyclic(fs[0]);
        for (std::size_t i = 1; i < fs.size(); ++i) g = direct_product(g, cyclic(fs[i]));
        out.push_back({name, share(std::move(g))});
    }
    return out;
}

std::vector<Couple<GpCat>> abelian_couples(int max_d, std::size_t limit) {
    GpCat gp;
    const auto targets = small_abelian_groups(16);
    const auto sources = small_abelian_groups(max_d);
    std::vector<Couple<GpCat>> out;
    for (std::size_t si = 0; si < sources.size(); ++si) {
        const auto& src = sources[si];
        if (out.size() >= limit) break;
        const std::size_t left = sources.size() - si;
        const std::size_t per_source = std::max<std::size_t>(1, (limit - out.size() + left - 1) / left);
        const GroupObj d{src.group};
        const auto endos = all_homs(*src.group, *src.group);
        const std::size_t step = std::max<std::size_t>(1, endos.size() / per_source);
        std::size_t taken = 0;
        for (std::size_t e = 0; e < endos.size() && taken < per_source && out.size() < limit; e += step) {
            const GroupHom u{d, d, endos[e]};
            const auto k = gp.kernel(u);
            const auto q = gp.cokernel(u);
            const int need = k.dom.group->size * q.cod.group->size;
            bool found = false;
            for (const auto& t : targets) {
                if (t.group->size != need || found) continue;
                const GroupObj eo{t.group};
                for (const auto& i : all_homs(*q.cod.group, *t.group)) {
                    const GroupHom in{q.cod, eo, i};
                    if (!gp.is_null(gp.kernel(in)) && q.cod.group->size > 1) continue;
                    const auto im = gp.image_sub(in);
                    for (const auto& pi : all_homs(*t.group, *k.dom.group)) {
                        const GroupHom onto{eo, k.dom, pi};
                        if (gp.image_sub(onto) != gp.sub_top(k.dom) || gp.kernel_sub(onto) != im) continue;
                        out.push_back({d, eo, u, gp.compose(in, q), gp.compose(k, onto)});
                        found = true;
                        break;
                    }
                    if (found) break;
                }
            }
            if (found) ++taken;
        }
    }
    return out;
}

// ---- towers --------------------------------------------------------------------------------------

namespace {

GroupRef pi_x(const Tower& t, int s, int n) {
    if (s < 0) return trivial();
    return t.levels.at(s).pi_x.at(n - 1);
}

Pointed pi0_x(const Tower& t, int s) {
    if (s < 0) return Pointed{1};
    return t.levels.at(s).pi0_x;
}

void require(bool ok, int s, const std::string& what) {
    if (!ok) throw std::invalid_argument("supplied maps fail morphism typing: level " + std::to_string(s) + ", " + what);
}

}  // namespace

bool Tower::path_connected() const {
    return std::all_of(levels.begin(), levels.end(), [](const TowerLevel& l) { return l.pi0_x.n == 1; });
}

void validate_tower(const Tower& t) {
    if (t.depth < 1) throw std::invalid_argument("tower depth must be at least 1");
    for (int s = 0; s < static_cast<int>(t.levels.size()); ++s) {
        const auto& l = t.levels[s];
        const auto n_str = [](int n) { return " in degree " + std::to_string(n); };
        require(static_cast<int>(l.pi_x.size()) == t.depth && static_cast<int>(l.pi_f.size()) == t.depth, s,
                "one group per degree");
        require(static_cast<int>(l.f_star.size()) == t.depth + 1 && static_cast<int>(l.i_star.size()) == t.depth + 1 &&
                    static_cast<int>(l.delta.size()) == t.depth + 1,
                s, "one map per degree");
        const GroupRef acting = pi_x(t, s - 1, 1);
        require(same_group(l.pi0_f.group, acting), s, "pi_0 F is acted on by pi_1 of the base");
        for (int n = 1; n <= t.depth; ++n) {
            require(static_cast<int>(l.f_star[n].size()) == l.pi_x[n - 1]->size &&
                        is_hom(*l.pi_x[n - 1], *pi_x(t, s - 1, n), l.f_star[n]),
                    s, "f_*" + n_str(n));
            require(static_cast<int>(l.i_star[n].size()) == l.pi_f[n - 1]->size &&
                        is_hom(*l.pi_f[n - 1], *l.pi_x[n - 1], l.i_star[n]),
                    s, "i_*" + n_str(n));
            if (n >= 2)
                require(static_cast<int>(l.delta[n].size()) == pi_x(t, s - 1, n)->size &&
                            is_hom(*pi_x(t, s - 1, n), *l.pi_f[n - 2], l.delta[n]),
                        s, "connecting map" + n_str(n));
        }
        require(static_cast<int>(l.delta[1].size()) == acting->size, s, "connecting map in degree 1");
        for (int g = 0; g < acting->size; ++g) require(l.delta[1][g] == l.pi0_f.at(0, g), s, "connecting map is 0 + g");
        const Pointed base = pi0_x(t, s - 1);
        require(static_cast<int>(l.f_star[0].size()) == l.pi0_x.n && l.f_star[0][0] == 0, s, "pointed f_*");
        for (int y : l.f_star[0]) require(y >= 0 && y < base.n, s, "pointed f_*");
        require(static_cast<int>(l.i_star[0].size()) == l.pi0_f.n && l.i_star[0][0] == 0, s, "pointed i_*");
        for (int x = 0; x < l.pi0_f.n; ++x) {
            require(l.i_star[0][x] >= 0 && l.i_star[0][x] < l.pi0_x.n, s, "pointed i_*");
            for (int g = 0; g < acting->size; ++g)
                require(l.i_star[0][l.pi0_f.at(x, g)] == l.i_star[0][x], s, "i_* is constant on orbits");
        }
    }
}

Tower group_tower(const std::vector<GroupRef>& groups, const std::vector<std::vector<int>>& phi,
                  const std::vector<Pointed>& sets, const std::vector<std::vector<int>>& psi) {
    Tower t;
    t.depth = 1;
    const int levels = static_cast<int>(groups.size());
    for (int s = 0; s < levels; ++s) {
        const GroupRef& g = groups[s];
        const GroupRef below = s == 0 ? trivial() : groups[s - 1];
        const std::vector<int> f = s == 0 ? std::vector<int>(g->size, 0) : phi.at(s);
        const Pointed ps = sets.empty() ? Pointed{1} : sets.at(s);
        const Pointed pb = s == 0 || sets.empty() ? Pointed{1} : sets.at(s - 1);
        const std::vector<int> h = s == 0 || psi.empty() ? std::vector<int>(ps.n, 0) : psi.at(s);
        if (!is_hom(*g, *below, f)) throw std::invalid_argument("group tower: phi is not a homomorphism at level " + std::to_string(s));
        if (static_cast<int>(h.size()) != ps.n || h[0] != 0)
            throw std::invalid_argument("group tower: psi is not a pointed map at level " + std::to_string(s));
        for (int y : h)
            if (y < 0 || y >= pb.n) throw std::invalid_argument("group tower: psi leaves its target at level " + std::to_string(s));

        TowerLevel l;
        l.pi_x = {g};
        std::vector<int> embed;
        const Subgroup ker = span(*g, preimage_of(f, trivial_subgroup()));
        l.pi_f = {share(subgroup_as_group(*g, ker, &embed))};
        l.pi0_x = ps;
        std::vector<int> fibre;  // points over the base point, base first
        for (int x = 0; x < ps.n; ++x)
            if (h[x] == 0) fibre.push_back(x);
        std::vector<int> reps;
        const Subgroup im = span(*below, image_of(f, whole(*g).members));
        const auto coset = right_cosets(*below, im, &reps);
        const int nf = static_cast<int>(fibre.size());
        const int points = static_cast<int>(reps.size()) * nf;
        std::vector<int> act(static_cast<std::size_t>(points) * below->size);
        for (int c = 0; c < static_cast<int>(reps.size()); ++c)
            for (int i = 0; i < nf; ++i)
                for (int e = 0; e < below->size; ++e)
                    act[static_cast<std::size_t>(c * nf + i) * below->size + e] = coset[below->add(reps[c], e)] * nf + i;
        l.pi0_f = make_action(points, below, act);
        l.f_star = {h, f};
        l.i_star = {std::vector<int>(points), embed};
        for (int c = 0; c < static_cast<int>(reps.size()); ++c)
            for (int i = 0; i < nf; ++i) l.i_star[0][c * nf + i] = fibre[i];
        std::vector<int> d1(below->size);
        for (int e = 0; e < below->size; ++e) d1[e] = coset[e] * nf;
        l.delta = {{}, d1};
        t.levels.push_back(std::move(l));
    }
    validate_tower(t);
    return t;
}

BigradedCouple<PairCat> tower_couple_ngp(const Tower& t) {
    validate_tower(t);
    if (!t.path_connected()) throw std::invalid_argument("tower is not path-connected; its couple lives in Nac");
    const int levels = static_cast<int>(t.levels.size());
    BigradedCouple<PairCat> x;
    x.n_lo = 0;
    x.n_hi = t.depth;
    x.p_lo = -levels;
    x.p_hi = 0;
    x.below = Extend::Constant;
    x.above = Extend::Zero;
    x.zero = {trivial(), trivial_subgroup()};
    auto grp = [](const GroupRef& g) { return GroupPair{g, trivial_subgroup()}; };
    for (int p = -levels; p <= 0; ++p)
        for (int n = 0; n < t.depth; ++n) x.D[{n, p}] = grp(pi_x(t, -p - 1, n + 1));
    for (int p = -levels + 1; p <= 0; ++p) {
        const int s = -p;
        const auto& l = t.levels[s];
        const GroupRef base = pi_x(t, s - 1, 1);
        const Subgroup h = span(*base, image_of(l.f_star[1], whole(*l.pi_x[0]).members));
        x.E[{0, p}] = GroupPair{base, h};
        x.v[{0, p}] = PairMap{x.D.at({0, p}), x.E.at({0, p}), identity_map(base->size)};
        for (int n = 1; n <= t.depth; ++n) {
            x.E[{n, p}] = grp(l.pi_f[n - 1]);
            x.del[{n, p}] = PairMap{x.E.at({n, p}), x.D.at({n - 1, p - 1}), l.i_star[n]};
            if (n < t.depth) x.v[{n, p}] = PairMap{x.D.at({n, p}), x.E.at({n, p}), l.delta[n + 1]};
        }
        for (int n = 0; n < t.depth; ++n) x.u[{n, p}] = PairMap{x.D.at({n, p - 1}), x.D.at({n, p}), l.f_star[n + 1]};
    }
    return x;
}

BigradedCouple<ActionCat> tower_couple_nac(const Tower& t) {
    validate_tower(t);
    const int levels = static_cast<int>(t.levels.size());
    BigradedCouple<ActionCat> x;
    x.n_lo = 0;
    x.n_hi = t.depth + 1;
    x.p_lo = -levels;
    x.p_hi = 0;
    x.quasi = true;
    x.below = Extend::Constant;
    x.above = Extend::Zero;
    x.zero = functor_U(Pointed{1});
    auto grp = [](const GroupRef& g) { return regular_action(GroupObj{g}); };
    for (int p = -levels; p <= 0; ++p) {
        x.D[{0, p}] = functor_U(pi0_x(t, -p - 1));
        for (int n = 1; n <= t.depth; ++n) x.D[{n, p}] = grp(pi_x(t, -p - 1, n));
    }
    for (int p = -levels + 1; p <= 0; ++p) {
        const int s = -p;
        const auto& l = t.levels[s];
        const GroupRef base = pi_x(t, s - 1, 1);
        x.u[{0, p}] = ActionMap{x.D.at({0, p - 1}), x.D.at({0, p}), l.f_star[0], {0}};
        for (int n = 1; n <= t.depth; ++n)
            x.u[{n, p}] = regular_action(GroupHom{{l.pi_x[n - 1]}, {pi_x(t, s - 1, n)}, l.f_star[n]});
        x.E[{1, p}] = l.pi0_f;
        x.v[{1, p}] = ActionMap{x.D.at({1, p}), l.pi0_f, l.delta[1], identity_map(base->size)};
        x.del[{1, p}] = ActionMap{l.pi0_f, x.D.at({0, p - 1}), l.i_star[0], std::vector<int>(base->size, 0)};
        for (int n = 2; n <= t.depth + 1; ++n) {
            x.E[{n, p}] = grp(l.pi_f[n - 2]);
            x.del[{n, p}] = regular_action(GroupHom{{l.pi_f[n - 2]}, {l.pi_x[n - 2]}, l.i_star[n - 1]});
            if (n <= t.depth) x.v[{n, p}] = regular_action(GroupHom{{pi_x(t, s - 1, n)}, {l.pi_f[n - 2]}, l.delta[n]});
        }
    }
    return x;
}

json tower_json(const Tower& t) {
    json levels = json::array();
    for (const auto& l : t.levels) {
        json px = json::array(), pf = json::array();
        for (const auto& g : l.pi_x) px.push_back(group_json(*g));
        for (const auto& g : l.pi_f) pf.push_back(group_json(*g));
        levels.push_back({{"pi_x", px},
                          {"pi_f", pf},
                          {"pi0_x", l.pi0_x.n},
                          {"pi0_f", action_json(l.pi0_f)},
                          {"f_star", l.f_star},
                          {"i_star", l.i_star},
                          {"delta", l.delta}});
    }
    return {{"depth", t.depth}, {"levels", levels}};
}

Tower tower_from_json(const json& j) {
    Tower t;
    t.depth = j.at("depth").get<int>();
    for (const auto& lj : j.at("levels")) {
        TowerLevel l;
        for (const auto& g : lj.at("pi_x")) l.pi_x.push_back(group_from_json(g));
        for (const auto& g : lj.at("pi_f")) l.pi_f.push_back(group_from_json(g));
        l.pi0_x = Pointed{lj.at("pi0_x").get<int>()};
        l.pi0_f = action_from_json(lj.at("pi0_f"));
        l.f_star = lj.at("f_star").get<std::vector<std::vector<int>>>();
        l.i_star = lj.at("i_star").get<std::vector<std::vector<int>>>();
        l.delta = lj.at("delta").get<std::vector<std::vector<int>>>();
        t.levels.push_back(std::move(l));
    }
    validate_tower(t);
    return t;
}

}  // namespace homolog
