#include "homolog/finite.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>

namespace homolog {

bool FinGroup::abelian() const {
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < a; ++b)
            if (add(a, b) != add(b, a)) return false;
    return true;
}

Table FinGroup::to_table() const {
    Table t(size, std::vector<int>(size));
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b) t[a][b] = add(a, b);
    return t;
}

FinGroup FinGroup::from_table(const Table& t) {
    const int n = static_cast<int>(t.size());
    if (n == 0) throw std::invalid_argument("group table is empty");
    FinGroup g;
    g.size = n;
    g.table.assign(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(t[a].size()) != n) throw std::invalid_argument("group table is not square");
        for (int b = 0; b < n; ++b) {
            int v = t[a][b];
            if (v < 0 || v >= n) throw std::invalid_argument("group table entry out of range");
            g.table[static_cast<size_t>(a) * n + b] = v;
        }
    }
    for (int a = 0; a < n; ++a)
        if (g.add(0, a) != a || g.add(a, 0) != a) throw std::invalid_argument("element 0 is not the identity");
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g.add(g.add(a, b), c) != g.add(a, g.add(b, c)))
                    throw std::invalid_argument("group table is not associative");
    g.neg.assign(n, -1);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b)
            if (g.add(a, b) == 0 && g.add(b, a) == 0) {
                g.neg[a] = b;
                break;
            }
        if (g.neg[a] < 0) throw std::invalid_argument("element without inverse");
    }
    return g;
}

GroupRef share(FinGroup g) { return std::make_shared<const FinGroup>(std::move(g)); }

bool same_group(const GroupRef& a, const GroupRef& b) { return a == b || *a == *b; }

bool Subgroup::contains(int x) const { return std::binary_search(members.begin(), members.end(), x); }

Subgroup trivial_subgroup() { return Subgroup{}; }

Subgroup whole(const FinGroup& g) {
    Subgroup h;
    h.members.resize(g.size);
    for (int i = 0; i < g.size; ++i) h.members[i] = i;
    return h;
}

bool is_subgroup(const FinGroup& g, const std::vector<int>& xs) {
    std::vector<char> in(g.size, 0);
    for (int x : xs) {
        if (x < 0 || x >= g.size) return false;
        in[x] = 1;
    }
    if (!in[0]) return false;
    for (int a : xs) {
        if (!in[g.inv(a)]) return false;
        for (int b : xs)
            if (!in[g.add(a, b)]) return false;
    }
    return true;
}

bool subset_of(const Subgroup& a, const Subgroup& b) {
    return std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
}

Subgroup meet(const Subgroup& a, const Subgroup& b) {
    Subgroup r;
    r.members.clear();
    std::set_intersection(a.members.begin(), a.members.end(), b.members.begin(), b.members.end(),
                          std::back_inserter(r.members));
    return r;
}

Subgroup join(const FinGroup& g, const Subgroup& a, const Subgroup& b) {
    std::vector<int> xs = a.members;
    xs.insert(xs.end(), b.members.begin(), b.members.end());
    return span(g, xs);
}

Subgroup span(const FinGroup& g, const std::vector<int>& xs) {
    std::vector<char> in(g.size, 0);
    std::vector<int> members{0};
    std::vector<int> gens;
    in[0] = 1;
    for (int x : xs) {
        if (x < 0 || x >= g.size) throw std::out_of_range("span: element index out of range");
        if (in[x]) continue;
        // x is new, so the subgroup at least doubles: few generators, each closure pass is linear
        gens.push_back(x);
        for (size_t i = 0; i < members.size(); ++i)
            for (int s : gens) {
                const int y = g.add(members[i], s);
                if (!in[y]) {
                    in[y] = 1;
                    members.push_back(y);
                }
            }
    }
    std::sort(members.begin(), members.end());
    return Subgroup{members};
}

Subgroup invariant_closure(const FinGroup& g, const Subgroup& h) {
    Subgroup cur = span(g, h.members);
    for (;;) {
        std::vector<int> xs = cur.members;
        for (int s = 0; s < g.size; ++s)
            for (int x : cur.members) {
                const int c = g.sub(g.add(s, x), s);
                if (!cur.contains(c)) xs.push_back(c);
            }
        if (xs.size() == cur.members.size()) return cur;
        cur = span(g, xs);
    }
}

bool is_normal(const FinGroup& g, const Subgroup& h) {
    for (int s = 0; s < g.size; ++s)
        for (int x : h.members)
            if (!h.contains(g.sub(g.add(s, x), s))) return false;
    return true;
}

std::vector<Subgroup> all_subgroups(const FinGroup& g) {
    std::set<Subgroup> seen;
    std::vector<Subgroup> todo{trivial_subgroup()};
    seen.insert(todo.front());
    while (!todo.empty()) {
        Subgroup h = todo.back();
        todo.pop_back();
        for (int x = 0; x < g.size; ++x) {
            if (h.contains(x)) continue;
            std::vector<int> xs = h.members;
            xs.push_back(x);
            Subgroup k = span(g, xs);
            if (seen.insert(k).second) todo.push_back(k);
        }
    }
    std::vector<Subgroup> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const Subgroup& a, const Subgroup& b) { return a.order() < b.order(); });
    return out;
}

Quotient quotient_group(const FinGroup& g, const Subgroup& n) {
    if (!is_subgroup(g, n.members)) throw std::invalid_argument("quotient_group: not a subgroup");
    if (!is_normal(g, n)) throw std::invalid_argument("quotient_group: subgroup is not normal");
    Quotient q;
    q.projection.assign(g.size, -1);
    for (int x = 0; x < g.size; ++x) {
        if (q.projection[x] >= 0) continue;
        int idx = static_cast<int>(q.section.size());
        q.section.push_back(x);
        for (int m : n.members) q.projection[g.add(x, m)] = idx;
    }
    // cosets of a normal subgroup form a group, so the table needs no re-validation
    const int k = static_cast<int>(q.section.size());
    q.group.size = k;
    q.group.table.assign(static_cast<size_t>(k) * k, 0);
    q.group.neg.assign(k, 0);
    for (int a = 0; a < k; ++a) {
        q.group.neg[a] = q.projection[g.inv(q.section[a])];
        for (int b = 0; b < k; ++b)
            q.group.table[static_cast<size_t>(a) * k + b] = q.projection[g.add(q.section[a], q.section[b])];
    }
    return q;
}

std::vector<int> right_cosets(const FinGroup& g, const Subgroup& h, std::vector<int>* reps) {
    std::vector<int> cls(g.size, -1);
    if (reps) reps->clear();
    int next = 0;
    for (int s = 0; s < g.size; ++s) {
        if (cls[s] >= 0) continue;
        for (int m : h.members) cls[g.add(m, s)] = next;
        if (reps) reps->push_back(s);
        ++next;
    }
    return cls;
}

FinGroup subgroup_as_group(const FinGroup& g, const Subgroup& h, std::vector<int>* embed) {
    const int k = h.order();
    std::vector<int> index(g.size, -1);
    for (int i = 0; i < k; ++i) index[h.members[i]] = i;
    FinGroup r;
    r.size = k;
    r.table.assign(static_cast<size_t>(k) * k, 0);
    r.neg.assign(k, 0);
    for (int a = 0; a < k; ++a) {
        r.neg[a] = index[g.inv(h.members[a])];
        for (int b = 0; b < k; ++b) r.table[static_cast<size_t>(a) * k + b] = index[g.add(h.members[a], h.members[b])];
    }
    if (embed) *embed = h.members;
    return r;
}

std::vector<int> generators(const FinGroup& g) {
    std::vector<int> gens;
    Subgroup cur = trivial_subgroup();
    for (int x = 1; x < g.size && cur.order() < g.size; ++x) {
        if (cur.contains(x)) continue;
        gens.push_back(x);
        cur = span(g, gens);
    }
    return gens;
}

bool is_hom(const FinGroup& a, const FinGroup& b, const std::vector<int>& f) {
    if (static_cast<int>(f.size()) != a.size) return false;
    for (int x : f)
        if (x < 0 || x >= b.size) return false;
    for (int x = 0; x < a.size; ++x)
        for (int y = 0; y < a.size; ++y)
            if (f[a.add(x, y)] != b.add(f[x], f[y])) return false;
    return true;
}

std::vector<std::vector<int>> all_homs(const FinGroup& a, const FinGroup& b) {
    const std::vector<int> gens = generators(a);
    std::vector<std::vector<int>> out;
    std::vector<int> choice(gens.size(), 0);
    for (;;) {
        std::vector<int> f(a.size, -1);
        f[0] = 0;
        std::vector<int> queue{0};
        bool ok = true;
        for (size_t i = 0; i < queue.size() && ok; ++i) {
            int e = queue[i];
            for (size_t k = 0; k < gens.size(); ++k) {
                int t = a.add(e, gens[k]);
                int v = b.add(f[e], choice[k]);
                if (f[t] < 0) {
                    f[t] = v;
                    queue.push_back(t);
                } else if (f[t] != v) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) out.push_back(std::move(f));
        size_t k = 0;
        while (k < choice.size() && ++choice[k] == b.size) choice[k++] = 0;
        if (k == choice.size()) break;
    }
    return out;
}

std::vector<int> image_of(const std::vector<int>& f, const std::vector<int>& xs) {
    std::vector<int> out;
    out.reserve(xs.size());
    for (int x : xs) out.push_back(f[x]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<int> preimage_of(const std::vector<int>& f, const Subgroup& h) {
    std::vector<int> out;
    for (int x = 0; x < static_cast<int>(f.size()); ++x)
        if (h.contains(f[x])) out.push_back(x);
    return out;
}

FinGroup cyclic(int n) {
    Table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    return FinGroup::from_table(t);
}

FinGroup direct_product(const FinGroup& a, const FinGroup& b) {
    const int n = a.size * b.size;
    Table t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            t[x][y] = a.add(x / b.size, y / b.size) * b.size + b.add(x % b.size, y % b.size);
    return FinGroup::from_table(t);
}

namespace {

using Perm = std::vector<int>;

// Closure of permutations under "apply left, then right"; identity gets index 0.
FinGroup perm_group(const std::vector<Perm>& gens) {
    const int deg = static_cast<int>(gens.front().size());
    Perm id(deg);
    for (int i = 0; i < deg; ++i) id[i] = i;
    std::set<Perm> elems{id};
    std::vector<Perm> todo{id};
    while (!todo.empty()) {
        Perm p = todo.back();
        todo.pop_back();
        for (const Perm& s : gens) {
            Perm q(deg);
            for (int i = 0; i < deg; ++i) q[i] = s[p[i]];
            if (elems.insert(q).second) todo.push_back(q);
        }
    }
    std::vector<Perm> list(elems.begin(), elems.end());
    std::map<Perm, int> index;
    for (size_t i = 0; i < list.size(); ++i) index[list[i]] = static_cast<int>(i);
    const int n = static_cast<int>(list.size());
    Table t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            Perm q(deg);
            for (int i = 0; i < deg; ++i) q[i] = list[b][list[a][i]];
            t[a][b] = index[q];
        }
    return FinGroup::from_table(t);
}

}  // namespace

FinGroup symmetric3() { return perm_group({{1, 0, 2}, {1, 2, 0}}); }

FinGroup dihedral4() { return perm_group({{1, 2, 3, 0}, {0, 3, 2, 1}}); }

FinGroup quaternion8() {
    // index = 2 * unit + sign, units 1, i, j, k
    static const int unit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sgn[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    Table t(8, std::vector<int>(8));
    for (int a = 0; a < 8; ++a)
        for (int b = 0; b < 8; ++b) {
            int ua = a / 2, ub = b / 2;
            int s = (a % 2) ^ (b % 2) ^ sgn[ua][ub];
            t[a][b] = 2 * unit[ua][ub] + s;
        }
    return FinGroup::from_table(t);
}

FinGroup elementary2(int rank) {
    const int n = 1 << rank;
    FinGroup g;
    g.size = n;
    g.table.assign(static_cast<size_t>(n) * n, 0);
    g.neg.resize(n);
    for (int a = 0; a < n; ++a) {
        g.neg[a] = a;
        for (int b = 0; b < n; ++b) g.table[static_cast<size_t>(a) * n + b] = a ^ b;
    }
    return g;
}

std::vector<NamedGroup> small_groups(int max_order) {
    std::vector<NamedGroup> all = {
        {"Z1", share(cyclic(1))},
        {"Z2", share(cyclic(2))},
        {"Z3", share(cyclic(3))},
        {"Z4", share(cyclic(4))},
        {"Z2xZ2", share(elementary2(2))},
        {"Z5", share(cyclic(5))},
        {"Z6", share(cyclic(6))},
        {"S3", share(symmetric3())},
        {"Z7", share(cyclic(7))},
        {"Z8", share(cyclic(8))},
        {"Z4xZ2", share(direct_product(cyclic(4), cyclic(2)))},
        {"Z2^3", share(elementary2(3))},
        {"D4", share(dihedral4())},
        {"Q8", share(quaternion8())},
    };
    std::vector<NamedGroup> out;
    for (auto& g : all)
        if (g.group->size <= max_order) out.push_back(g);
    return out;
}

FinLattice FinLattice::from_leq(int n, const std::vector<std::vector<bool>>& leq) {
    if (n < 1) throw std::invalid_argument("lattice must be non-empty");
    FinLattice l;
    l.size = n;
    l.le.assign(static_cast<size_t>(n) * n, 0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) l.le[static_cast<size_t>(a) * n + b] = leq.at(a).at(b) ? 1 : 0;
    for (int a = 0; a < n; ++a) {
        if (!l.leq(a, a)) throw std::invalid_argument("order is not reflexive");
        for (int b = 0; b < n; ++b) {
            if (a != b && l.leq(a, b) && l.leq(b, a)) throw std::invalid_argument("order is not antisymmetric");
            for (int c = 0; c < n; ++c)
                if (l.leq(a, b) && l.leq(b, c) && !l.leq(a, c)) throw std::invalid_argument("order is not transitive");
        }
    }
    l.meet_t.assign(static_cast<size_t>(n) * n, -1);
    l.join_t.assign(static_cast<size_t>(n) * n, -1);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                if (l.leq(c, a) && l.leq(c, b)) {
                    bool greatest = true;
                    for (int d = 0; d < n && greatest; ++d)
                        if (l.leq(d, a) && l.leq(d, b) && !l.leq(d, c)) greatest = false;
                    if (greatest) l.meet_t[static_cast<size_t>(a) * n + b] = c;
                }
                if (l.leq(a, c) && l.leq(b, c)) {
                    bool least = true;
                    for (int d = 0; d < n && least; ++d)
                        if (l.leq(a, d) && l.leq(b, d) && !l.leq(c, d)) least = false;
                    if (least) l.join_t[static_cast<size_t>(a) * n + b] = c;
                }
            }
            if (l.meet(a, b) < 0 || l.join(a, b) < 0) throw std::invalid_argument("order is not a lattice");
        }
    l.bottom = l.meet(0, 0);
    l.top = l.join(0, 0);
    for (int a = 0; a < n; ++a) {
        l.bottom = l.meet(l.bottom, a);
        l.top = l.join(l.top, a);
    }
    return l;
}

LatticeReport check_lattice(const FinLattice& l) {
    const int n = l.size;
    auto fail = [](std::string s) { return LatticeReport{false, std::move(s)}; };
    const size_t nn = static_cast<size_t>(n) * n;
    if (n < 1 || l.le.size() != nn || l.meet_t.size() != nn || l.join_t.size() != nn)
        return fail("table sizes do not match");
    for (int a = 0; a < n; ++a) {
        if (!l.leq(a, a)) return fail("not reflexive at " + std::to_string(a));
        for (int b = 0; b < n; ++b) {
            if (a != b && l.leq(a, b) && l.leq(b, a))
                return fail("not antisymmetric at (" + std::to_string(a) + "," + std::to_string(b) + ")");
            for (int c = 0; c < n; ++c)
                if (l.leq(a, b) && l.leq(b, c) && !l.leq(a, c))
                    return fail("not transitive at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                                std::to_string(c) + ")");
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const std::string at = "(" + std::to_string(a) + "," + std::to_string(b) + ")";
            int m = l.meet(a, b), j = l.join(a, b);
            if (m < 0 || m >= n || j < 0 || j >= n) return fail("table entry out of range at " + at);
            if (!l.leq(m, a) || !l.leq(m, b)) return fail("meet is not a lower bound at " + at);
            if (!l.leq(a, j) || !l.leq(b, j)) return fail("join is not an upper bound at " + at);
            for (int c = 0; c < n; ++c) {
                if (l.leq(c, a) && l.leq(c, b) && !l.leq(c, m)) return fail("meet is not greatest at " + at);
                if (l.leq(a, c) && l.leq(b, c) && !l.leq(j, c)) return fail("join is not least at " + at);
            }
        }
    if (l.bottom < 0 || l.bottom >= n || l.top < 0 || l.top >= n) return fail("bounds out of range");
    for (int a = 0; a < n; ++a)
        if (!l.leq(l.bottom, a) || !l.leq(a, l.top)) return fail("bounds violated at " + std::to_string(a));
    return {};
}

bool is_modular_lattice(const FinLattice& l) {
    for (int x = 0; x < l.size; ++x)
        for (int z = 0; z < l.size; ++z) {
            if (!l.leq(x, z)) continue;
            for (int y = 0; y < l.size; ++y)
                if (l.join(x, l.meet(y, z)) != l.meet(l.join(x, y), z)) return false;
        }
    return true;
}

bool is_distributive_lattice(const FinLattice& l) {
    for (int x = 0; x < l.size; ++x)
        for (int y = 0; y < l.size; ++y)
            for (int z = 0; z < l.size; ++z)
                if (l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z))) return false;
    return true;
}

FinLattice chain(int n) {
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) le[a][b] = a <= b;
    return FinLattice::from_leq(n, le);
}

FinLattice boolean_lattice(int atoms) {
    const int n = 1 << atoms;
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) le[a][b] = (a & b) == a;
    return FinLattice::from_leq(n, le);
}

namespace {
FinLattice five(const std::vector<std::pair<int, int>>& covers) {
    std::vector<std::vector<bool>> le(5, std::vector<bool>(5, false));
    for (int i = 0; i < 5; ++i) le[i][i] = true;
    for (auto [a, b] : covers) le[a][b] = true;
    for (int k = 0; k < 5; ++k)
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                if (le[i][k] && le[k][j]) le[i][j] = true;
    return FinLattice::from_leq(5, le);
}
}  // namespace

// 0, a, b, c, 1 with a < b and c off to the side
FinLattice pentagon() { return five({{0, 1}, {1, 2}, {2, 4}, {0, 3}, {3, 4}}); }

FinLattice diamond() { return five({{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}}); }

FinLattice product_lattice(const FinLattice& x, const FinLattice& y) {
    const int n = x.size * y.size;
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) le[a][b] = x.leq(a / y.size, b / y.size) && y.leq(a % y.size, b % y.size);
    return FinLattice::from_leq(n, le);
}

FinLattice subgroup_lattice(const FinGroup& g, std::vector<Subgroup>* labels) {
    std::vector<Subgroup> subs = all_subgroups(g);
    const int n = static_cast<int>(subs.size());
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) le[a][b] = subset_of(subs[a], subs[b]);
    if (labels) *labels = subs;
    return FinLattice::from_leq(n, le);
}

std::vector<FinLattice> small_lattices(int max_size) {
    std::vector<FinLattice> out;
    for (int n = 1; n <= std::min(max_size, 4); ++n) out.push_back(chain(n));
    if (max_size >= 4) out.push_back(boolean_lattice(2));
    if (max_size >= 5) {
        out.push_back(chain(5));
        out.push_back(pentagon());
        out.push_back(diamond());
    }
    return out;
}

}  // namespace homolog
