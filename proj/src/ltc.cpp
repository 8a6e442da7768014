#include "homolog/ltc.hpp"

#include <stdexcept>

namespace homolog {

void validate_connection(const Connection& f) {
    const FinLattice& x = f.dom;
    const FinLattice& y = f.cod;
    if (static_cast<int>(f.lower.size()) != x.size || static_cast<int>(f.upper.size()) != y.size)
        throw std::invalid_argument("connection tables have the wrong size");
    for (int v : f.lower)
        if (v < 0 || v >= y.size) throw std::invalid_argument("lower adjoint out of range");
    for (int v : f.upper)
        if (v < 0 || v >= x.size) throw std::invalid_argument("upper adjoint out of range");
    for (int a = 0; a < x.size; ++a)
        for (int b = 0; b < x.size; ++b)
            if (x.leq(a, b) && !y.leq(f.lower[a], f.lower[b])) throw std::invalid_argument("lower adjoint not increasing");
    for (int a = 0; a < y.size; ++a)
        for (int b = 0; b < y.size; ++b)
            if (y.leq(a, b) && !x.leq(f.upper[a], f.upper[b])) throw std::invalid_argument("upper adjoint not increasing");
    for (int a = 0; a < x.size; ++a)
        if (!x.leq(a, f.upper[f.lower[a]])) throw std::invalid_argument("upper(lower(x)) >= x fails");
    for (int b = 0; b < y.size; ++b)
        if (!y.leq(f.lower[f.upper[b]], b)) throw std::invalid_argument("lower(upper(y)) <= y fails");
}

bool is_connection(const Connection& f) {
    try {
        validate_connection(f);
        return true;
    } catch (const std::invalid_argument&) {
        return false;
    }
}

Connection make_connection(const FinLattice& x, const FinLattice& y, std::vector<int> lower, std::vector<int> upper) {
    Connection f{x, y, std::move(lower), std::move(upper)};
    validate_connection(f);
    return f;
}

Connection from_lower(const FinLattice& x, const FinLattice& y, const std::vector<int>& lower) {
    std::vector<int> upper(y.size);
    for (int b = 0; b < y.size; ++b) {
        int best = x.bottom;
        for (int a = 0; a < x.size; ++a)
            if (y.leq(lower.at(a), b)) best = x.join(best, a);
        if (!y.leq(lower[best], b)) throw std::invalid_argument("lower map does not preserve joins");
        upper[b] = best;
    }
    return make_connection(x, y, lower, upper);
}

Connection identity_connection(const FinLattice& x) {
    std::vector<int> id(x.size);
    for (int i = 0; i < x.size; ++i) id[i] = i;
    return {x, x, id, id};
}

Connection zero_connection(const FinLattice& x, const FinLattice& y) {
    return {x, y, std::vector<int>(x.size, y.bottom), std::vector<int>(y.size, x.top)};
}

Connection compose(const Connection& g, const Connection& f) {
    if (!(f.cod == g.dom)) throw std::invalid_argument("connections are not composable");
    Connection h{f.dom, g.cod, std::vector<int>(f.dom.size), std::vector<int>(g.cod.size)};
    for (int a = 0; a < f.dom.size; ++a) h.lower[a] = g.lower[f.lower[a]];
    for (int b = 0; b < g.cod.size; ++b) h.upper[b] = f.upper[g.upper[b]];
    return h;
}

bool same_connection(const Connection& f, const Connection& g) {
    return f.lower == g.lower && f.upper == g.upper && f.dom == g.dom && f.cod == g.cod;
}

bool is_exact_connection(const Connection& f) {
    const FinLattice& x = f.dom;
    const FinLattice& y = f.cod;
    const int kernel = f.upper[y.bottom];
    const int image = f.lower[x.top];
    for (int a = 0; a < x.size; ++a)
        if (f.upper[f.lower[a]] != x.join(a, kernel)) return false;
    for (int b = 0; b < y.size; ++b)
        if (f.lower[f.upper[b]] != y.meet(b, image)) return false;
    return true;
}

bool is_modular_connection(const Connection& f) {
    const FinLattice& x = f.dom;
    const FinLattice& y = f.cod;
    if (!is_modular_lattice(x) || !is_modular_lattice(y))
        throw std::invalid_argument("modular connection test needs modular lattices");
    for (int a = 0; a < x.size; ++a)
        for (int b = 0; b < y.size; ++b) {
            if (f.upper[y.join(f.lower[a], b)] != x.join(a, f.upper[b])) return false;
            if (f.lower[x.meet(f.upper[b], a)] != y.meet(b, f.lower[a])) return false;
        }
    return true;
}

FinLattice opposite(const FinLattice& l) {
    std::vector<std::vector<bool>> le(l.size, std::vector<bool>(l.size));
    for (int a = 0; a < l.size; ++a)
        for (int b = 0; b < l.size; ++b) le[a][b] = l.leq(b, a);
    return FinLattice::from_leq(l.size, le);
}

// In the opposite lattices the old upper adjoint becomes the lower one.
Connection dual(const Connection& f) { return {opposite(f.cod), opposite(f.dom), f.upper, f.lower}; }

namespace {
FinLattice restrict_to(const FinLattice& x, const std::vector<int>& keep) {
    const int n = static_cast<int>(keep.size());
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) le[a][b] = x.leq(keep[a], keep[b]);
    return FinLattice::from_leq(n, le);
}

std::vector<int> index_of(const std::vector<int>& embed, int size) {
    std::vector<int> idx(size, -1);
    for (size_t i = 0; i < embed.size(); ++i) idx[embed[i]] = static_cast<int>(i);
    return idx;
}
}  // namespace

FinLattice down_set(const FinLattice& x, int a, std::vector<int>* embed) {
    std::vector<int> keep;
    for (int e = 0; e < x.size; ++e)
        if (x.leq(e, a)) keep.push_back(e);
    if (embed) *embed = keep;
    return restrict_to(x, keep);
}

FinLattice up_set(const FinLattice& x, int a, std::vector<int>* embed) {
    std::vector<int> keep;
    for (int e = 0; e < x.size; ++e)
        if (x.leq(a, e)) keep.push_back(e);
    if (embed) *embed = keep;
    return restrict_to(x, keep);
}

ShortExact element_sequence(const FinLattice& x, int a) {
    std::vector<int> down, up;
    FinLattice d = down_set(x, a, &down);
    FinLattice u = up_set(x, a, &up);
    auto di = index_of(down, x.size);
    auto ui = index_of(up, x.size);
    Connection m{d, x, down, std::vector<int>(x.size)};
    for (int e = 0; e < x.size; ++e) m.upper[e] = di[x.meet(e, a)];
    Connection p{x, u, std::vector<int>(x.size), up};
    for (int e = 0; e < x.size; ++e) p.lower[e] = ui[x.join(e, a)];
    return {m, p};
}

Biproduct biproduct(const FinLattice& x, const FinLattice& y) {
    Biproduct b{product_lattice(x, y), {}, {}, {}, {}};
    const int ny = y.size;
    const int n = x.size * ny;
    auto at = [ny](int a, int c) { return a * ny + c; };
    b.i = {x, b.prod, std::vector<int>(x.size), std::vector<int>(n)};
    b.p = {b.prod, x, std::vector<int>(n), std::vector<int>(x.size)};
    b.j = {y, b.prod, std::vector<int>(ny), std::vector<int>(n)};
    b.q = {b.prod, y, std::vector<int>(n), std::vector<int>(ny)};
    for (int a = 0; a < x.size; ++a) {
        b.i.lower[a] = at(a, y.bottom);
        b.p.upper[a] = at(a, y.top);
    }
    for (int c = 0; c < ny; ++c) {
        b.j.lower[c] = at(x.bottom, c);
        b.q.upper[c] = at(x.top, c);
    }
    for (int e = 0; e < n; ++e) {
        b.i.upper[e] = b.p.lower[e] = e / ny;
        b.j.upper[e] = b.q.lower[e] = e % ny;
    }
    return b;
}

Connection sum(const Connection& f, const Connection& g) {
    if (!(f.dom == g.dom) || !(f.cod == g.cod)) throw std::invalid_argument("sum of non-parallel connections");
    Connection h{f.dom, f.cod, std::vector<int>(f.dom.size), std::vector<int>(f.cod.size)};
    for (int a = 0; a < f.dom.size; ++a) h.lower[a] = f.cod.join(f.lower[a], g.lower[a]);
    for (int b = 0; b < f.cod.size; ++b) h.upper[b] = f.dom.meet(f.upper[b], g.upper[b]);
    validate_connection(h);
    return h;
}

bool connection_leq(const Connection& f, const Connection& g) {
    for (int a = 0; a < f.dom.size; ++a)
        if (!f.cod.leq(f.lower[a], g.lower[a])) return false;
    return true;
}

std::vector<Connection> all_connections(const FinLattice& x, const FinLattice& y) {
    std::vector<Connection> out;
    std::vector<int> lower(x.size, 0);
    for (;;) {
        bool ok = lower[x.bottom] == y.bottom;
        for (int a = 0; a < x.size && ok; ++a)
            for (int b = 0; b < x.size && ok; ++b)
                if (lower[x.join(a, b)] != y.join(lower[a], lower[b])) ok = false;
        if (ok) out.push_back(from_lower(x, y, lower));
        int k = 0;
        while (k < x.size && ++lower[k] == y.size) lower[k++] = 0;
        if (k == x.size) break;
    }
    return out;
}

json lattice_json(const FinLattice& l) {
    std::vector<std::vector<bool>> le(l.size, std::vector<bool>(l.size));
    for (int a = 0; a < l.size; ++a)
        for (int b = 0; b < l.size; ++b) le[a][b] = l.leq(a, b);
    return {{"size", l.size}, {"leq", le}};
}

FinLattice lattice_from_json(const json& j) {
    return FinLattice::from_leq(j.at("size").get<int>(), j.at("leq").get<std::vector<std::vector<bool>>>());
}

json connection_json(const Connection& f) {
    return {{"dom", lattice_json(f.dom)}, {"cod", lattice_json(f.cod)}, {"lower", f.lower}, {"upper", f.upper}};
}

Connection connection_from_json(const json& j) {
    return make_connection(lattice_from_json(j.at("dom")), lattice_from_json(j.at("cod")),
                           j.at("lower").get<std::vector<int>>(), j.at("upper").get<std::vector<int>>());
}

bool LtcCat::is_null(const Mor& f) const {
    for (int v : f.lower)
        if (v != f.cod.bottom) return false;
    return true;
}

LtcCat::Mor LtcCat::kernel(const Mor& f) const { return element_sequence(f.dom, f.upper[f.cod.bottom]).m; }

LtcCat::Mor LtcCat::cokernel(const Mor& f) const { return element_sequence(f.cod, f.lower[f.dom.top]).p; }

std::optional<LtcCat::Mor> LtcCat::lift(const Mor& m, const Mor& a) const {
    if (!(m.cod == a.cod)) return std::nullopt;
    std::vector<int> back(m.cod.size, -1);
    for (int k = 0; k < m.dom.size; ++k) {
        if (back[m.lower[k]] >= 0) return std::nullopt;
        back[m.lower[k]] = k;
    }
    Connection x{a.dom, m.dom, std::vector<int>(a.dom.size), std::vector<int>(m.dom.size)};
    for (int z = 0; z < a.dom.size; ++z) {
        x.lower[z] = back[a.lower[z]];
        if (x.lower[z] < 0) return std::nullopt;
    }
    for (int k = 0; k < m.dom.size; ++k) x.upper[k] = a.upper[m.lower[k]];
    if (!is_connection(x) || !same_connection(compose(m, x), a)) return std::nullopt;
    return x;
}

std::optional<LtcCat::Mor> LtcCat::descend(const Mor& p, const Mor& a) const {
    if (!(p.dom == a.dom)) return std::nullopt;
    std::vector<int> back(p.dom.size, -1);
    for (int q = 0; q < p.cod.size; ++q) {
        if (back[p.upper[q]] >= 0) return std::nullopt;
        back[p.upper[q]] = q;
    }
    Connection x{p.cod, a.cod, std::vector<int>(p.cod.size), std::vector<int>(a.cod.size)};
    for (int w = 0; w < a.cod.size; ++w) {
        x.upper[w] = back[a.upper[w]];
        if (x.upper[w] < 0) return std::nullopt;
    }
    for (int q = 0; q < p.cod.size; ++q) x.lower[q] = a.lower[p.upper[q]];
    if (!is_connection(x) || !same_connection(compose(x, p), a)) return std::nullopt;
    return x;
}

bool LtcCat::is_iso(const Mor& f) const {
    if (f.dom.size != f.cod.size) return false;
    for (int a = 0; a < f.dom.size; ++a)
        if (f.upper[f.lower[a]] != a) return false;
    for (int b = 0; b < f.cod.size; ++b)
        if (f.lower[f.upper[b]] != b) return false;
    return true;
}

LtcCat::Mor LtcCat::inverse(const Mor& f) const {
    if (!is_iso(f)) throw std::invalid_argument("connection is not invertible");
    return {f.cod, f.dom, f.upper, f.lower};
}

std::vector<LtcCat::Sub> LtcCat::subobjects(const Obj& a) const {
    std::vector<Sub> v(a.size);
    for (int i = 0; i < a.size; ++i) v[i] = i;
    return v;
}

}  // namespace homolog
