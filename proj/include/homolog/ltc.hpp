#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homolog/finite.hpp"
#include "homolog/semiexact.hpp"

namespace homolog {

// A covariant Galois connection lower -| upper between finite lattices.
struct Connection {
    FinLattice dom, cod;
    std::vector<int> lower;  // dom -> cod
    std::vector<int> upper;  // cod -> dom
};

// Throws std::invalid_argument unless both maps are increasing and adjoint.
void validate_connection(const Connection& f);
bool is_connection(const Connection& f);

Connection make_connection(const FinLattice& x, const FinLattice& y, std::vector<int> lower, std::vector<int> upper);
// Upper adjoint recovered as upper(y) = max{x | lower(x) <= y}.
Connection from_lower(const FinLattice& x, const FinLattice& y, const std::vector<int>& lower);

Connection identity_connection(const FinLattice& x);
Connection zero_connection(const FinLattice& x, const FinLattice& y);
Connection compose(const Connection& g, const Connection& f);
bool same_connection(const Connection& f, const Connection& g);

bool is_exact_connection(const Connection& f);
// Throws std::invalid_argument if either lattice is not modular.
bool is_modular_connection(const Connection& f);

// Opposite lattices, connection reversed.
FinLattice opposite(const FinLattice& l);
Connection dual(const Connection& f);

// Sub-lattice below / above an element, elements in increasing index order.
FinLattice down_set(const FinLattice& x, int a, std::vector<int>* embed = nullptr);
FinLattice up_set(const FinLattice& x, int a, std::vector<int>* embed = nullptr);

struct ShortExact {
    Connection m, p;
};
ShortExact element_sequence(const FinLattice& x, int a);

struct Biproduct {
    FinLattice prod;
    Connection i, j, p, q;
};
Biproduct biproduct(const FinLattice& x, const FinLattice& y);

Connection sum(const Connection& f, const Connection& g);
// f <= g in the pointwise order of lower adjoints.
bool connection_leq(const Connection& f, const Connection& g);

std::vector<Connection> all_connections(const FinLattice& x, const FinLattice& y);

json lattice_json(const FinLattice& l);
FinLattice lattice_from_json(const json& j);
json connection_json(const Connection& f);
Connection connection_from_json(const json& j);

class LtcCat {
public:
    using Obj = FinLattice;
    using Mor = Connection;
    using Sub = int;  // normal subobjects of X are the down-sets of its elements

    explicit LtcCat(Bounds b = {}) : bounds_(b) {}
    std::string name() const { return "Ltc"; }
    const Obj& dom(const Mor& f) const { return f.dom; }
    const Obj& cod(const Mor& f) const { return f.cod; }
    Mor compose(const Mor& g, const Mor& f) const { return homolog::compose(g, f); }
    Mor identity(const Obj& a) const { return identity_connection(a); }
    bool is_null(const Mor& f) const;
    bool equal(const Mor& f, const Mor& g) const { return same_connection(f, g); }
    Mor kernel(const Mor& f) const;
    Mor cokernel(const Mor& f) const;
    std::optional<Mor> lift(const Mor& m, const Mor& a) const;
    std::optional<Mor> descend(const Mor& p, const Mor& a) const;
    bool is_iso(const Mor& f) const;
    Mor inverse(const Mor& f) const;
    Sub kernel_sub(const Mor& f) const { return f.upper[f.cod.bottom]; }
    Sub image_sub(const Mor& f) const { return f.lower[f.dom.top]; }
    Mor sub_mono(const Obj& a, Sub x) const { return element_sequence(a, x).m; }
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj& a, Sub x, Sub y) const { return a.leq(x, y); }
    Sub sub_meet(const Obj& a, Sub x, Sub y) const { return a.meet(x, y); }
    Sub sub_join(const Obj& a, Sub x, Sub y) const { return a.join(x, y); }
    Sub sub_bottom(const Obj& a) const { return a.bottom; }
    Sub sub_top(const Obj& a) const { return a.top; }
    Sub direct_image(const Mor& f, Sub x) const { return f.lower[x]; }
    Sub inverse_image(const Mor& f, Sub y) const { return f.upper[y]; }
    std::vector<Obj> objects() const { return small_lattices(bounds_.max_set); }
    std::vector<Obj> probes() const { return {chain(1), chain(2)}; }
    std::vector<Mor> homs(const Obj& a, const Obj& b) const { return all_connections(a, b); }
    json obj_json(const Obj& a) const { return lattice_json(a); }
    json mor_json(const Mor& f) const { return connection_json(f); }
    json sub_json(const Obj&, Sub x) const { return x; }

private:
    Bounds bounds_;
};

}  // namespace homolog
