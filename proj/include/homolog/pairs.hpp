#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homolog/finite.hpp"
#include "homolog/semiexact.hpp"

namespace homolog {

// ---- pairs of sets ----------------------------------------------------------

// (X, X0) with X = {0..n-1}; base is the bitmask of X0.
struct SetPair {
    int n = 0;
    unsigned base = 0;
    unsigned full() const { return n == 0 ? 0u : ((1u << n) - 1u); }
    bool operator==(const SetPair&) const = default;
};

struct SetPairMap {
    SetPair dom, cod;
    std::vector<int> map;
};

bool is_pair_map(const SetPairMap& f);
unsigned image_mask(const std::vector<int>& f, unsigned xs);
unsigned preimage_mask(const std::vector<int>& f, unsigned ys);

class Set2Cat {
public:
    using Obj = SetPair;
    using Mor = SetPairMap;
    using Sub = unsigned;  // X0 <= A <= X

    explicit Set2Cat(Bounds b = {}) : bounds_(b) {}
    std::string name() const { return "Set2"; }
    const Obj& dom(const Mor& f) const { return f.dom; }
    const Obj& cod(const Mor& f) const { return f.cod; }
    Mor compose(const Mor& g, const Mor& f) const;
    Mor identity(const Obj& a) const;
    bool is_null(const Mor& f) const { return (image_mask(f.map, f.dom.full()) & ~f.cod.base) == 0; }
    bool equal(const Mor& f, const Mor& g) const { return f.dom == g.dom && f.cod == g.cod && f.map == g.map; }
    Mor kernel(const Mor& f) const { return sub_mono(f.dom, kernel_sub(f)); }
    Mor cokernel(const Mor& f) const;
    std::optional<Mor> lift(const Mor& m, const Mor& a) const;
    std::optional<Mor> descend(const Mor& p, const Mor& a) const;
    bool is_iso(const Mor& f) const;
    Mor inverse(const Mor& f) const;
    Sub kernel_sub(const Mor& f) const { return preimage_mask(f.map, f.cod.base); }
    Sub image_sub(const Mor& f) const { return f.cod.base | image_mask(f.map, f.dom.full()); }
    Mor sub_mono(const Obj& a, Sub x) const;
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj&, Sub x, Sub y) const { return (x & ~y) == 0; }
    Sub sub_meet(const Obj&, Sub x, Sub y) const { return x & y; }
    Sub sub_join(const Obj&, Sub x, Sub y) const { return x | y; }
    Sub sub_bottom(const Obj& a) const { return a.base; }
    Sub sub_top(const Obj& a) const { return a.full(); }
    Sub direct_image(const Mor& f, Sub x) const { return f.cod.base | image_mask(f.map, x); }
    Sub inverse_image(const Mor& f, Sub y) const { return preimage_mask(f.map, y); }
    // One pair per isomorphism class: X0 = {0..k-1}.
    std::vector<Obj> objects() const;
    std::vector<Obj> probes() const;
    std::vector<Mor> homs(const Obj& a, const Obj& b) const;
    json obj_json(const Obj& a) const;
    json mor_json(const Mor& f) const;
    json sub_json(const Obj& a, Sub x) const;

private:
    Bounds bounds_;
};

SetPair set2_tensor(const SetPair& p, const SetPair& q);  // element (x, y) is x * |Y| + y
SetPairMap set2_tensor_map(const SetPairMap& f, const SetPairMap& g);
SetPair set2_unit();

// Hom(P, Q) with its elements listed in enumeration order.
struct HomPair {
    SetPair pair;
    std::vector<SetPairMap> maps;
};
HomPair set2_hom(const SetPair& p, const SetPair& q);

// f |-> (x |-> f(x, -)) is a bijection Set2(X (x) Z, Y) -> Set2(X, Hom(Z, Y)).
bool set2_adjunction_bijective(const SetPair& x, const SetPair& z, const SetPair& y);

struct Classifier {
    SetPair terminal, omega;
    SetPairMap t;
};
Classifier set2_classifier();
SetPairMap characteristic_map(const SetPair& x, unsigned a);
// The square (A, X0) -> T, chi_A, t is a pullback against every probe.
bool classifier_pullback_holds(const Set2Cat& c, const SetPair& x, unsigned a);

// ---- pointed sets -------------------------------------------------------------

// {0..n-1} with base point 0.
struct Pointed {
    int n = 1;
    bool operator==(const Pointed&) const = default;
};

struct PointedMap {
    Pointed dom, cod;
    std::vector<int> map;
};

class PointedCat {
public:
    using Obj = Pointed;
    using Mor = PointedMap;
    using Sub = unsigned;  // pointed subsets, bit 0 always set

    explicit PointedCat(Bounds b = {}) : bounds_(b) {}
    std::string name() const { return "Set*"; }
    const Obj& dom(const Mor& f) const { return f.dom; }
    const Obj& cod(const Mor& f) const { return f.cod; }
    Mor compose(const Mor& g, const Mor& f) const;
    Mor identity(const Obj& a) const;
    bool is_null(const Mor& f) const;
    bool equal(const Mor& f, const Mor& g) const { return f.dom == g.dom && f.cod == g.cod && f.map == g.map; }
    Mor kernel(const Mor& f) const { return sub_mono(f.dom, kernel_sub(f)); }
    Mor cokernel(const Mor& f) const;
    std::optional<Mor> lift(const Mor& m, const Mor& a) const;
    std::optional<Mor> descend(const Mor& p, const Mor& a) const;
    bool is_iso(const Mor& f) const;
    Mor inverse(const Mor& f) const;
    Sub kernel_sub(const Mor& f) const { return preimage_mask(f.map, 1u); }
    Sub image_sub(const Mor& f) const { return image_mask(f.map, (1u << f.dom.n) - 1u) | 1u; }
    Mor sub_mono(const Obj& a, Sub x) const;
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj&, Sub x, Sub y) const { return (x & ~y) == 0; }
    Sub sub_meet(const Obj&, Sub x, Sub y) const { return x & y; }
    Sub sub_join(const Obj&, Sub x, Sub y) const { return x | y; }
    Sub sub_bottom(const Obj&) const { return 1u; }
    Sub sub_top(const Obj& a) const { return (1u << a.n) - 1u; }
    Sub direct_image(const Mor& f, Sub x) const { return image_mask(f.map, x) | 1u; }
    Sub inverse_image(const Mor& f, Sub y) const { return preimage_mask(f.map, y); }
    std::vector<Obj> objects() const;
    std::vector<Obj> probes() const { return {{1}, {2}, {3}}; }
    std::vector<Mor> homs(const Obj& a, const Obj& b) const;
    json obj_json(const Obj& a) const { return {{"points", a.n}}; }
    json mor_json(const Mor& f) const;
    json sub_json(const Obj& a, Sub x) const;

private:
    Bounds bounds_;
};

// X/X0: the class of X0 is the base point, the other points follow in order;
// with X0 empty a fresh base point is added.
Pointed pointed_quotient(const SetPair& x);
std::vector<int> pointed_projection(const SetPair& x);  // X -> X/X0
PointedMap pointed_quotient(const SetPairMap& f);

// ---- groups -------------------------------------------------------------------

struct GroupObj {
    GroupRef group;
    bool operator==(const GroupObj& o) const { return same_group(group, o.group); }
};

struct GroupHom {
    GroupObj dom, cod;
    std::vector<int> map;
};

// Gp with the zero morphisms as null ideal; normal subobjects are invariant subgroups.
class GpCat {
public:
    using Obj = GroupObj;
    using Mor = GroupHom;
    using Sub = Subgroup;

    explicit GpCat(Bounds b = {}) : bounds_(b) {}
    std::string name() const { return "Gp"; }
    const Obj& dom(const Mor& f) const { return f.dom; }
    const Obj& cod(const Mor& f) const { return f.cod; }
    Mor compose(const Mor& g, const Mor& f) const;
    Mor identity(const Obj& a) const;
    bool is_null(const Mor& f) const;
    bool equal(const Mor& f, const Mor& g) const { return f.dom == g.dom && f.cod == g.cod && f.map == g.map; }
    Mor kernel(const Mor& f) const { return sub_mono(f.dom, kernel_sub(f)); }
    Mor cokernel(const Mor& f) const;
    std::optional<Mor> lift(const Mor& m, const Mor& a) const;
    std::optional<Mor> descend(const Mor& p, const Mor& a) const;
    bool is_iso(const Mor& f) const;
    Mor inverse(const Mor& f) const;
    Sub kernel_sub(const Mor& f) const;
    Sub image_sub(const Mor& f) const;
    Mor sub_mono(const Obj& a, const Sub& x) const;
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj&, const Sub& x, const Sub& y) const { return subset_of(x, y); }
    Sub sub_meet(const Obj&, const Sub& x, const Sub& y) const { return meet(x, y); }
    Sub sub_join(const Obj& a, const Sub& x, const Sub& y) const { return join(*a.group, x, y); }
    Sub sub_bottom(const Obj&) const { return trivial_subgroup(); }
    Sub sub_top(const Obj& a) const { return whole(*a.group); }
    Sub direct_image(const Mor& f, const Sub& x) const;
    Sub inverse_image(const Mor& f, const Sub& y) const;
    std::vector<Obj> objects() const;
    std::vector<Obj> probes() const;
    std::vector<Mor> homs(const Obj& a, const Obj& b) const;
    Mor zero_map(const Obj& a, const Obj& b) const { return {a, b, std::vector<int>(a.group->size, 0)}; }
    json obj_json(const Obj& a) const;
    json mor_json(const Mor& f) const;
    json sub_json(const Obj&, const Sub& x) const { return x.members; }

private:
    Bounds bounds_;
};

// ---- pairs of groups, quasi-homomorphisms, normalised groups --------------------

struct GroupPair {
    GroupRef group;
    Subgroup base;
    bool operator==(const GroupPair& o) const { return same_group(group, o.group) && base == o.base; }
};

// A Gp2 morphism, a quasi-homomorphism, or a representative of an Ngp class.
struct PairMap {
    GroupPair dom, cod;
    std::vector<int> map;
};

GroupPair group_pair(const GroupRef& g, const Subgroup& base);

// f(S0) <= T0 and f(s + e s') - e f(s') - f(s) in T0. Also evaluates the mirrored
// condition and throws std::logic_error if the two disagree.
bool is_quasi_hom(const std::vector<int>& f, const GroupPair& dom, const GroupPair& cod);
// fs - gs in T0 for every s; the variant -fs + gs is cross-checked.
bool r_equivalent(const PairMap& f, const PairMap& g);

// Surjective homomorphism with S0 = p^-1(T0).
bool is_sigma(const PairMap& p);
// Least-representative section of a sigma map; throws std::invalid_argument otherwise.
PairMap sigma_invert(const PairMap& p);

enum class PairMode { Gp2, Q, Ngp };

class PairCat {
public:
    using Obj = GroupPair;
    using Mor = PairMap;
    using Sub = Subgroup;  // S0 <= M <= S

    explicit PairCat(PairMode mode, Bounds b = {}) : mode_(mode), bounds_(b) {}
    PairMode mode() const { return mode_; }
    std::string name() const;
    const Obj& dom(const Mor& f) const { return f.dom; }
    const Obj& cod(const Mor& f) const { return f.cod; }
    Mor compose(const Mor& g, const Mor& f) const;
    Mor identity(const Obj& a) const;
    bool is_null(const Mor& f) const;
    bool equal(const Mor& f, const Mor& g) const;
    Mor kernel(const Mor& f) const { return sub_mono(f.dom, kernel_sub(f)); }
    Mor cokernel(const Mor& f) const;
    std::optional<Mor> lift(const Mor& m, const Mor& a) const;
    std::optional<Mor> descend(const Mor& p, const Mor& a) const;
    bool is_iso(const Mor& f) const { return find_inverse(f).has_value(); }
    Mor inverse(const Mor& f) const;
    Sub kernel_sub(const Mor& f) const;
    Sub image_sub(const Mor& f) const;
    Mor sub_mono(const Obj& a, const Sub& x) const;
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj&, const Sub& x, const Sub& y) const { return subset_of(x, y); }
    Sub sub_meet(const Obj&, const Sub& x, const Sub& y) const { return meet(x, y); }
    Sub sub_join(const Obj& a, const Sub& x, const Sub& y) const { return join(*a.group, x, y); }
    Sub sub_bottom(const Obj& a) const { return a.base; }
    Sub sub_top(const Obj& a) const { return whole(*a.group); }
    Sub direct_image(const Mor& f, const Sub& x) const;
    Sub inverse_image(const Mor& f, const Sub& y) const;
    std::vector<Obj> objects() const;
    std::vector<Obj> probes() const;
    // Gp2: every homomorphism. Q: quasi-homomorphisms in search order, capped.
    // Ngp: one representative per R-class reached by the capped search.
    std::vector<Mor> homs(const Obj& a, const Obj& b) const;
    Mor zero_map(const Obj& a, const Obj& b) const { return {a, b, std::vector<int>(a.group->size, 0)}; }
    json obj_json(const Obj& a) const;
    json mor_json(const Mor& f) const;
    json sub_json(const Obj&, const Sub& x) const { return x.members; }

    bool valid(const Mor& f) const;
    int search_cap() const { return bounds_.mor_cap > 0 ? bounds_.mor_cap : 256; }

private:
    std::optional<Mor> find_inverse(const Mor& f) const;

    PairMode mode_;
    Bounds bounds_;
};

enum class SearchStep { Reject, Accept, Stop };

// f(s) ranges over T0 on S0 and over T elsewhere.
std::vector<std::vector<int>> default_choices(const GroupPair& dom, const GroupPair& cod);

// Depth-first over quasi-homomorphisms with f(s) in choices[s]. With coset_of (element -> right
// coset of T0), values in a coset already leading to an accepted solution are skipped.
void visit_quasi_homs(const GroupPair& dom, const GroupPair& cod, const std::vector<std::vector<int>>& choices,
                      const std::function<SearchStep(const std::vector<int>&)>& visit,
                      const std::vector<int>* coset_of = nullptr);

// Quasi-homomorphisms dom -> cod with f(s) drawn from choices[s], in lexicographic order,
// at most cap of them (cap <= 0: all).
std::vector<std::vector<int>> search_quasi_homs(const GroupPair& dom, const GroupPair& cod,
                                                const std::vector<std::vector<int>>& choices, int cap);

// ---- functors between the pair categories ----------------------------------------

GroupPair functor_I(const GroupObj& g);
PairMap functor_I(const GroupHom& f);
GroupObj functor_K(const GroupPair& p);
GroupHom functor_K(const PairMap& f);
// J = PI: a homomorphism viewed in Ngp.
PairMap functor_J(const GroupHom& f);

// Gp((S/S0bar), G) and Gp2((S, S0), (G, 0)) have the same size.
bool k_adjunction_holds(const GroupPair& p, const GroupObj& g);

Functor<GpCat, PairCat> make_I(const GpCat& gp, const PairCat& gp2);
Functor<PairCat, GpCat> make_K(const PairCat& gp2, const GpCat& gp);
Functor<PairCat, PairCat> make_P(const PairCat& gp2, const PairCat& ngp);
Functor<GpCat, PairCat> make_J(const GpCat& gp, const PairCat& ngp);
Functor<Set2Cat, PointedCat> make_P(const Set2Cat& set2, const PointedCat& pointed);

// ---- json ---------------------------------------------------------------------------

json group_json(const FinGroup& g);
// Accepts a catalogue name ("Z4", "S3", "Q8", "Zn", "E2^k") or {"table": [[...]]}.
GroupRef group_from_json(const json& j);
json pair_json(const GroupPair& p);
GroupPair pair_from_json(const json& j);
json set_pair_json(const SetPair& p);
SetPair set_pair_from_json(const json& j);

}  // namespace homolog
