#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "homolog/finite.hpp"
#include "homolog/pairs.hpp"
#include "homolog/semiexact.hpp"

namespace homolog {

// A right action x + s of a finite group on the pointed set {0..n-1}. The base point need not
// be fixed; `base` caches Fix(0), which is also the distinguished subgroup in Act' and Nac.
struct Action {
    int n = 1;
    GroupRef group;
    std::vector<int> act;  // act[x * |S| + s] = x + s
    Subgroup base;

    int order() const { return group->size; }
    int at(int x, int s) const { return act[static_cast<size_t>(x) * group->size + s]; }
    unsigned all_points() const { return (1u << n) - 1u; }
    bool operator==(const Action& o) const {
        return n == o.n && act == o.act && base == o.base && same_group(group, o.group);
    }
};

struct ActionMap {
    Action dom, cod;
    std::vector<int> points;  // pointed map X -> Y
    std::vector<int> ops;     // S -> T
};

bool is_action(int n, const FinGroup& g, const std::vector<int>& act);
// Validates and sets base = Fix(0); throws std::invalid_argument.
Action make_action(int n, const GroupRef& g, std::vector<int> act);

Subgroup fixer(const Action& a, int x);
Subgroup stabiliser(const Action& a, unsigned mask);  // {s | X1 + s <= X1}
// Orbit index of every point, orbits numbered by least member.
std::vector<int> orbits(const Action& a, int* count = nullptr);
unsigned orbit_mask(const Action& a, int x);

struct NormalCheck {
    bool normal = false;
    Subgroup ops;  // S1, meaningful when normal
};
// Evaluates the three equivalent descriptions of a normal subaction and throws
// std::logic_error if they disagree.
NormalCheck is_normal_subaction(const Action& a, unsigned mask);

// Smallest S-congruence identifying the points of mask, as the least member of each class.
std::vector<int> generated_congruence(const Action& a, unsigned mask);
// x R x' iff x = x' or x = x1 + s, x' = x1' + s' with x1, x1' in X1 and s - s' in S1.
std::vector<int> closed_form_congruence(const Action& a, unsigned mask);
// Class of the base point under generated_congruence.
unsigned zero_class(const Action& a, unsigned mask);

// X -> X/R with R generated by mask.
ActionMap quotient_projection(const Action& a, unsigned mask);

// The kernel operator group described five ways: f''^-1(Fix(0_Y)), {s | 0_Y + fs = 0_Y},
// {s | X1 + s <= X1}, {s | X1 + s = X1}, {s | s links two points of X1}.
bool kernel_operator_descriptions_agree(const ActionMap& f);

// Every pointed map X -> Y consistent with the given operator map; visit returns false to stop.
void visit_point_maps(const Action& a, const Action& b, const std::vector<int>& ops,
                      const std::function<bool(const std::vector<int>&)>& visit);
bool consistent(const Action& a, const Action& b, const std::vector<int>& points, const std::vector<int>& ops);

// Actions with at most max_set points and group order at most max_group, one per isomorphism
// class (relabelling non-base points and applying group automorphisms).
std::vector<Action> small_actions(int max_set, int max_group);

enum class ActionMode { Act, ActPrime, Nac };

class ActionCat {
public:
    using Obj = Action;
    using Mor = ActionMap;
    using Sub = unsigned;  // X1, with S1 = stabiliser(X1)

    explicit ActionCat(ActionMode mode, Bounds b = {}) : mode_(mode), bounds_(b) {}
    ActionMode mode() const { return mode_; }
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
    Mor sub_mono(const Obj& a, Sub x) const;
    std::vector<Sub> subobjects(const Obj& a) const;
    bool sub_leq(const Obj&, Sub x, Sub y) const { return (x & ~y) == 0; }
    Sub sub_meet(const Obj&, Sub x, Sub y) const { return x & y; }
    Sub sub_join(const Obj& a, Sub x, Sub y) const { return zero_class(a, x | y); }
    Sub sub_bottom(const Obj&) const { return 1u; }
    Sub sub_top(const Obj& a) const { return a.all_points(); }
    Sub direct_image(const Mor& f, Sub x) const;
    Sub inverse_image(const Mor& f, Sub y) const;
    std::vector<Obj> objects() const;
    std::vector<Obj> probes() const;
    // Act: every morphism. Act': capped search over quasi-homomorphisms.
    // Nac: one representative per class reached by the capped coset search.
    std::vector<Mor> homs(const Obj& a, const Obj& b) const;
    json obj_json(const Obj& a) const;
    json mor_json(const Mor& f) const;
    json sub_json(const Obj& a, Sub x) const;

    bool valid(const Mor& f) const;
    bool is_sub(const Obj& a, Sub x) const;
    int search_cap() const { return bounds_.mor_cap > 0 ? bounds_.mor_cap : 256; }

private:
    std::optional<Mor> find_inverse(const Mor& f) const;
    bool ops_ok(const Action& a, const Action& b, const std::vector<int>& ops) const;
    std::optional<Mor> solve(const Action& a, const Action& b, const std::vector<int>& points,
                             const std::vector<std::vector<int>>& choices,
                             const std::function<bool(const Mor&)>& accept) const;

    ActionMode mode_;
    Bounds bounds_;
};

// ---- functors ---------------------------------------------------------------------

Action functor_U(const Pointed& z);  // (Z, 0)
ActionMap functor_U(const PointedMap& f);
Pointed functor_V(const Action& a);  // orbit set, pointed at the orbit of 0
PointedMap functor_V(const ActionMap& f);
Action functor_F(const GroupPair& p);  // right cosets S0 + s, pointed at S0
ActionMap functor_F(const PairMap& f);
GroupPair functor_G(const Action& a);  // (S, Fix(0))
PairMap functor_G(const ActionMap& f);
Action regular_action(const GroupObj& g);  // (|S|, S) acting by translation
ActionMap regular_action(const GroupHom& f);

Functor<PointedCat, ActionCat> make_U(const PointedCat& set, const ActionCat& act);
Functor<ActionCat, PointedCat> make_V(const ActionCat& act, const PointedCat& set);
Functor<PairCat, ActionCat> make_F(const PairCat& gp2, const ActionCat& act);
Functor<ActionCat, PairCat> make_G(const ActionCat& act, const PairCat& gp2);
Functor<GpCat, ActionCat> make_regular(const GpCat& gp, const ActionCat& act);
// Act -> Act' and Act -> Nac: same data.
Functor<ActionCat, ActionCat> make_embedding(const ActionCat& act, const ActionCat& target);

// Counit F G (X, S) -> (X, S) for a transitive action: coset S0 + s goes to 0 + s.
ActionMap counit(const Action& a);
bool is_transitive(const Action& a);

// p: (X, S) -> (X, S/N) for N normal and acting trivially; throws std::invalid_argument.
ActionMap action_sigma(const Action& a, const Subgroup& n);
// Inverse of a sigma map in Nac through the least-representative section.
ActionMap nac_sigma_invert(const ActionMap& p);

// ---- exactness from groups to pointed sets ------------------------------------------

// H -u-> G -v-> S -f-> (X, S) -g-> Y -h-> Z with f(s) = 0 + s and g constant on orbits.
struct MixedSequence {
    GroupHom u, v;
    Action x;
    Pointed y;
    std::vector<int> g;
    PointedMap h;
};

struct ClauseResult {
    std::string clause;
    bool categorical = false;
    bool elementwise = false;
};

struct MixedReport {
    std::vector<ClauseResult> clauses;  // (a) to (d)
    bool f_exact = false;
    bool g_right_modular = false;
    bool classical_at_action = false;  // g x = g x' iff x, x' share an orbit
    json to_json() const;
};

// Throws std::invalid_argument when the pieces do not fit together.
MixedReport mixed_sequence_exactness(const MixedSequence& s);
ActionMap orbit_map(const Action& x);  // the f of the sequence, from (|S|, S)

// ---- json ---------------------------------------------------------------------------

json action_json(const Action& a);
Action action_from_json(const json& j);
json action_map_json(const ActionMap& f);
ActionMap action_map_from_json(const json& j, const Action& dom, const Action& cod);

}  // namespace homolog
