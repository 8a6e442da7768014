#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace homolog {

using Table = std::vector<std::vector<int>>;

// A finite group as a Cayley table, written additively. Element 0 is the identity.
struct FinGroup {
    int size = 1;
    std::vector<int> table{0};
    std::vector<int> neg{0};

    int add(int a, int b) const { return table[static_cast<size_t>(a) * size + b]; }
    int inv(int a) const { return neg[a]; }
    // a - b
    int sub(int a, int b) const { return add(a, neg[b]); }
    bool abelian() const;
    Table to_table() const;

    // Validates identity, associativity and inverses; throws std::invalid_argument.
    static FinGroup from_table(const Table& t);

    bool operator==(const FinGroup& o) const { return size == o.size && table == o.table; }
};

using GroupRef = std::shared_ptr<const FinGroup>;

GroupRef share(FinGroup g);
bool same_group(const GroupRef& a, const GroupRef& b);

// Sorted member list; always contains 0.
struct Subgroup {
    std::vector<int> members{0};

    bool contains(int x) const;
    int order() const { return static_cast<int>(members.size()); }
    bool operator==(const Subgroup&) const = default;
    auto operator<=>(const Subgroup&) const = default;
};

Subgroup trivial_subgroup();
Subgroup whole(const FinGroup& g);
bool is_subgroup(const FinGroup& g, const std::vector<int>& xs);
bool subset_of(const Subgroup& a, const Subgroup& b);
Subgroup meet(const Subgroup& a, const Subgroup& b);
Subgroup join(const FinGroup& g, const Subgroup& a, const Subgroup& b);

Subgroup span(const FinGroup& g, const std::vector<int>& xs);
Subgroup invariant_closure(const FinGroup& g, const Subgroup& h);
bool is_normal(const FinGroup& g, const Subgroup& h);
std::vector<Subgroup> all_subgroups(const FinGroup& g);

struct Quotient {
    FinGroup group;
    std::vector<int> projection;  // element -> coset index
    std::vector<int> section;     // coset index -> least member
};

// Cosets named by least member; the coset of 0 is element 0.
Quotient quotient_group(const FinGroup& g, const Subgroup& n);

// Right cosets h + s, indexed by least member; returns element -> coset index.
std::vector<int> right_cosets(const FinGroup& g, const Subgroup& h, std::vector<int>* reps = nullptr);

// The subgroup renumbered as a group in its own right; embed[i] is the ambient element.
FinGroup subgroup_as_group(const FinGroup& g, const Subgroup& h, std::vector<int>* embed = nullptr);

std::vector<int> generators(const FinGroup& g);
bool is_hom(const FinGroup& a, const FinGroup& b, const std::vector<int>& f);
std::vector<std::vector<int>> all_homs(const FinGroup& a, const FinGroup& b);

// Image and preimage helpers for element maps.
std::vector<int> image_of(const std::vector<int>& f, const std::vector<int>& xs);
std::vector<int> preimage_of(const std::vector<int>& f, const Subgroup& h);

FinGroup cyclic(int n);
FinGroup direct_product(const FinGroup& a, const FinGroup& b);
FinGroup symmetric3();
FinGroup dihedral4();
FinGroup quaternion8();
FinGroup elementary2(int rank);  // element = bitmask, addition = xor

struct NamedGroup {
    std::string name;
    GroupRef group;
};

// One representative of each isomorphism class of order <= max_order (max 8).
std::vector<NamedGroup> small_groups(int max_order);

struct FinLattice {
    int size = 1;
    std::vector<char> le{1};
    std::vector<int> meet_t{0};
    std::vector<int> join_t{0};
    int bottom = 0;
    int top = 0;

    bool leq(int a, int b) const { return le[static_cast<size_t>(a) * size + b] != 0; }
    int meet(int a, int b) const { return meet_t[static_cast<size_t>(a) * size + b]; }
    int join(int a, int b) const { return join_t[static_cast<size_t>(a) * size + b]; }

    // Derives meet/join from the order; throws std::invalid_argument if not a lattice.
    static FinLattice from_leq(int n, const std::vector<std::vector<bool>>& leq);

    bool operator==(const FinLattice& o) const { return size == o.size && le == o.le; }
};

struct LatticeReport {
    bool valid = true;
    std::string violation;
};

LatticeReport check_lattice(const FinLattice& l);
bool is_modular_lattice(const FinLattice& l);
bool is_distributive_lattice(const FinLattice& l);

FinLattice chain(int n);
FinLattice boolean_lattice(int atoms);
FinLattice pentagon();
FinLattice diamond();
FinLattice product_lattice(const FinLattice& x, const FinLattice& y);  // index = x * |Y| + y
FinLattice subgroup_lattice(const FinGroup& g, std::vector<Subgroup>* labels = nullptr);
std::vector<FinLattice> small_lattices(int max_size);

}  // namespace homolog
