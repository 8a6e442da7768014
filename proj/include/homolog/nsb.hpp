#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homolog/ltc.hpp"
#include "homolog/semiexact.hpp"

namespace homolog {

template <class C>
struct LabelledLattice {
    FinLattice lattice;
    std::vector<typename C::Sub> labels;

    int index_of(const typename C::Sub& x) const {
        auto it = std::find(labels.begin(), labels.end(), x);
        if (it == labels.end()) throw std::out_of_range("subobject not in lattice");
        return static_cast<int>(it - labels.begin());
    }
};

template <SemiexactInstance C>
LabelledLattice<C> nsb_lattice(const C& c, const typename C::Obj& a) {
    LabelledLattice<C> out;
    out.labels = c.subobjects(a);
    const int n = static_cast<int>(out.labels.size());
    std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) le[i][j] = c.sub_leq(a, out.labels[i], out.labels[j]);
    out.lattice = FinLattice::from_leq(n, le);
    return out;
}

// True when the instance's meet/join/bounds agree with the order-theoretic ones.
template <SemiexactInstance C>
bool nsb_operations_agree(const C& c, const typename C::Obj& a) {
    auto l = nsb_lattice(c, a);
    const int n = static_cast<int>(l.labels.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!(c.sub_meet(a, l.labels[i], l.labels[j]) == l.labels[l.lattice.meet(i, j)])) return false;
            if (!(c.sub_join(a, l.labels[i], l.labels[j]) == l.labels[l.lattice.join(i, j)])) return false;
        }
    return c.sub_bottom(a) == l.labels[l.lattice.bottom] && c.sub_top(a) == l.labels[l.lattice.top];
}

// Direct and inverse images straight from the definitions: nim(f x) and ker((cok y) f).
template <SemiexactInstance C>
typename C::Sub direct_image_by_definition(const C& c, const typename C::Mor& f, const typename C::Sub& x) {
    return c.image_sub(c.compose(f, c.sub_mono(c.dom(f), x)));
}

template <SemiexactInstance C>
typename C::Sub inverse_image_by_definition(const C& c, const typename C::Mor& f, const typename C::Sub& y) {
    return c.kernel_sub(c.compose(c.cokernel(c.sub_mono(c.cod(f), y)), f));
}

template <SemiexactInstance C>
Connection nsb_connection(const C& c, const typename C::Mor& f, const LabelledLattice<C>& src,
                          const LabelledLattice<C>& dst) {
    Connection k{src.lattice, dst.lattice, std::vector<int>(src.labels.size()), std::vector<int>(dst.labels.size())};
    for (size_t i = 0; i < src.labels.size(); ++i) k.lower[i] = dst.index_of(c.direct_image(f, src.labels[i]));
    for (size_t j = 0; j < dst.labels.size(); ++j) k.upper[j] = src.index_of(c.inverse_image(f, dst.labels[j]));
    return k;
}

template <SemiexactInstance C>
Connection nsb_connection(const C& c, const typename C::Mor& f) {
    return nsb_connection(c, f, nsb_lattice(c, c.dom(f)), nsb_lattice(c, c.cod(f)));
}

template <SemiexactInstance C>
bool is_left_modular_on(const C& c, const typename C::Mor& f, const typename C::Sub& x) {
    const auto& a = c.dom(f);
    return c.inverse_image(f, c.direct_image(f, x)) == c.sub_join(a, x, c.inverse_image(f, c.sub_bottom(c.cod(f))));
}

template <SemiexactInstance C>
bool is_right_modular_on(const C& c, const typename C::Mor& f, const typename C::Sub& y) {
    const auto& b = c.cod(f);
    return c.direct_image(f, c.inverse_image(f, y)) == c.sub_meet(b, y, c.direct_image(f, c.sub_top(c.dom(f))));
}

template <SemiexactInstance C>
bool is_left_modular(const C& c, const typename C::Mor& f) {
    for (const auto& x : c.subobjects(c.dom(f)))
        if (!is_left_modular_on(c, f, x)) return false;
    return true;
}

template <SemiexactInstance C>
bool is_right_modular(const C& c, const typename C::Mor& f) {
    for (const auto& y : c.subobjects(c.cod(f)))
        if (!is_right_modular_on(c, f, y)) return false;
    return true;
}

// Psp C: same objects, maps identified when their transfer connections coincide.
template <SemiexactInstance C>
class PspCat {
public:
    using Obj = typename C::Obj;
    using Mor = typename C::Mor;
    using Sub = typename C::Sub;

    explicit PspCat(const C& base, bool audit = true) : c_(base) {
        if (audit && !check_ex2(base, base.objects()).pass)
            throw std::invalid_argument("perspective quotient needs an ex2 category; " + std::string(base.name()) +
                                        " fails the ex2 audit");
    }

    std::string name() const { return "Psp(" + std::string(c_.name()) + ")"; }
    Obj dom(const Mor& f) const { return c_.dom(f); }
    Obj cod(const Mor& f) const { return c_.cod(f); }
    Mor compose(const Mor& g, const Mor& f) const { return c_.compose(g, f); }
    Mor identity(const Obj& a) const { return c_.identity(a); }
    bool is_null(const Mor& f) const { return c_.is_null(f); }
    bool equal(const Mor& f, const Mor& g) const {
        if (!(c_.dom(f) == c_.dom(g)) || !(c_.cod(f) == c_.cod(g))) return false;
        for (const auto& x : c_.subobjects(c_.dom(f)))
            if (!(c_.direct_image(f, x) == c_.direct_image(g, x))) return false;
        for (const auto& y : c_.subobjects(c_.cod(f)))
            if (!(c_.inverse_image(f, y) == c_.inverse_image(g, y))) return false;
        return true;
    }
    Mor kernel(const Mor& f) const { return c_.kernel(f); }
    Mor cokernel(const Mor& f) const { return c_.cokernel(f); }
    std::optional<Mor> lift(const Mor& m, const Mor& a) const { return c_.lift(m, a); }
    std::optional<Mor> descend(const Mor& p, const Mor& a) const { return c_.descend(p, a); }
    bool is_iso(const Mor& f) const { return find_inverse(f).has_value(); }
    Mor inverse(const Mor& f) const {
        auto g = find_inverse(f);
        if (!g) throw std::invalid_argument("not invertible in the perspective quotient");
        return *g;
    }
    Sub kernel_sub(const Mor& f) const { return c_.kernel_sub(f); }
    Sub image_sub(const Mor& f) const { return c_.image_sub(f); }
    Mor sub_mono(const Obj& a, const Sub& x) const { return c_.sub_mono(a, x); }
    std::vector<Sub> subobjects(const Obj& a) const { return c_.subobjects(a); }
    bool sub_leq(const Obj& a, const Sub& x, const Sub& y) const { return c_.sub_leq(a, x, y); }
    Sub sub_meet(const Obj& a, const Sub& x, const Sub& y) const { return c_.sub_meet(a, x, y); }
    Sub sub_join(const Obj& a, const Sub& x, const Sub& y) const { return c_.sub_join(a, x, y); }
    Sub sub_bottom(const Obj& a) const { return c_.sub_bottom(a); }
    Sub sub_top(const Obj& a) const { return c_.sub_top(a); }
    Sub direct_image(const Mor& f, const Sub& x) const { return c_.direct_image(f, x); }
    Sub inverse_image(const Mor& f, const Sub& y) const { return c_.inverse_image(f, y); }
    std::vector<Obj> objects() const { return c_.objects(); }
    std::vector<Obj> probes() const { return c_.probes(); }
    // One representative per class, first in the base enumeration order.
    std::vector<Mor> homs(const Obj& a, const Obj& b) const {
        std::vector<Mor> reps;
        for (auto& f : c_.homs(a, b)) {
            bool seen = false;
            for (const auto& g : reps)
                if (equal(f, g)) {
                    seen = true;
                    break;
                }
            if (!seen) reps.push_back(std::move(f));
        }
        return reps;
    }
    json obj_json(const Obj& a) const { return c_.obj_json(a); }
    json mor_json(const Mor& f) const { return c_.mor_json(f); }
    json sub_json(const Obj& a, const Sub& x) const { return c_.sub_json(a, x); }

    const C& base() const { return c_; }

private:
    std::optional<Mor> find_inverse(const Mor& f) const {
        if (c_.is_iso(f)) return c_.inverse(f);
        for (const auto& g : c_.homs(c_.cod(f), c_.dom(f)))
            if (equal(c_.compose(g, f), c_.identity(c_.dom(f))) && equal(c_.compose(f, g), c_.identity(c_.cod(f))))
                return g;
        return std::nullopt;
    }

    const C& c_;
};

struct NsbTransferReport {
    bool faithful = true;
    bool full = true;
    long long objects = 0;
    json witness;
};

// The maps x -> nim(F x) on every enumerated object: injective (faithful), surjective (full).
template <SemiexactInstance A, SemiexactInstance B>
NsbTransferReport nsb_transfer(const Functor<A, B>& F, const std::vector<typename A::Obj>& objs) {
    NsbTransferReport r;
    const A& a = *F.src;
    const B& b = *F.dst;
    for (const auto& o : objs) {
        ++r.objects;
        const auto fo = F.on_obj(o);
        std::vector<typename B::Sub> hit;
        for (const auto& x : a.subobjects(o)) {
            auto y = b.image_sub(F.on_mor(a.sub_mono(o, x)));
            if (std::find(hit.begin(), hit.end(), y) != hit.end()) {
                if (r.faithful) r.witness["faithful"] = {{"object", a.obj_json(o)}, {"sub", a.sub_json(o, x)}};
                r.faithful = false;
            }
            hit.push_back(y);
        }
        for (const auto& y : b.subobjects(fo))
            if (std::find(hit.begin(), hit.end(), y) == hit.end()) {
                if (r.full) r.witness["full"] = {{"object", a.obj_json(o)}, {"missed", b.sub_json(fo, y)}};
                r.full = false;
            }
    }
    return r;
}

namespace detail {

template <SemiexactInstance A, SemiexactInstance B>
NsbTransferReport audited_transfer(const Functor<A, B>& F, const std::vector<typename A::Obj>& objs,
                                   const std::vector<typename A::Mor>& ms) {
    auto audit = check_functor_exactness(F, ExactMode::Exact, objs, ms);
    if (!audit.pass) throw std::invalid_argument("functor " + F.name + " fails the exactness audit");
    return nsb_transfer(F, objs);
}

}  // namespace detail

template <SemiexactInstance A, SemiexactInstance B>
bool is_nsb_faithful(const Functor<A, B>& F, const std::vector<typename A::Obj>& objs,
                     const std::vector<typename A::Mor>& ms) {
    return detail::audited_transfer(F, objs, ms).faithful;
}

template <SemiexactInstance A, SemiexactInstance B>
bool is_nsb_full(const Functor<A, B>& F, const std::vector<typename A::Obj>& objs,
                 const std::vector<typename A::Mor>& ms) {
    return detail::audited_transfer(F, objs, ms).full;
}

}  // namespace homolog
