#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "homolog/nsb.hpp"
#include "homolog/semiexact.hpp"

namespace homolog {

// M/N in A, realised through the bicartesian square
//   M --m--> A
//   h|       |q
//   S --k--> A/N
template <class C>
struct Subquotient {
    typename C::Obj ambient;
    typename C::Sub num, den;
    typename C::Mor m, q, h, k;
};

template <SemiexactInstance C>
const typename C::Obj& realised(const C& c, const Subquotient<C>& s) {
    return c.cod(s.h);
}

template <SemiexactInstance C>
bool audit_bicartesian(const C& c, const Subquotient<C>& s, int cap = 16);

template <SemiexactInstance C>
Subquotient<C> subquotient(const C& c, const typename C::Obj& a, const typename C::Sub& num,
                           const typename C::Sub& den, bool audit = false) {
    if (!c.sub_leq(a, den, num)) throw std::invalid_argument("subquotient: denominator is not below numerator");
    auto m = c.sub_mono(a, num);
    auto q = c.cokernel(c.sub_mono(a, den));
    auto fac = normal_factorise(c, c.compose(q, m));
    if (!c.is_iso(fac.central)) throw std::logic_error(std::string(c.name()) + ": qm is not exact (ex3 fails)");
    Subquotient<C> s{a, num, den, m, q, fac.ncm, c.compose(fac.nim, fac.central)};
    if (audit && !audit_bicartesian(c, s)) throw std::logic_error("subquotient square is not bicartesian");
    return s;
}

// Pullback and pushout properties against probe objects.
template <SemiexactInstance C>
bool audit_bicartesian(const C& c, const Subquotient<C>& s, int cap) {
    auto limit = [cap](auto v) {
        if (cap > 0 && v.size() > static_cast<size_t>(cap)) v.resize(cap);
        return v;
    };
    if (!c.equal(c.compose(s.q, s.m), c.compose(s.k, s.h))) return false;
    const auto& mo = c.dom(s.m);
    const auto& so = c.cod(s.h);
    const auto& qo = c.cod(s.q);
    for (const auto& z : c.probes()) {
        for (const auto& x : limit(c.homs(z, s.ambient)))
            for (const auto& y : limit(c.homs(z, so))) {
                if (!c.equal(c.compose(s.q, x), c.compose(s.k, y))) continue;
                int found = 0;
                for (const auto& w : c.homs(z, mo))
                    if (c.equal(c.compose(s.m, w), x) && c.equal(c.compose(s.h, w), y)) ++found;
                if (found != 1) return false;
            }
        for (const auto& x : limit(c.homs(s.ambient, z)))
            for (const auto& y : limit(c.homs(so, z))) {
                if (!c.equal(c.compose(x, s.m), c.compose(y, s.h))) continue;
                int found = 0;
                for (const auto& w : c.homs(qo, z))
                    if (c.equal(c.compose(w, s.q), x) && c.equal(c.compose(w, s.k), y)) ++found;
                if (found != 1) return false;
            }
    }
    return true;
}

// Normal subobject of the realised S carried up to Nsb(A), and back down.
template <SemiexactInstance C>
typename C::Sub lift_to_ambient(const C& c, const Subquotient<C>& s, const typename C::Sub& x) {
    return c.direct_image(s.m, c.inverse_image(s.h, x));
}

template <SemiexactInstance C>
typename C::Sub restrict_to_subquotient(const C& c, const Subquotient<C>& s, const typename C::Sub& y) {
    return c.direct_image(s.h, c.inverse_image(s.m, y));
}

template <SemiexactInstance C>
bool can_induce(const C& c, const typename C::Mor& f, const Subquotient<C>& s, const Subquotient<C>& t,
                std::string* why = nullptr) {
    const auto& b = c.cod(f);
    if (!c.sub_leq(b, c.direct_image(f, s.num), t.num)) {
        if (why) *why = "f_*(M) <= H fails";
        return false;
    }
    if (!c.sub_leq(b, c.direct_image(f, s.den), t.den)) {
        if (why) *why = "f_*(N) <= K fails";
        return false;
    }
    return true;
}

// The unique g: M/N -> H/K with k_t g h_s = q_t f m_s.
template <SemiexactInstance C>
typename C::Mor regular_induction(const C& c, const typename C::Mor& f, const Subquotient<C>& s,
                                  const Subquotient<C>& t) {
    if (!(c.dom(f) == s.ambient) || !(c.cod(f) == t.ambient))
        throw std::invalid_argument("regular induction: subquotients do not match the morphism");
    std::string why;
    if (!can_induce(c, f, s, t, &why)) throw std::invalid_argument("regular induction refused: " + why);
    auto a = c.compose(t.q, c.compose(f, s.m));
    auto x = c.descend(s.h, a);
    if (!x) throw std::logic_error("regular induction: map does not pass to M/N");
    auto g = c.lift(t.k, *x);
    if (!g) throw std::logic_error("regular induction: map does not land in H/K");
    return *g;
}

template <SemiexactInstance C>
typename C::Mor canonical_morphism(const C& c, const Subquotient<C>& s, const Subquotient<C>& t) {
    return regular_induction(c, c.identity(s.ambient), s, t);
}

// Every g' with k_t g' h_s = q_t f m_s among the enumerated maps equals the induced one.
template <SemiexactInstance C>
bool induction_is_unique(const C& c, const typename C::Mor& f, const Subquotient<C>& s, const Subquotient<C>& t,
                         const typename C::Mor& g) {
    auto target = c.compose(t.q, c.compose(f, s.m));
    for (const auto& other : c.homs(c.cod(s.h), c.cod(t.h)))
        if (c.equal(c.compose(t.k, c.compose(other, s.h)), target) && !c.equal(other, g)) return false;
    return true;
}

template <class C>
struct InducedImage {
    typename C::Sub value;
    std::array<typename C::Sub, 4> routes;
};

template <SemiexactInstance C>
InducedImage<C> induced_direct_image(const C& c, const typename C::Mor& f, const Subquotient<C>& s,
                                     const Subquotient<C>& t, const typename C::Sub& x) {
    auto up1 = c.direct_image(f, c.direct_image(s.m, c.inverse_image(s.h, x)));
    auto up2 = c.direct_image(f, c.inverse_image(s.q, c.direct_image(s.k, x)));
    InducedImage<C> r{x, {c.direct_image(t.h, c.inverse_image(t.m, up1)), c.direct_image(t.h, c.inverse_image(t.m, up2)),
                          c.inverse_image(t.k, c.direct_image(t.q, up1)), c.inverse_image(t.k, c.direct_image(t.q, up2))}};
    for (const auto& v : r.routes)
        if (!(v == r.routes[0])) throw std::logic_error("induced direct image: the four routes disagree");
    r.value = r.routes[0];
    return r;
}

template <SemiexactInstance C>
InducedImage<C> induced_inverse_image(const C& c, const typename C::Mor& f, const Subquotient<C>& s,
                                      const Subquotient<C>& t, const typename C::Sub& y) {
    auto down1 = c.inverse_image(f, c.direct_image(t.m, c.inverse_image(t.h, y)));
    auto down2 = c.inverse_image(f, c.inverse_image(t.q, c.direct_image(t.k, y)));
    InducedImage<C> r{y, {c.direct_image(s.h, c.inverse_image(s.m, down1)), c.direct_image(s.h, c.inverse_image(s.m, down2)),
                          c.inverse_image(s.k, c.direct_image(s.q, down1)), c.inverse_image(s.k, c.direct_image(s.q, down2))}};
    for (const auto& v : r.routes)
        if (!(v == r.routes[0])) throw std::logic_error("induced inverse image: the four routes disagree");
    r.value = r.routes[0];
    return r;
}

template <class C>
struct InducedFactorisation {
    typename C::Sub ker_num, cok_den;  // M ^ f*K and K v f_*M
    Subquotient<C> ker_sq, ncm_sq, nim_sq, cok_sq;
    typename C::Mor ker, ncm, central, nim, cok;
    bool agrees = false;  // matches normal_factorise(g) up to the canonical isomorphisms
};

template <SemiexactInstance C>
InducedFactorisation<C> induced_factorisation(const C& c, const typename C::Mor& f, const Subquotient<C>& s,
                                              const Subquotient<C>& t) {
    const auto& a = s.ambient;
    const auto& b = t.ambient;
    auto g = regular_induction(c, f, s, t);
    auto kn = c.sub_meet(a, s.num, c.inverse_image(f, t.den));
    auto cd = c.sub_join(b, t.den, c.direct_image(f, s.num));
    auto ker_sq = subquotient(c, a, kn, s.den);
    auto ncm_sq = subquotient(c, a, s.num, kn);
    auto nim_sq = subquotient(c, b, cd, t.den);
    auto cok_sq = subquotient(c, b, t.num, cd);
    InducedFactorisation<C> r{kn,
                              cd,
                              ker_sq,
                              ncm_sq,
                              nim_sq,
                              cok_sq,
                              canonical_morphism(c, ker_sq, s),
                              canonical_morphism(c, s, ncm_sq),
                              regular_induction(c, f, ncm_sq, nim_sq),
                              canonical_morphism(c, nim_sq, t),
                              canonical_morphism(c, t, cok_sq)};
    auto direct = normal_factorise(c, g);
    auto iso_ker = c.lift(direct.ker, r.ker);
    auto iso_cok = c.descend(direct.cok, r.cok);
    auto iso_ncm = c.descend(direct.ncm, r.ncm);
    auto iso_nim = c.lift(direct.nim, r.nim);
    r.agrees = iso_ker && c.is_iso(*iso_ker) && iso_cok && c.is_iso(*iso_cok) && iso_ncm && c.is_iso(*iso_ncm) &&
               iso_nim && c.is_iso(*iso_nim) && c.equal(c.compose(r.nim, c.compose(r.central, r.ncm)), g) &&
               lift_to_ambient(c, s, c.kernel_sub(g)) == kn && lift_to_ambient(c, t, c.image_sub(g)) == cd;
    return r;
}

}  // namespace homolog
