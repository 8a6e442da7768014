#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homolog/actions.hpp"
#include "homolog/nsb.hpp"
#include "homolog/pairs.hpp"
#include "homolog/semiexact.hpp"
#include "homolog/subquotient.hpp"

namespace homolog {

// ---- reports --------------------------------------------------------------------------

struct ClauseCheck {
    std::string clause;
    bool pass = true;
    long long checked = 0;
    json witness;  // first failure

    void fail(json w) {
        if (pass) witness = std::move(w);
        pass = false;
    }
};

struct CoupleReport {
    std::string instance;
    std::vector<ClauseCheck> clauses;  // a, b, c, d, then dd
    int horizon = 0;

    bool exact() const;
    bool semiexact() const;  // clause (a) alone
    // Empty when every clause passes.
    std::string first_failure() const;
    json to_json() const;
};

// ---- ungraded couples -------------------------------------------------------------------

// D -u-> D -v-> E -del-> D
template <class C>
struct Couple {
    typename C::Obj D, E;
    typename C::Mor u, v, del;
};

template <SemiexactInstance C>
typename C::Mor power(const C& c, const typename C::Mor& u, int r) {
    auto out = c.identity(c.dom(u));
    for (int i = 0; i < r; ++i) out = c.compose(u, out);
    return out;
}

namespace detail {

template <SemiexactInstance C>
bool exact_or_false(const C& c, const typename C::Mor& f) {
    try {
        return is_exact_morphism(c, f);
    } catch (const std::exception&) {
        return false;
    }
}

}  // namespace detail

// Clause (a) at the three vertices; (b)-(d) for r from 1 to one past the point where Nim u^r
// and Ker u^r stop moving (max_r > 0 overrides).
template <SemiexactInstance C>
CoupleReport check_exact_couple(const C& c, const Couple<C>& x, int max_r = 0) {
    CoupleReport rep;
    rep.instance = c.name();
    ClauseCheck a{"a", true, 0, {}}, b{"b", true, 0, {}}, cl{"c", true, 0, {}}, d{"d", true, 0, {}}, dd{"dd", true, 0, {}};
    auto at = [&](const typename C::Mor& f, const typename C::Mor& g, const char* where) {
        ++a.checked;
        if (!is_exact_at(c, f, g)) a.fail({{"vertex", where}});
    };
    at(x.u, x.v, "D after u");
    at(x.v, x.del, "E");
    at(x.del, x.u, "D after del");
    const auto sq = c.compose(x.v, x.del);
    ++dd.checked;
    if (!c.is_null(c.compose(sq, sq))) dd.fail({{"reason", "d d is not null"}});

    std::vector<typename C::Mor> powers{x.u};
    int horizon = max_r;
    if (horizon <= 0) {
        auto im = c.image_sub(x.u);
        auto ker = c.kernel_sub(x.u);
        while (true) {
            auto next = c.compose(x.u, powers.back());
            auto im2 = c.image_sub(next);
            auto ker2 = c.kernel_sub(next);
            powers.push_back(next);
            if (im2 == im && ker2 == ker) break;
            im = im2;
            ker = ker2;
        }
        horizon = static_cast<int>(powers.size());
    }
    while (static_cast<int>(powers.size()) < horizon) powers.push_back(c.compose(x.u, powers.back()));
    rep.horizon = horizon;
    for (int r = 1; r <= horizon; ++r) {
        const auto& ur = powers[r - 1];
        ++b.checked;
        if (!detail::exact_or_false(c, ur)) b.fail({{"r", r}});
        ++cl.checked;
        if (!is_left_modular_on(c, x.v, c.kernel_sub(ur))) cl.fail({{"r", r}});
        ++d.checked;
        if (!is_right_modular_on(c, x.del, c.image_sub(ur))) d.fail({{"r", r}});
    }
    rep.clauses = {a, b, cl, d, dd};
    return rep;
}

template <class C>
struct DerivedCouple {
    Couple<C> couple;
    int r = 1;
    Subquotient<C> d_sub;   // Nim u^(r-1) / 0 in D
    Subquotient<C> d_quot;  // 1 / Ker u^(r-1) in D
    Subquotient<C> e_sub;   // E^r in E
    typename C::Mor iso;    // d_quot -> d_sub, induced by u^(r-1)
};

// The r-th derived couple built directly from C: D^r = Nim u^(r-1), E^r = del*(D^r) / v_*(Ker u^(r-1)).
// r = 1 returns the couple itself.
template <SemiexactInstance C>
DerivedCouple<C> iterate(const C& c, const Couple<C>& x, int r, bool check = true) {
    if (r < 1) throw std::invalid_argument("iterate: r must be at least 1");
    if (check) {
        auto rep = check_exact_couple(c, x);
        if (!rep.exact()) throw std::invalid_argument("couple is not exact: clause (" + rep.first_failure() + ") fails");
    }
    const auto ur = power(c, x.u, r - 1);
    const auto dnum = c.image_sub(ur);
    const auto dker = c.kernel_sub(ur);
    auto dsq = subquotient(c, x.D, dnum, c.sub_bottom(x.D));
    auto dq = subquotient(c, x.D, c.sub_top(x.D), dker);
    auto esq = subquotient(c, x.E, c.inverse_image(x.del, dnum), c.direct_image(x.v, dker));
    auto i = regular_induction(c, ur, dq, dsq);
    if (r == 1) return {x, 1, dsq, dq, esq, i};
    if (!c.is_iso(i)) throw std::logic_error("iterate: u^(r-1) does not induce an isomorphism");
    auto uu = regular_induction(c, x.u, dsq, dsq);
    auto del = regular_induction(c, x.del, esq, dsq);
    auto vbar = regular_induction(c, x.v, dq, esq);
    Couple<C> out{realised(c, dsq), realised(c, esq), uu, c.compose(vbar, c.inverse(i)), del};
    return {out, r, dsq, dq, esq, i};
}

template <SemiexactInstance C>
DerivedCouple<C> derive_couple(const C& c, const Couple<C>& x, bool check = true) {
    return iterate(c, x, 2, check);
}

// Compares C^(r+1) built directly with the derived couple of C^r, both read back in D and E:
// numerators, denominators, and kernels/images of u, v, del.
template <SemiexactInstance C>
std::vector<std::string> compare_with_derivation(const C& c, const DerivedCouple<C>& next, const DerivedCouple<C>& prev,
                                                 const DerivedCouple<C>& derived_prev) {
    std::vector<std::string> out;
    auto through_prev_d = [&](const typename C::Sub& s) {
        auto t = lift_to_ambient(c, derived_prev.d_sub, s);
        return prev.r == 1 ? t : lift_to_ambient(c, prev.d_sub, t);
    };
    auto through_prev_e = [&](const typename C::Sub& s) {
        auto t = lift_to_ambient(c, derived_prev.e_sub, s);
        return prev.r == 1 ? t : lift_to_ambient(c, prev.e_sub, t);
    };
    auto direct_d = [&](const typename C::Sub& s) { return lift_to_ambient(c, next.d_sub, s); };
    auto direct_e = [&](const typename C::Sub& s) { return lift_to_ambient(c, next.e_sub, s); };
    const auto& a = next.couple;
    const auto& b = derived_prev.couple;
    auto same = [&](bool ok, const char* what) {
        if (!ok) out.push_back(what);
    };
    same(direct_d(c.sub_top(a.D)) == through_prev_d(c.sub_top(b.D)), "D numerator");
    same(direct_d(c.sub_bottom(a.D)) == through_prev_d(c.sub_bottom(b.D)), "D denominator");
    same(direct_e(c.sub_top(a.E)) == through_prev_e(c.sub_top(b.E)), "E numerator");
    same(direct_e(c.sub_bottom(a.E)) == through_prev_e(c.sub_bottom(b.E)), "E denominator");
    same(direct_d(c.kernel_sub(a.u)) == through_prev_d(c.kernel_sub(b.u)), "Ker u");
    same(direct_d(c.image_sub(a.u)) == through_prev_d(c.image_sub(b.u)), "Nim u");
    same(direct_d(c.kernel_sub(a.v)) == through_prev_d(c.kernel_sub(b.v)), "Ker v");
    same(direct_e(c.image_sub(a.v)) == through_prev_e(c.image_sub(b.v)), "Nim v");
    same(direct_e(c.kernel_sub(a.del)) == through_prev_e(c.kernel_sub(b.del)), "Ker del");
    same(direct_d(c.image_sub(a.del)) == through_prev_d(c.image_sub(b.del)), "Nim del");
    return out;
}

template <SemiexactInstance C>
json couple_json(const C& c, const Couple<C>& x) {
    return {{"instance", c.name()},
            {"objects", {{"D", c.obj_json(x.D)}, {"E", c.obj_json(x.E)}}},
            {"u", c.mor_json(x.u)},
            {"v", c.mor_json(x.v)},
            {"del", c.mor_json(x.del)}};
}

// ---- bigraded couples ----------------------------------------------------------------------

using Bidegree = std::pair<int, int>;  // (n, p)

// How D continues past the p-window: Zero, Constant (the edge object with identity u, E zero),
// or Unknown (read as zero, and entries depending on it are flagged as truncated).
enum class Extend { Zero, Constant, Unknown };

std::string extend_name(Extend e);
Extend extend_from_name(const std::string& s);

// u_np: D_{n,p-1} -> D_np, v_np: D_{n,p+type-1} -> E_np, del_np: E_np -> D_{n-1,p-1}.
// Rows outside [n_lo, n_hi] are zero. Missing entries inside the window are zero objects and
// null maps. u is stored for p in (p_lo, p_hi]; at p_lo and above p_hi it follows the extension.
// A quasi couple has no E in row n_lo and does not ask u in that row to be exact.
template <class C>
struct BigradedCouple {
    int n_lo = 0, n_hi = 0, p_lo = 0, p_hi = 0;
    int type = 1;
    bool quasi = false;
    Extend below = Extend::Zero, above = Extend::Zero;
    typename C::Obj zero;
    std::map<Bidegree, typename C::Obj> D, E;
    std::map<Bidegree, typename C::Mor> u, v, del;
    std::set<Bidegree> truncated;  // E entries computed from data outside the window
};

template <SemiexactInstance C>
class CoupleView {
public:
    using Obj = typename C::Obj;
    using Mor = typename C::Mor;

    CoupleView(const C& c, const BigradedCouple<C>& x) : c_(c), x_(x) {}

    bool row(int n) const { return n >= x_.n_lo && n <= x_.n_hi; }
    bool has_e_row(int n) const { return row(n) && !(x_.quasi && n == x_.n_lo); }
    bool in_window(int p) const { return p >= x_.p_lo && p <= x_.p_hi; }

    // True when reading D at p relies on unknown data.
    bool unknown_d(int n, int p) const {
        if (!row(n)) return false;
        if (p < x_.p_lo) return x_.below == Extend::Unknown;
        if (p > x_.p_hi) return x_.above == Extend::Unknown;
        return false;
    }
    bool unknown_e(int n, int p) const {
        if (!has_e_row(n)) return false;
        if (p < x_.p_lo) return x_.below == Extend::Unknown;
        if (p > x_.p_hi) return x_.above == Extend::Unknown;
        return x_.truncated.count({n, p}) > 0;
    }

    Obj D(int n, int p) const {
        if (!row(n)) return x_.zero;
        if (p < x_.p_lo) return x_.below == Extend::Constant ? stored_d(n, x_.p_lo) : x_.zero;
        if (p > x_.p_hi) return x_.above == Extend::Constant ? stored_d(n, x_.p_hi) : x_.zero;
        return stored_d(n, p);
    }

    Obj E(int n, int p) const {
        if (!has_e_row(n) || !in_window(p)) return x_.zero;
        auto it = x_.E.find({n, p});
        return it == x_.E.end() ? x_.zero : it->second;
    }

    Mor u(int n, int p) const {
        if (!row(n)) return c_.identity(x_.zero);
        if (p <= x_.p_lo) {
            if (x_.below == Extend::Constant) return c_.identity(stored_d(n, x_.p_lo));
            return null_map(D(n, p - 1), D(n, p));
        }
        if (p > x_.p_hi) {
            if (x_.above == Extend::Constant) return c_.identity(stored_d(n, x_.p_hi));
            return null_map(D(n, p - 1), D(n, p));
        }
        auto it = x_.u.find({n, p});
        return it == x_.u.end() ? null_map(D(n, p - 1), D(n, p)) : it->second;
    }

    Mor v(int n, int p) const {
        const int t = x_.type - 1;
        if (has_e_row(n) && in_window(p)) {
            auto it = x_.v.find({n, p});
            if (it != x_.v.end()) return it->second;
        }
        return null_map(D(n, p + t), E(n, p));
    }

    Mor del(int n, int p) const {
        if (has_e_row(n) && in_window(p)) {
            auto it = x_.del.find({n, p});
            if (it != x_.del.end()) return it->second;
        }
        return null_map(E(n, p), D(n - 1, p - 1));
    }

    // D_{n,from} -> D_{n,to}
    Mor u_power(int n, int from, int to) const {
        auto out = c_.identity(D(n, from));
        for (int q = from + 1; q <= to; ++q) out = c_.compose(u(n, q), out);
        return out;
    }

    Mor null_map(const Obj& a, const Obj& b) const {
        if constexpr (requires { c_.zero_map(a, b); }) return c_.zero_map(a, b);
        auto in = c_.homs(a, x_.zero);
        auto out = c_.homs(x_.zero, b);
        if (in.empty() || out.empty()) throw std::logic_error(c_.name() + ": zero object has no maps to or from an object");
        return c_.compose(out.front(), in.front());
    }

    const BigradedCouple<C>& couple() const { return x_; }

private:
    Obj stored_d(int n, int p) const {
        auto it = x_.D.find({n, p});
        return it == x_.D.end() ? x_.zero : it->second;
    }

    const C& c_;
    const BigradedCouple<C>& x_;
};

// Throws std::invalid_argument naming the first stored map whose ends do not match the objects.
template <SemiexactInstance C>
void validate_couple(const C& c, const BigradedCouple<C>& x) {
    CoupleView<C> w(c, x);
    auto where = [](const char* m, const Bidegree& k) {
        return std::string("supplied maps fail morphism typing: ") + m + " at (" + std::to_string(k.first) + ", " +
               std::to_string(k.second) + ")";
    };
    if (x.type < 1) throw std::invalid_argument("couple type must be at least 1");
    for (const auto& [k, f] : x.u)
        if (k.second <= x.p_lo || k.second > x.p_hi || !(c.dom(f) == w.D(k.first, k.second - 1)) ||
            !(c.cod(f) == w.D(k.first, k.second)))
            throw std::invalid_argument(where("u", k));
    for (const auto& [k, f] : x.v)
        if (!w.has_e_row(k.first) || !w.in_window(k.second) || !(c.dom(f) == w.D(k.first, k.second + x.type - 1)) ||
            !(c.cod(f) == w.E(k.first, k.second)))
            throw std::invalid_argument(where("v", k));
    for (const auto& [k, f] : x.del)
        if (!w.has_e_row(k.first) || !w.in_window(k.second) || !(c.dom(f) == w.E(k.first, k.second)) ||
            !(c.cod(f) == w.D(k.first - 1, k.second - 1)))
            throw std::invalid_argument(where("del", k));
}

// Exactness of the long sequences, exactness of u-powers, and the two modularity clauses, over the
// window widened by the reach of the maps. Quasi couples skip exactness at the end of row n_lo and
// never test u in that row.
template <SemiexactInstance C>
CoupleReport check_bigraded_couple(const C& c, const BigradedCouple<C>& x) {
    validate_couple(c, x);
    CoupleView<C> w(c, x);
    CoupleReport rep;
    rep.instance = c.name();
    ClauseCheck a{"a", true, 0, {}}, b{"b", true, 0, {}}, cl{"c", true, 0, {}}, d{"d", true, 0, {}}, dd{"dd", true, 0, {}};
    const int t = x.type - 1;
    const int reach = x.p_hi - x.p_lo + 2;
    rep.horizon = reach;
    const int lo = x.p_lo - 1, hi = x.p_hi + t + 1;
    auto pos = [](int n, int p) { return json{{"n", n}, {"p", p}}; };
    for (int n = x.n_lo; n <= x.n_hi + 1; ++n)
        for (int p = lo; p <= hi; ++p) {
            const bool e_row = w.has_e_row(n);
            if (e_row) {
                ++a.checked;
                if (!is_exact_at(c, w.v(n, p), w.del(n, p))) a.fail({{"vertex", "E"}, {"at", pos(n, p)}});
                ++a.checked;
                if (!is_exact_at(c, w.u(n, p + t), w.v(n, p))) a.fail({{"vertex", "D after u"}, {"at", pos(n, p + t)}});
                const auto d1 = c.compose(w.v(n - 1, p - 1 - t), w.del(n, p));
                const auto d2 = c.compose(w.v(n - 2, p - 2 - 2 * t), w.del(n - 1, p - 1 - t));
                ++dd.checked;
                if (!c.is_null(c.compose(d2, d1))) dd.fail({{"at", pos(n, p)}});
            }
            if (n - 1 >= x.n_lo && e_row) {
                ++a.checked;
                if (!is_exact_at(c, w.del(n, p), w.u(n - 1, p)))
                    a.fail({{"vertex", "D after del"}, {"at", pos(n - 1, p - 1)}});
            }
            for (int k = 1; k <= reach; ++k) {
                if (e_row && w.row(n)) {
                    ++b.checked;
                    if (!detail::exact_or_false(c, w.u_power(n, p - k, p))) b.fail({{"at", pos(n, p)}, {"r", k}});
                    ++cl.checked;
                    if (!is_left_modular_on(c, w.v(n, p), c.kernel_sub(w.u_power(n, p + t, p + t + k))))
                        cl.fail({{"at", pos(n, p)}, {"r", k}});
                }
                if (e_row && n - 1 >= x.n_lo) {
                    ++d.checked;
                    if (!is_right_modular_on(c, w.del(n, p), c.image_sub(w.u_power(n - 1, p - 1 - k, p - 1))))
                        d.fail({{"at", pos(n, p)}, {"r", k}});
                }
            }
        }
    rep.clauses = {a, b, cl, d, dd};
    return rep;
}

template <class C>
struct DerivedBigraded {
    BigradedCouple<C> couple;
    std::map<Bidegree, Subquotient<C>> d_sub, e_sub;  // inside the parent's D_np and E_np
};

// The derived couple of a type-t couple, of type t + 1. The window grows by one step upward.
template <SemiexactInstance C>
DerivedBigraded<C> derive_bigraded(const C& c, const BigradedCouple<C>& x, bool check = true) {
    if (check) {
        auto rep = check_bigraded_couple(c, x);
        if (!rep.exact()) throw std::invalid_argument("couple is not exact: clause (" + rep.first_failure() + ") fails");
    } else {
        validate_couple(c, x);
    }
    CoupleView<C> w(c, x);
    const int t = x.type - 1;
    DerivedBigraded<C> out;
    auto& y = out.couple;
    y.n_lo = x.n_lo;
    y.n_hi = x.n_hi;
    y.p_lo = x.p_lo;
    y.p_hi = x.p_hi + 1;
    y.type = x.type + 1;
    y.quasi = x.quasi;
    y.below = x.below;
    y.above = x.above;
    y.zero = x.zero;

    std::map<Bidegree, Subquotient<C>> dsubs;
    auto dsub = [&](int n, int p) -> const Subquotient<C>& {
        auto it = dsubs.find({n, p});
        if (it != dsubs.end()) return it->second;
        auto dnp = w.D(n, p);
        auto s = subquotient(c, dnp, c.image_sub(w.u(n, p)), c.sub_bottom(dnp));
        return dsubs.emplace(Bidegree{n, p}, std::move(s)).first->second;
    };
    CoupleView<C> yw(c, y);
    for (int n = x.n_lo; n <= x.n_hi; ++n)
        for (int p = y.p_lo; p <= y.p_hi; ++p) {
            out.d_sub.emplace(Bidegree{n, p}, dsub(n, p));
            y.D[{n, p}] = realised(c, dsub(n, p));
        }
    for (int n = x.n_lo; n <= x.n_hi; ++n) {
        if (!w.has_e_row(n)) continue;
        for (int p = y.p_lo; p <= y.p_hi; ++p) {
            const auto enp = w.E(n, p);
            const auto num = c.inverse_image(w.del(n, p), dsub(n - 1, p - 1).num);
            const auto den = c.direct_image(w.v(n, p), c.kernel_sub(w.u(n, p + t + 1)));
            auto esq = subquotient(c, enp, num, den);
            y.E[{n, p}] = realised(c, esq);
            out.e_sub.emplace(Bidegree{n, p}, esq);
            if (w.unknown_e(n, p) || w.unknown_d(n - 1, p - 1) || w.unknown_d(n - 1, p - 2) || w.unknown_d(n, p + t) ||
                w.unknown_d(n, p + t + 1))
                y.truncated.insert({n, p});
        }
    }
    // A map whose ends fall outside the new window must be null there; it then stays implicit.
    auto place = [&](std::map<Bidegree, typename C::Mor>& m, const Bidegree& k, typename C::Mor f,
                     const typename C::Obj& from, const typename C::Obj& to) {
        if (c.dom(f) == from && c.cod(f) == to) m[k] = std::move(f);
        else if (!c.is_null(f)) throw std::logic_error("derive: induced map leaves the window");
    };
    for (int n = x.n_lo; n <= x.n_hi; ++n) {
        for (int p = y.p_lo + 1; p <= y.p_hi; ++p) y.u[{n, p}] = regular_induction(c, w.u(n, p), dsub(n, p - 1), dsub(n, p));
        if (!w.has_e_row(n)) continue;
        for (int p = y.p_lo; p <= y.p_hi; ++p) {
            const auto& esq = out.e_sub.at({n, p});
            place(y.del, {n, p}, regular_induction(c, w.del(n, p), esq, dsub(n - 1, p - 1)), y.E.at({n, p}),
                  yw.D(n - 1, p - 1));
            const auto src = w.D(n, p + t);
            auto dq = subquotient(c, src, c.sub_top(src), c.kernel_sub(w.u(n, p + t + 1)));
            auto vbar = regular_induction(c, w.v(n, p), dq, esq);
            auto iso = regular_induction(c, w.u(n, p + t + 1), dq, dsub(n, p + t + 1));
            if (!c.is_iso(iso)) throw std::logic_error("derive: u does not induce an isomorphism");
            place(y.v, {n, p}, c.compose(vbar, c.inverse(iso)), yw.D(n, p + t + 1), y.E.at({n, p}));
        }
    }
    return out;
}

// ---- spectral pages -------------------------------------------------------------------------

template <class C>
struct PageEntry {
    Subquotient<C> sub;  // E^r_np inside E_np
    typename C::Mor d;   // d^r: E^r_np -> E^r_{n-1,p-r}
    bool truncated = false;
};

template <class C>
struct SpectralPage {
    int r = 1;
    std::map<Bidegree, PageEntry<C>> entries;
};

struct Window {
    int n_lo = 0, n_hi = 0, p_lo = 0, p_hi = 0;
};

struct PageAudit {
    bool dd_null = true;
    bool homology = true;     // E^(r+1) = Ker d^r / Nim d^r at every entry
    bool den_below_num = true;
    int stable_from = 0;      // first r with E^r = E^(r+1) = ... = E^(r_max); 0 if not reached
    long long checked = 0;
    std::vector<std::string> notices;
};

template <class C>
struct SpectralSequence {
    Window window;
    std::vector<SpectralPage<C>> pages;
    PageAudit audit;
};

// Memoised pages of a type-1 couple straight from the closed formulas.
template <SemiexactInstance C>
class PageBuilder {
public:
    using Obj = typename C::Obj;
    using Mor = typename C::Mor;
    using Sub = typename C::Sub;

    PageBuilder(const C& c, const BigradedCouple<C>& x) : c_(c), x_(x), w_(c, x) {
        if (x.type != 1) throw std::invalid_argument("pages are computed from a couple of type 1");
        validate_couple(c, x);
    }

    Sub d_num(int r, int n, int p) { return c_.image_sub(w_.u_power(n, p - r + 1, p)); }

    const Subquotient<C>& d_sub(int r, int n, int p) {
        return memo(dsub_, r, n, p, [&] {
            auto a = w_.D(n, p);
            return subquotient(c_, a, d_num(r, n, p), c_.sub_bottom(a));
        });
    }

    const Subquotient<C>& d_quot(int r, int n, int p) {
        return memo(dquot_, r, n, p, [&] {
            auto a = w_.D(n, p);
            return subquotient(c_, a, c_.sub_top(a), c_.kernel_sub(w_.u_power(n, p, p + r - 1)));
        });
    }

    const Subquotient<C>& e_sub(int r, int n, int p) {
        return memo(esub_, r, n, p, [&] {
            auto num = c_.inverse_image(w_.del(n, p), d_num(r, n - 1, p - 1));
            auto den = c_.direct_image(w_.v(n, p), c_.kernel_sub(w_.u_power(n, p, p + r - 1)));
            return subquotient(c_, w_.E(n, p), num, den);
        });
    }

    // del^(r): E^r_np -> D^r_{n-1,p-1}
    Mor del_r(int r, int n, int p) { return regular_induction(c_, w_.del(n, p), e_sub(r, n, p), d_sub(r, n - 1, p - 1)); }

    // v^(r): D^r_{n,p+r-1} -> E^r_np through the inverse of the iso induced by u^(r-1).
    Mor v_r(int r, int n, int p) {
        const auto& dq = d_quot(r, n, p);
        auto vlow = regular_induction(c_, w_.v(n, p), dq, e_sub(r, n, p));
        auto iso = regular_induction(c_, w_.u_power(n, p, p + r - 1), dq, d_sub(r, n, p + r - 1));
        if (!c_.is_iso(iso)) throw std::logic_error("pages: u^(r-1) does not induce an isomorphism");
        return c_.compose(vlow, c_.inverse(iso));
    }

    const Mor& d(int r, int n, int p) {
        auto key = std::make_tuple(r, n, p);
        auto it = dmap_.find(key);
        if (it != dmap_.end()) return it->second;
        auto out = del_r(r, n, p);
        const auto& target = e_sub(r, n - 1, p - r);
        if (w_.has_e_row(n - 1) && !is_null_object(c_, realised(c_, target)) && !is_null_object(c_, c_.cod(out)))
            out = c_.compose(v_r(r, n - 1, p - r), out);
        else
            out = w_.null_map(realised(c_, e_sub(r, n, p)), realised(c_, target));
        return dmap_.emplace(key, std::move(out)).first->second;
    }

    // Whether E^r_np or d^r_np reads data outside the window on an unknown side.
    bool truncated(int r, int n, int p) const {
        if (w_.unknown_e(n, p) || w_.unknown_e(n - 1, p - r)) return true;
        for (int q = p - r; q <= p + r; ++q)
            if (w_.unknown_d(n, q) || w_.unknown_d(n - 1, q)) return true;
        return false;
    }

    const CoupleView<C>& view() const { return w_; }

private:
    template <class M, class F>
    const Subquotient<C>& memo(M& m, int r, int n, int p, F make) {
        auto key = std::make_tuple(r, n, p);
        auto it = m.find(key);
        if (it != m.end()) return it->second;
        return m.emplace(key, make()).first->second;
    }

    const C& c_;
    const BigradedCouple<C>& x_;
    CoupleView<C> w_;
    std::map<std::tuple<int, int, int>, Subquotient<C>> dsub_, dquot_, esub_;
    std::map<std::tuple<int, int, int>, Mor> dmap_;
};

// Pages 1..r_max over the view window (default: the couple's window), with the audits:
// d d null, E^(r+1) = H(E^r, d^r), Den <= Num, and the stabilisation point.
template <SemiexactInstance C>
SpectralSequence<C> bigraded_pages(const C& c, const BigradedCouple<C>& x, int r_max, const Window* view = nullptr) {
    if (r_max < 1) throw std::invalid_argument("r_max must be at least 1");
    PageBuilder<C> pb(c, x);
    SpectralSequence<C> ss;
    ss.window = view ? *view : Window{x.n_lo, x.n_hi, x.p_lo, x.p_hi};
    const auto& win = ss.window;
    std::set<Bidegree> flagged;
    for (int r = 1; r <= r_max + 1; ++r) {
        SpectralPage<C> page;
        page.r = r;
        for (int n = win.n_lo; n <= win.n_hi; ++n)
            for (int p = win.p_lo; p <= win.p_hi; ++p) {
                if (!pb.view().has_e_row(n)) continue;
                PageEntry<C> e{pb.e_sub(r, n, p), pb.d(r, n, p), pb.truncated(r, n, p)};
                if (!c.sub_leq(e.sub.ambient, e.sub.den, e.sub.num)) ss.audit.den_below_num = false;
                if (e.truncated && r <= r_max && flagged.insert({n, p}).second)
                    ss.audit.notices.push_back("truncation: E^" + std::to_string(r) + "_(" + std::to_string(n) + "," +
                                               std::to_string(p) + ") reads data outside the supplied window; read as zero");
                page.entries.emplace(Bidegree{n, p}, std::move(e));
            }
        ss.pages.push_back(std::move(page));
    }
    for (int r = 1; r <= r_max; ++r) {
        for (const auto& [k, e] : ss.pages[r - 1].entries) {
            const auto [n, p] = k;
            ++ss.audit.checked;
            const auto& back = pb.d(r, n - 1, p - r);
            if (!c.is_null(c.compose(back, e.d))) ss.audit.dd_null = false;
            const auto& next = ss.pages[r].entries.at(k).sub;
            const auto& in = pb.d(r, n + 1, p + r);
            const auto kd = lift_to_ambient(c, e.sub, c.kernel_sub(e.d));
            const auto id = lift_to_ambient(c, e.sub, c.image_sub(in));
            if (!(kd == next.num) || !(id == next.den)) ss.audit.homology = false;
        }
    }
    auto same_page = [&](const SpectralPage<C>& a, const SpectralPage<C>& b) {
        for (const auto& [k, e] : a.entries) {
            const auto& f = b.entries.at(k);
            if (!(e.sub.num == f.sub.num) || !(e.sub.den == f.sub.den)) return false;
        }
        return true;
    };
    if (same_page(ss.pages[r_max - 1], ss.pages[r_max])) {
        int s = r_max;
        while (s > 1 && same_page(ss.pages[s - 2], ss.pages[s - 1])) --s;
        ss.audit.stable_from = s;
    } else {
        ss.audit.notices.push_back("pages have not stabilised by r = " + std::to_string(r_max));
    }
    ss.pages.pop_back();
    return ss;
}

// Page r from the closed formulas against r - 1 derivations, read back in E_np and D_np.
template <SemiexactInstance C>
std::vector<std::string> compare_pages_with_derivation(const C& c, const BigradedCouple<C>& x, int r_max,
                                                       const Window* view = nullptr) {
    std::vector<std::string> out;
    PageBuilder<C> pb(c, x);
    // derived couples only store entries inside the original window, so a wider view is clipped
    Window win{x.n_lo, x.n_hi, x.p_lo, x.p_hi};
    if (view)
        win = {std::max(win.n_lo, view->n_lo), std::min(win.n_hi, view->n_hi), std::max(win.p_lo, view->p_lo),
               std::min(win.p_hi, view->p_hi)};
    std::vector<DerivedBigraded<C>> chain;
    BigradedCouple<C> cur = x;
    for (int r = 2; r <= r_max; ++r) {
        chain.push_back(derive_bigraded(c, cur, false));
        cur = chain.back().couple;
        CoupleView<C> cw(c, cur);
        auto lift = [&](bool e_side, const Bidegree& k, typename C::Sub s) {
            for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                s = lift_to_ambient(c, (e_side ? it->e_sub : it->d_sub).at(k), s);
            return s;
        };
        for (int n = win.n_lo; n <= win.n_hi; ++n)
            for (int p = win.p_lo; p <= win.p_hi; ++p) {
                const Bidegree k{n, p};
                const std::string at = " at r=" + std::to_string(r) + " (" + std::to_string(n) + "," + std::to_string(p) + ")";
                if (!(lift(false, k, c.sub_top(cur.D.at(k))) == pb.d_num(r, n, p))) out.push_back("D numerator" + at);
                if (!cw.has_e_row(n)) continue;
                const auto& direct = pb.e_sub(r, n, p);
                const auto& obj = cur.E.at(k);
                if (!(lift(true, k, c.sub_top(obj)) == direct.num)) out.push_back("E numerator" + at);
                if (!(lift(true, k, c.sub_bottom(obj)) == direct.den)) out.push_back("E denominator" + at);
                const auto back = [&](const typename C::Mor& f) { return lift_to_ambient(c, direct, c.kernel_sub(f)); };
                if (!(lift(true, k, c.kernel_sub(cw.del(n, p))) == back(pb.del_r(r, n, p)))) out.push_back("Ker del" + at);
                const auto dd = c.compose(cw.v(n - 1, p - r), cw.del(n, p));
                if (!(lift(true, k, c.kernel_sub(dd)) == back(pb.d(r, n, p)))) out.push_back("Ker d" + at);
                if (!(lift(true, k, c.image_sub(cw.v(n, p))) == lift_to_ambient(c, direct, c.image_sub(pb.v_r(r, n, p)))))
                    out.push_back("Nim v" + at);
            }
    }
    return out;
}

template <SemiexactInstance C>
json bigraded_json(const C& c, const BigradedCouple<C>& x) {
    json j = {{"instance", c.name()},
              {"window", {{"n", {x.n_lo, x.n_hi}}, {"p", {x.p_lo, x.p_hi}}}},
              {"type", x.type},
              {"quasi", x.quasi},
              {"below", extend_name(x.below)},
              {"above", extend_name(x.above)},
              {"zero", c.obj_json(x.zero)}};
    json d = json::array(), e = json::array();
    for (const auto& [k, o] : x.D) d.push_back({{"n", k.first}, {"p", k.second}, {"object", c.obj_json(o)}});
    for (const auto& [k, o] : x.E) e.push_back({{"n", k.first}, {"p", k.second}, {"object", c.obj_json(o)}});
    j["objects"] = {{"D", d}, {"E", e}};
    auto maps = [&](const std::map<Bidegree, typename C::Mor>& m) {
        json a = json::array();
        for (const auto& [k, f] : m) a.push_back({{"n", k.first}, {"p", k.second}, {"map", c.mor_json(f)}});
        return a;
    };
    j["u"] = maps(x.u);
    j["v"] = maps(x.v);
    j["del"] = maps(x.del);
    return j;
}

template <class C>
using ObjParser = std::function<typename C::Obj(const json&)>;
template <class C>
using MorParser = std::function<typename C::Mor(const json&, const typename C::Obj&, const typename C::Obj&)>;

// Objects first, then maps typed against them; throws std::invalid_argument on a mismatch.
template <SemiexactInstance C>
BigradedCouple<C> bigraded_from_json(const C& c, const json& j, const ObjParser<C>& obj, const MorParser<C>& mor) {
    BigradedCouple<C> x;
    x.n_lo = j.at("window").at("n").at(0).get<int>();
    x.n_hi = j.at("window").at("n").at(1).get<int>();
    x.p_lo = j.at("window").at("p").at(0).get<int>();
    x.p_hi = j.at("window").at("p").at(1).get<int>();
    x.type = j.value("type", 1);
    x.quasi = j.value("quasi", false);
    x.below = extend_from_name(j.value("below", std::string("unknown")));
    x.above = extend_from_name(j.value("above", std::string("unknown")));
    x.zero = obj(j.at("zero"));
    for (const auto& e : j.at("objects").at("D")) x.D[{e.at("n").get<int>(), e.at("p").get<int>()}] = obj(e.at("object"));
    for (const auto& e : j.at("objects").at("E")) x.E[{e.at("n").get<int>(), e.at("p").get<int>()}] = obj(e.at("object"));
    CoupleView<C> w(c, x);
    const int t = x.type - 1;
    for (const auto& e : j.value("u", json::array())) {
        const int n = e.at("n").get<int>(), p = e.at("p").get<int>();
        x.u[{n, p}] = mor(e.at("map"), w.D(n, p - 1), w.D(n, p));
    }
    for (const auto& e : j.value("v", json::array())) {
        const int n = e.at("n").get<int>(), p = e.at("p").get<int>();
        x.v[{n, p}] = mor(e.at("map"), w.D(n, p + t), w.E(n, p));
    }
    for (const auto& e : j.value("del", json::array())) {
        const int n = e.at("n").get<int>(), p = e.at("p").get<int>();
        x.del[{n, p}] = mor(e.at("map"), w.E(n, p), w.D(n - 1, p - 1));
    }
    validate_couple(c, x);
    return x;
}

template <SemiexactInstance C>
json pages_json(const C& c, const SpectralSequence<C>& ss) {
    json pages = json::array();
    for (const auto& pg : ss.pages) {
        json entries = json::array();
        for (const auto& [k, e] : pg.entries) {
            const auto& obj = realised(c, e.sub);
            entries.push_back({{"n", k.first},
                               {"p", k.second},
                               {"num", c.sub_json(e.sub.ambient, e.sub.num)},
                               {"den", c.sub_json(e.sub.ambient, e.sub.den)},
                               {"object", c.obj_json(obj)},
                               {"null", is_null_object(c, obj)},
                               {"d_target", {{"n", k.first - 1}, {"p", k.second - pg.r}}},
                               {"d", c.mor_json(e.d)},
                               {"truncated", e.truncated}});
        }
        pages.push_back({{"r", pg.r}, {"entries", entries}});
    }
    return {{"instance", c.name()},
            {"window", {{"n", {ss.window.n_lo, ss.window.n_hi}}, {"p", {ss.window.p_lo, ss.window.p_hi}}}},
            {"pages", pages},
            {"audit",
             {{"dd_null", ss.audit.dd_null},
              {"homology", ss.audit.homology},
              {"den_below_num", ss.audit.den_below_num},
              {"stable_from", ss.audit.stable_from},
              {"checked", ss.audit.checked},
              {"notices", ss.audit.notices}}}};
}

// ---- filtered complexes over the field with two elements -------------------------------------

// Basis vectors of C_k carry a filtration level; F_p C_k is spanned by those of level <= p, and
// F_(steps-1) = C. diff[k][j] is the boundary of basis vector j of C_k as a bitmask over C_(k-1).
struct FilteredComplex {
    int steps = 1;
    std::vector<std::vector<int>> level;
    std::vector<std::vector<unsigned>> diff;

    int top_degree() const { return static_cast<int>(level.size()) - 1; }
    int dim(int k) const { return k < 0 || k > top_degree() ? 0 : static_cast<int>(level[k].size()); }
    int total_dim() const;
    unsigned filtered(int k, int p) const;  // mask of F_p C_k
};

bool is_filtered_complex(const FilteredComplex& fc, std::string* why = nullptr);

// D_np = H_n(F_p), E_np = H_n(F_p / F_(p-1)) as elementary abelian 2-groups in Gp; F_(-1) = 0.
BigradedCouple<GpCat> filtered_couple(const FilteredComplex& fc);

// dim F_p H_n / F_(p-1) H_n, by enumerating every vector.
std::map<Bidegree, int> associated_graded_oracle(const FilteredComplex& fc);

// log2 of the order of every entry of a page.
std::map<Bidegree, int> page_dimensions(const SpectralPage<GpCat>& page);

// One representative per isomorphism type: direct sums of single classes and of pairs y -> x with
// level(x) <= level(y), degrees 0..max_degree, total dimension 1..max_dim. Each is put through a
// random filtered change of basis drawn from seed.
std::vector<FilteredComplex> enumerate_filtered_complexes(int max_dim, int steps, int max_degree, std::uint64_t seed);

json filtered_complex_json(const FilteredComplex& fc);
FilteredComplex filtered_complex_from_json(const json& j);

// ---- abelian couples ----------------------------------------------------------------------------

// Abelian groups of order <= max_order (at most 16), one per isomorphism class.
std::vector<NamedGroup> small_abelian_groups(int max_order);

// Exact couples D -u-> D -v-> E -del-> D with E an extension of Ker u by Cok u, split or not.
// Enumerated deterministically over D of order <= max_d, at most limit couples.
std::vector<Couple<GpCat>> abelian_couples(int max_d, std::size_t limit);

// ---- towers of fibrations ------------------------------------------------------------------------

// Homotopy data of f_s: X_s -> X_(s-1) with fibre F_s, for n = 0..depth; X_(-1) is a point.
struct TowerLevel {
    std::vector<GroupRef> pi_x;             // pi_n X_s at index n - 1
    std::vector<GroupRef> pi_f;             // pi_n F_s at index n - 1
    Pointed pi0_x;
    Action pi0_f;                           // pi_0 F_s under pi_1 X_(s-1)
    std::vector<std::vector<int>> f_star;   // index n: pi_n X_s -> pi_n X_(s-1)
    std::vector<std::vector<int>> i_star;   // index n: pi_n F_s -> pi_n X_s
    std::vector<std::vector<int>> delta;    // index n >= 1: pi_n X_(s-1) -> pi_(n-1) F_s
};

struct Tower {
    int depth = 1;
    std::vector<TowerLevel> levels;
    bool path_connected() const;
};

// Throws std::invalid_argument when a supplied map fails morphism typing.
void validate_tower(const Tower& t);

// X_s = K(G_s, 1) x P_s, f_s = B(phi_s) x psi_s. phi[0] and psi[0] are ignored (X_(-1) is a point).
Tower group_tower(const std::vector<GroupRef>& groups, const std::vector<std::vector<int>>& phi,
                  const std::vector<Pointed>& sets = {}, const std::vector<std::vector<int>>& psi = {});

// The exact couple in Ngp for a tower of path-connected spaces: D_np = pi_(n+1) X_(-p-1),
// E_np = pi_n F_(-p) (n > 0), E_0p = (pi_1 X_(-p-1), image of pi_1 X_(-p)).
BigradedCouple<PairCat> tower_couple_ngp(const Tower& t);
// The quasi-exact couple in Nac: D_np = pi_n X_(-p-1), E_np = pi_(n-1) F_(-p), E_1p the action.
BigradedCouple<ActionCat> tower_couple_nac(const Tower& t);

json tower_json(const Tower& t);
Tower tower_from_json(const json& j);

}  // namespace homolog
