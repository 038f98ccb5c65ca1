#pragma once
// Finitely presented categories as explicit composition tables, plus
// functors, natural transformations, orbit computation and the elementary
// enumerations (monos, idempotents, retract pairs, isos).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdm/base.hpp"

namespace tdm {

struct FinCategory {
    struct MorData {
        std::string name;
        ObjId dom = kNone;
        ObjId cod = kNone;
    };

    std::vector<std::string> objects;   // sorted by name
    std::vector<MorData> morphisms;     // sorted by name
    std::vector<MorId> identity;        // per object
    // comp[f][g] = f;g (apply f first), kNone when undefined/not composable.
    std::vector<std::vector<MorId>> comp;
    // hom[x][y]: morphisms x -> y in ascending (= name) order.
    std::vector<std::vector<std::vector<MorId>>> hom;

    std::size_t n_obj() const { return objects.size(); }
    std::size_t n_mor() const { return morphisms.size(); }
    ObjId dom(MorId f) const { return morphisms[f].dom; }
    ObjId cod(MorId f) const { return morphisms[f].cod; }
    const std::string& oname(ObjId x) const { return objects[x]; }
    const std::string& mname(MorId f) const { return morphisms[f].name; }
    MorId id(ObjId x) const { return identity[x]; }
    bool composable(MorId f, MorId g) const { return cod(f) == dom(g); }
    MorId then(MorId f, MorId g) const { return comp[f][g]; }
    const std::vector<MorId>& homset(ObjId x, ObjId y) const { return hom[x][y]; }

    bool is_identity(MorId f) const {
        return dom(f) == cod(f) && identity[dom(f)] == f;
    }

    std::optional<ObjId> obj_by_name(const std::string& n) const {
        auto it = std::lower_bound(objects.begin(), objects.end(), n);
        if (it == objects.end() || *it != n) return std::nullopt;
        return static_cast<ObjId>(it - objects.begin());
    }
    std::optional<MorId> mor_by_name(const std::string& n) const {
        auto it = std::lower_bound(
            morphisms.begin(), morphisms.end(), n,
            [](const MorData& m, const std::string& s) { return m.name < s; });
        if (it == morphisms.end() || it->name != n) return std::nullopt;
        return static_cast<MorId>(it - morphisms.begin());
    }
};

// Incremental builder; build() sorts cells by name so ids are canonical.
class CatBuilder {
public:
    // Returns false on duplicate name.
    bool add_object(const std::string& name) {
        if (obj_.count(name)) return false;
        obj_.emplace(name, ObjId(0));
        return true;
    }
    bool add_morphism(const std::string& name, const std::string& dom,
                      const std::string& cod) {
        if (mor_.count(name)) return false;
        mor_.emplace(name, RawMor{dom, cod});
        return true;
    }
    bool has_object(const std::string& n) const { return obj_.count(n) != 0; }
    bool has_morphism(const std::string& n) const { return mor_.count(n) != 0; }
    void set_identity(const std::string& obj, const std::string& mor) {
        idents_[obj] = mor;
    }
    // f;g = h by name. Later entries overwrite earlier ones.
    void set_comp(const std::string& f, const std::string& g,
                  const std::string& h) {
        comps_[{f, g}] = h;
    }

    // Assembles the category. Typing of entries must already be sane
    // (callers go through validate_category afterwards for diagnostics);
    // unknown names here are an input error.
    FinCategory build() const {
        FinCategory c;
        for (auto& [n, _] : obj_) c.objects.push_back(n);
        std::sort(c.objects.begin(), c.objects.end());
        auto oid = [&](const std::string& n) -> ObjId {
            auto r = c.obj_by_name(n);
            check_input(r.has_value(), cat("unknown object '", n, "'"));
            return *r;
        };
        for (auto& [n, rm] : mor_)
            c.morphisms.push_back({n, oid(rm.dom), oid(rm.cod)});
        std::sort(c.morphisms.begin(), c.morphisms.end(),
                  [](const FinCategory::MorData& a, const FinCategory::MorData& b) {
                      return a.name < b.name;
                  });
        auto mid = [&](const std::string& n) -> MorId {
            auto r = c.mor_by_name(n);
            check_input(r.has_value(), cat("unknown morphism '", n, "'"));
            return *r;
        };
        c.identity.assign(c.n_obj(), kNone);
        for (auto& [on, mn] : idents_) c.identity[oid(on)] = mid(mn);
        c.comp.assign(c.n_mor(), std::vector<MorId>(c.n_mor(), kNone));
        // Identity composites are forced; explicit entries may overwrite
        // (validate_category flags disagreements as violations).
        for (MorId f = 0; f < c.n_mor(); ++f) {
            MorId i_dom = c.identity[c.dom(f)], i_cod = c.identity[c.cod(f)];
            if (i_dom != kNone) c.comp[i_dom][f] = f;
            if (i_cod != kNone) c.comp[f][i_cod] = f;
        }
        for (auto& [fg, h] : comps_) c.comp[mid(fg.first)][mid(fg.second)] = mid(h);
        c.hom.assign(c.n_obj(),
                     std::vector<std::vector<MorId>>(c.n_obj()));
        for (MorId f = 0; f < c.n_mor(); ++f)
            c.hom[c.dom(f)][c.cod(f)].push_back(f);
        return c;
    }

private:
    struct RawMor {
        std::string dom, cod;
    };
    std::map<std::string, ObjId> obj_;
    std::map<std::string, RawMor> mor_;
    std::map<std::string, std::string> idents_;
    std::map<std::pair<std::string, std::string>, std::string> comps_;
};

struct ValidationReport {
    std::vector<std::string> violations; // deterministic order
    bool valid() const { return violations.empty(); }
};

// Checks the category laws on the tables: identity assignment and laws,
// totality of composition on composable pairs, typing of composites,
// associativity. Every violation is reported, in a fixed scan order.
inline ValidationReport validate_category(const FinCategory& c) {
    ValidationReport r;
    auto bad = [&](std::string m) { r.violations.push_back(std::move(m)); };
    for (ObjId x = 0; x < c.n_obj(); ++x) {
        MorId i = c.identity[x];
        if (i == kNone) {
            bad(cat("object '", c.oname(x), "' has no identity"));
            continue;
        }
        if (c.dom(i) != x || c.cod(i) != x)
            bad(cat("identity of '", c.oname(x), "' is '", c.mname(i),
                    "' which is not an endomorphism of it"));
    }
    for (MorId f = 0; f < c.n_mor(); ++f)
        for (MorId g = 0; g < c.n_mor(); ++g) {
            MorId h = c.comp[f][g];
            if (!c.composable(f, g)) {
                if (h != kNone)
                    bad(cat("compose(", c.mname(f), ", ", c.mname(g),
                            ") defined but cod/dom mismatch"));
                continue;
            }
            if (h == kNone) {
                bad(cat("compose(", c.mname(f), ", ", c.mname(g),
                        ") undefined for composable pair"));
                continue;
            }
            if (c.dom(h) != c.dom(f) || c.cod(h) != c.cod(g))
                bad(cat("compose(", c.mname(f), ", ", c.mname(g), ") = ",
                        c.mname(h), " has wrong type"));
        }
    for (MorId f = 0; f < c.n_mor(); ++f) {
        MorId i_dom = c.identity[c.dom(f)], i_cod = c.identity[c.cod(f)];
        if (i_dom != kNone && c.comp[i_dom][f] != kNone && c.comp[i_dom][f] != f)
            bad(cat("identity law fails: id;", c.mname(f), " = ",
                    c.mname(c.comp[i_dom][f])));
        if (i_cod != kNone && c.comp[f][i_cod] != kNone && c.comp[f][i_cod] != f)
            bad(cat("identity law fails: ", c.mname(f), ";id = ",
                    c.mname(c.comp[f][i_cod])));
    }
    for (MorId f = 0; f < c.n_mor(); ++f)
        for (MorId g = 0; g < c.n_mor(); ++g) {
            if (!c.composable(f, g) || c.comp[f][g] == kNone) continue;
            for (MorId h = 0; h < c.n_mor(); ++h) {
                if (!c.composable(g, h) || c.comp[g][h] == kNone) continue;
                MorId lhs = c.comp[c.comp[f][g]][h];
                MorId rhs = c.comp[f][c.comp[g][h]];
                if (lhs != rhs)
                    bad(cat("associativity fails on (", c.mname(f), ", ",
                            c.mname(g), ", ", c.mname(h), ")"));
            }
        }
    return r;
}

// Functor as raw tables; source/target categories travel alongside in every
// operation signature (keeps the struct value-semantic and comparable).
struct Functor {
    std::vector<ObjId> obj; // indexed by source ObjId
    std::vector<MorId> mor; // indexed by source MorId
    bool operator==(const Functor& o) const {
        return obj == o.obj && mor == o.mor;
    }
};

inline Functor identity_functor(const FinCategory& c) {
    Functor f;
    f.obj.resize(c.n_obj());
    f.mor.resize(c.n_mor());
    for (ObjId x = 0; x < c.n_obj(); ++x) f.obj[x] = x;
    for (MorId m = 0; m < c.n_mor(); ++m) f.mor[m] = m;
    return f;
}

inline ValidationReport validate_functor(const FinCategory& src,
                                         const FinCategory& tgt,
                                         const Functor& F) {
    ValidationReport r;
    auto bad = [&](std::string m) { r.violations.push_back(std::move(m)); };
    if (F.obj.size() != src.n_obj() || F.mor.size() != src.n_mor()) {
        bad("functor tables have wrong size");
        return r;
    }
    for (ObjId x = 0; x < src.n_obj(); ++x)
        if (F.obj[x] >= tgt.n_obj())
            bad(cat("object image out of range for '", src.oname(x), "'"));
    for (MorId f = 0; f < src.n_mor(); ++f) {
        if (F.mor[f] >= tgt.n_mor()) {
            bad(cat("morphism image out of range for '", src.mname(f), "'"));
            continue;
        }
        if (tgt.dom(F.mor[f]) != F.obj[src.dom(f)] ||
            tgt.cod(F.mor[f]) != F.obj[src.cod(f)])
            bad(cat("image of '", src.mname(f), "' has wrong type"));
    }
    if (!r.valid()) return r;
    for (ObjId x = 0; x < src.n_obj(); ++x)
        if (F.mor[src.id(x)] != tgt.id(F.obj[x]))
            bad(cat("identity of '", src.oname(x), "' not preserved"));
    for (MorId f = 0; f < src.n_mor(); ++f)
        for (MorId g = 0; g < src.n_mor(); ++g) {
            if (!src.composable(f, g) || src.comp[f][g] == kNone) continue;
            MorId img = tgt.comp[F.mor[f]][F.mor[g]];
            if (img != F.mor[src.comp[f][g]])
                bad(cat("composition not preserved on (", src.mname(f), ", ",
                        src.mname(g), ")"));
        }
    return r;
}

struct NatTransformation {
    std::vector<MorId> at; // component per source object, in the target cat
    bool operator==(const NatTransformation& o) const { return at == o.at; }
};

inline ValidationReport validate_nat(const FinCategory& src,
                                     const FinCategory& tgt, const Functor& F,
                                     const Functor& G,
                                     const NatTransformation& a) {
    ValidationReport r;
    auto bad = [&](std::string m) { r.violations.push_back(std::move(m)); };
    if (a.at.size() != src.n_obj()) {
        bad("component table has wrong size");
        return r;
    }
    for (ObjId x = 0; x < src.n_obj(); ++x) {
        MorId cx = a.at[x];
        if (cx >= tgt.n_mor() || tgt.dom(cx) != F.obj[x] ||
            tgt.cod(cx) != G.obj[x]) {
            bad(cat("component at '", src.oname(x), "' has wrong type"));
            return r;
        }
    }
    for (MorId f = 0; f < src.n_mor(); ++f) {
        ObjId x = src.dom(f), y = src.cod(f);
        // F f ; a_y  =  a_x ; G f
        MorId lhs = tgt.comp[F.mor[f]][a.at[y]];
        MorId rhs = tgt.comp[a.at[x]][G.mor[f]];
        if (lhs == kNone || rhs == kNone || lhs != rhs)
            bad(cat("naturality fails at '", src.mname(f), "'"));
    }
    return r;
}

// Endofunctor composition: (F then G)(x) = G(F(x)).
inline Functor compose_endofunctors(const Functor& F, const Functor& G) {
    Functor h;
    h.obj.resize(F.obj.size());
    h.mor.resize(F.mor.size());
    for (std::size_t x = 0; x < F.obj.size(); ++x) h.obj[x] = G.obj[F.obj[x]];
    for (std::size_t m = 0; m < F.mor.size(); ++m) h.mor[m] = G.mor[F.mor[m]];
    return h;
}

inline Functor iterate_functor(const FinCategory& c, const Functor& F,
                               unsigned n) {
    Functor acc = identity_functor(c);
    for (unsigned i = 0; i < n; ++i) acc = compose_endofunctors(acc, F);
    return acc;
}

struct FunctorOrbit {
    unsigned preperiod = 0; // index of first repeated table
    unsigned period = 1;    // >= 1
    unsigned bound() const { return preperiod + period; } // distinct iterates
};

// Iterates F and compares full tables against the stored history. The set of
// endofunctor tables is finite, so this terminates; the cap only guards
// against pathological blow-ups.
inline FunctorOrbit functor_orbit(const FinCategory& c, const Functor& F,
                                  unsigned cap = 4096) {
    std::vector<Functor> hist;
    hist.push_back(identity_functor(c));
    for (unsigned k = 1; k <= cap; ++k) {
        Functor next = compose_endofunctors(hist.back(), F);
        for (unsigned j = 0; j < hist.size(); ++j)
            if (hist[j] == next)
                return FunctorOrbit{j, static_cast<unsigned>(hist.size()) - j};
        hist.push_back(std::move(next));
    }
    throw input_error("functor orbit exceeds iteration cap");
}

// f monic: a;f = b;f implies a = b for every parallel pair into dom f.
inline bool is_mono(const FinCategory& c, MorId f) {
    ObjId d = c.dom(f);
    for (ObjId x = 0; x < c.n_obj(); ++x) {
        const auto& hs = c.homset(x, d);
        for (MorId a : hs)
            for (MorId b : hs)
                if (a != b && c.comp[a][f] == c.comp[b][f]) return false;
    }
    return true;
}

inline std::vector<MorId> enumerate_monos(const FinCategory& c) {
    std::vector<MorId> out;
    for (MorId f = 0; f < c.n_mor(); ++f)
        if (is_mono(c, f)) out.push_back(f);
    return out;
}

inline std::vector<MorId> enumerate_idempotents(const FinCategory& c) {
    std::vector<MorId> out;
    for (MorId e = 0; e < c.n_mor(); ++e)
        if (c.dom(e) == c.cod(e) && c.comp[e][e] == e) out.push_back(e);
    return out;
}

// Section/retraction pairs through `target`: s: E -> target, r: target -> E
// with s;r = id_E.
inline std::vector<std::pair<MorId, MorId>>
enumerate_retract_pairs(const FinCategory& c, ObjId target) {
    std::vector<std::pair<MorId, MorId>> out;
    for (ObjId e = 0; e < c.n_obj(); ++e)
        for (MorId s : c.homset(e, target))
            for (MorId r : c.homset(target, e))
                if (c.comp[s][r] == c.id(e)) out.emplace_back(s, r);
    return out;
}

inline bool is_iso(const FinCategory& c, MorId f) {
    for (MorId g : c.homset(c.cod(f), c.dom(f)))
        if (c.comp[f][g] == c.id(c.dom(f)) && c.comp[g][f] == c.id(c.cod(f)))
            return true;
    return false;
}

inline std::vector<MorId> enumerate_isos(const FinCategory& c) {
    std::vector<MorId> out;
    for (MorId f = 0; f < c.n_mor(); ++f)
        if (is_iso(c, f)) out.push_back(f);
    return out;
}

inline std::optional<MorId> inverse_of(const FinCategory& c, MorId f) {
    for (MorId g : c.homset(c.cod(f), c.dom(f)))
        if (c.comp[f][g] == c.id(c.dom(f)) && c.comp[g][f] == c.id(c.cod(f)))
            return g;
    return std::nullopt;
}

} // namespace tdm
