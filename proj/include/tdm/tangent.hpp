#pragma once
// Tangent structures on finitely presented categories: the data (functor T,
// transformations p, z, s, l, c, optional negation, fibered-power witnesses)
// and the full axiom checker with one named equation per report entry.
// Composition is diagrammatic throughout: f;g applies f first.

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/fincat.hpp"
#include "tdm/limits.hpp"

namespace tdm {

// Witness that the n-fold self-pullback of p_M exists: apex with n
// projections to TM and the full mediator table for n-leg cones.
struct TnWitness {
    ObjId apex = kNone;
    std::vector<MorId> projections;
    std::map<std::vector<MorId>, MorId> mediators;
};

struct TangentStructure {
    Functor T;
    std::vector<MorId> p, z, s, l, c; // component per object
    std::optional<std::vector<MorId>> neg;
    unsigned bound = 2; // witnesses supplied for n = 2..bound
    std::map<std::pair<ObjId, unsigned>, TnWitness> witnesses;
};

struct AxiomEntry {
    std::string group;
    std::string name;
    bool ok = false;
    std::string detail;
};

struct AxiomReport {
    std::vector<AxiomEntry> entries;
    bool ok() const {
        for (const auto& e : entries)
            if (!e.ok) return false;
        return true;
    }
    const AxiomEntry* first_failure() const {
        for (const auto& e : entries)
            if (!e.ok) return &e;
        return nullptr;
    }
    void add(std::string group, std::string name, bool ok,
             std::string detail = "") {
        entries.push_back({std::move(group), std::move(name), ok,
                           std::move(detail)});
    }
};

// Universality scan for a wide cone: projections projs[i]: apex -> E must be
// jointly universal for n-leg cones (legs u_i: X -> E with all u_i;p equal).
// Returns the mediator table, or nullopt with a description of the first
// failing cone.
inline std::optional<std::map<std::vector<MorId>, MorId>>
scan_wide_pullback(const FinCategory& c, ObjId apex,
                   const std::vector<MorId>& projs, MorId p,
                   std::string* fail_detail = nullptr) {
    const unsigned n = static_cast<unsigned>(projs.size());
    std::map<std::vector<MorId>, MorId> table;
    ObjId e = c.dom(p);
    for (ObjId x = 0; x < c.n_obj(); ++x) {
        const auto& hs = c.homset(x, e);
        if (hs.empty()) continue;
        std::vector<unsigned> idx(n, 0);
        while (true) {
            std::vector<MorId> legs(n);
            for (unsigned i = 0; i < n; ++i) legs[i] = hs[idx[i]];
            bool cone = true;
            for (unsigned i = 1; i < n && cone; ++i)
                cone = c.comp[legs[i]][p] == c.comp[legs[0]][p];
            if (cone) {
                MorId found = kNone;
                unsigned count = 0;
                for (MorId m : c.homset(x, apex)) {
                    bool hits = true;
                    for (unsigned i = 0; i < n && hits; ++i)
                        hits = c.comp[m][projs[i]] == legs[i];
                    if (hits) {
                        ++count;
                        if (found == kNone) found = m;
                    }
                }
                if (count != 1) {
                    if (fail_detail) {
                        std::string legstr;
                        for (unsigned i = 0; i < n; ++i)
                            legstr += (i ? "," : "") + c.mname(legs[i]);
                        *fail_detail = cat("cone (", legstr, ") from '",
                                           c.oname(x), "' has ", count,
                                           " mediators");
                    }
                    return std::nullopt;
                }
                table[legs] = found;
            }
            unsigned i = 0;
            for (; i < n; ++i) {
                if (++idx[i] < hs.size()) break;
                idx[i] = 0;
            }
            if (i == n) break;
        }
    }
    return table;
}

// Identity-shaped witnesses for the trivial structure (apex M, identity
// projections). trivial_tangent installs these directly instead of the
// canonical least-named scan so identity components always satisfy the
// axioms (the canonical scan may pick non-identity projections, e.g. (g,g)
// on the one-object group of order 2).
inline TnWitness trivial_witness(const FinCategory& c, ObjId m, unsigned n) {
    TnWitness w;
    w.apex = m;
    w.projections.assign(n, c.id(m));
    for (ObjId x = 0; x < c.n_obj(); ++x)
        for (MorId u : c.homset(x, m))
            w.mediators[std::vector<MorId>(n, u)] = u;
    return w;
}

inline TangentStructure trivial_tangent(const FinCategory& c,
                                        unsigned bound = 2) {
    check_input(bound >= 2, "witness bound must be >= 2");
    TangentStructure ts;
    ts.T = identity_functor(c);
    ts.bound = bound;
    ts.p.resize(c.n_obj());
    ts.z.resize(c.n_obj());
    ts.s.resize(c.n_obj());
    ts.l.resize(c.n_obj());
    ts.c.resize(c.n_obj());
    ts.neg = std::vector<MorId>(c.n_obj());
    for (ObjId m = 0; m < c.n_obj(); ++m) {
        MorId i = c.id(m);
        ts.p[m] = ts.z[m] = ts.s[m] = ts.l[m] = ts.c[m] = i;
        (*ts.neg)[m] = i;
        for (unsigned n = 2; n <= bound; ++n)
            ts.witnesses[{m, n}] = trivial_witness(c, m, n);
    }
    return ts;
}

namespace detail {

// Per-(category, structure) scratch shared by the axiom checks: orbit data
// and, per object, the k=1-image mediator table of the binary witness
// (pairings into T(T_2 M) need it).
struct TangentContext {
    const FinCategory& C;
    const TangentStructure& ts;
    FunctorOrbit orbit;
    // nullopt when the image square is not a pullback (dependent equations
    // report as blocked).
    std::vector<std::optional<std::map<std::vector<MorId>, MorId>>> timg2;

    TangentContext(const FinCategory& cc, const TangentStructure& t)
        : C(cc), ts(t), orbit(functor_orbit(cc, t.T)) {}

    MorId comp(MorId f, MorId g) const {
        if (f == kNone || g == kNone) return kNone;
        if (!C.composable(f, g)) return kNone;
        return C.comp[f][g];
    }
    const TnWitness& w2(ObjId m) const { return ts.witnesses.at({m, 2}); }
    MorId pi1(ObjId m) const { return w2(m).projections[0]; }
    MorId pi2(ObjId m) const { return w2(m).projections[1]; }
    // <a, b>: mediator with m;pi1 = a, m;pi2 = b; kNone when not a cone.
    MorId pair2(ObjId m, MorId a, MorId b) const {
        if (a == kNone || b == kNone) return kNone;
        auto it = w2(m).mediators.find(std::vector<MorId>{a, b});
        return it == w2(m).mediators.end() ? kNone : it->second;
    }
    // <a, b> into T(T_2 M) via the k=1 image table.
    MorId pair2_timg(ObjId m, MorId a, MorId b) const {
        if (a == kNone || b == kNone || !timg2[m]) return kNone;
        auto it = timg2[m]->find(std::vector<MorId>{a, b});
        return it == timg2[m]->end() ? kNone : it->second;
    }
};

inline void require_component_typing(const FinCategory& c,
                                     const TangentStructure& ts) {
    check_input(ts.T.obj.size() == c.n_obj() && ts.T.mor.size() == c.n_mor(),
                "tangent functor tables have wrong size");
    {
        auto fr = validate_functor(c, c, ts.T);
        check_input(fr.valid(), cat("T is not a functor: ",
                                    fr.valid() ? "" : fr.violations.front()));
    }
    auto want = [&](const std::vector<MorId>& v, const char* nm, ObjId m,
                    ObjId d, ObjId co) {
        check_input(v.size() == c.n_obj(),
                    cat("component table ", nm, " has wrong size"));
        MorId f = v[m];
        check_input(f < c.n_mor() && c.dom(f) == d && c.cod(f) == co,
                    cat("ill-typed component ", nm, "(", c.oname(m), ")"));
    };
    for (ObjId m = 0; m < c.n_obj(); ++m) {
        ObjId tm = ts.T.obj[m];
        ObjId ttm = ts.T.obj[tm];
        want(ts.p, "p", m, tm, m);
        want(ts.z, "z", m, m, tm);
        want(ts.l, "l", m, tm, ttm);
        want(ts.c, "c", m, ttm, ttm);
        if (ts.neg) want(*ts.neg, "n", m, tm, tm);
        for (unsigned n = 2; n <= ts.bound; ++n) {
            auto it = ts.witnesses.find({m, n});
            check_input(it != ts.witnesses.end(),
                        cat("missing T_n witness for (", c.oname(m), ", ", n,
                            ")"));
            const TnWitness& w = it->second;
            check_input(w.projections.size() == n,
                        cat("witness (", c.oname(m), ", ", n,
                            ") has wrong arity"));
            for (MorId pr : w.projections)
                check_input(pr < c.n_mor() && c.dom(pr) == w.apex &&
                                c.cod(pr) == tm,
                            cat("witness (", c.oname(m), ", ", n,
                                ") has ill-typed projection"));
        }
        const TnWitness& w = ts.witnesses.at({m, 2});
        want(ts.s, "s", m, w.apex, tm);
    }
}

} // namespace detail

// Full axiom check. Data problems (ill-typed components, missing witnesses,
// T not a functor) are input errors; every axiom is a named report entry.
// Groups: (0) naturality of the structural transformations, (i) additive
// bundle, (ii) witness squares are T-pullbacks, (iii) bundle morphisms for
// (l, z) and (c, id), (iv) involution and lift fix, (v) lift coherence,
// (vi) universality of the vertical lift, (vii) remaining flip coherences.
inline AxiomReport check_tangent_axioms(const FinCategory& C,
                                        const TangentStructure& ts) {
    detail::require_component_typing(C, ts);
    detail::TangentContext cx(C, ts);
    AxiomReport rep;
    const Functor& T = ts.T;
    auto mc = [&](MorId f, MorId g) { return cx.comp(f, g); };
    auto eq = [&](const char* grp, std::string name, MorId lhs, MorId rhs) {
        bool ok = lhs != kNone && lhs == rhs;
        std::string det;
        if (!ok) {
            if (lhs == kNone || rhs == kNone)
                det = "undefined composite or missing pairing";
            else
                det = cat("lhs = ", C.mname(lhs), ", rhs = ", C.mname(rhs));
        }
        rep.add(grp, std::move(name), ok, det);
    };

    // ---- group (0): naturality --------------------------------------
    for (MorId f = 0; f < C.n_mor(); ++f) {
        ObjId x = C.dom(f), y = C.cod(f);
        eq("(0)", cat("nat_p(", C.mname(f), ")"), mc(T.mor[f], ts.p[y]),
           mc(ts.p[x], f));
        eq("(0)", cat("nat_z(", C.mname(f), ")"), mc(f, ts.z[y]),
           mc(ts.z[x], T.mor[f]));
        eq("(0)", cat("nat_l(", C.mname(f), ")"),
           mc(ts.l[x], T.mor[T.mor[f]]), mc(T.mor[f], ts.l[y]));
        eq("(0)", cat("nat_c(", C.mname(f), ")"),
           mc(ts.c[x], T.mor[T.mor[f]]), mc(T.mor[T.mor[f]], ts.c[y]));
        // T_2 f := <pi1;Tf, pi2;Tf>, then T_2 f; s = s; Tf.
        MorId t2f = cx.pair2(y, mc(cx.pi1(x), T.mor[f]),
                             mc(cx.pi2(x), T.mor[f]));
        eq("(0)", cat("nat_s(", C.mname(f), ")"), mc(t2f, ts.s[y]),
           mc(ts.s[x], T.mor[f]));
    }

    // ---- group (ii) first: witness universality under iterates; the k=1
    // tables feed pairings in groups (iii) and (vi). -------------------
    cx.timg2.assign(C.n_obj(), std::nullopt);
    for (ObjId m = 0; m < C.n_obj(); ++m) {
        for (unsigned n = 2; n <= ts.bound; ++n) {
            const TnWitness& w = ts.witnesses.at({m, n});
            bool all_ok = true;
            std::string det;
            Functor itf = identity_functor(C);
            for (unsigned k = 0; k < cx.orbit.bound(); ++k) {
                std::vector<MorId> projs(w.projections.size());
                for (std::size_t i = 0; i < projs.size(); ++i)
                    projs[i] = itf.mor[w.projections[i]];
                std::string fd;
                auto tab = scan_wide_pullback(C, itf.obj[w.apex], projs,
                                              itf.mor[ts.p[m]], &fd);
                if (!tab) {
                    all_ok = false;
                    det = cat("iterate k=", k, ": ", fd);
                    break;
                }
                if (n == 2 && k == 1) cx.timg2[m] = std::move(tab);
                if (n == 2 && k == 0 && cx.orbit.bound() == 1)
                    cx.timg2[m] = std::move(tab); // T acts as identity
                itf = compose_endofunctors(itf, T);
            }
            rep.add("(ii)",
                    cat("witness_T_pullback(", C.oname(m), ",", n, ")"),
                    all_ok, det);
        }
    }

    for (ObjId m = 0; m < C.n_obj(); ++m) {
        const std::string M = C.oname(m);
        ObjId tm = T.obj[m];
        MorId p = ts.p[m], z = ts.z[m], s = ts.s[m], l = ts.l[m], c = ts.c[m];
        MorId p1 = cx.pi1(m), p2 = cx.pi2(m);
        MorId id_tm = C.id(tm);

        // ---- group (i): additive bundle ------------------------------
        eq("(i)", cat("z_p_id(", M, ")"), mc(z, p), C.id(m));
        eq("(i)", cat("s_p_pi1(", M, ")"), mc(s, p), mc(p1, p));
        eq("(i)", cat("s_p_pi2(", M, ")"), mc(s, p), mc(p2, p));
        eq("(i)", cat("s_comm(", M, ")"), mc(cx.pair2(m, p2, p1), s), s);
        MorId pz = mc(p, z);
        eq("(i)", cat("s_unit_r(", M, ")"), mc(cx.pair2(m, id_tm, pz), s),
           id_tm);
        eq("(i)", cat("s_unit_l(", M, ")"), mc(cx.pair2(m, pz, id_tm), s),
           id_tm);
        {
            // Associativity on generalized elements: with the default bound
            // there is no T_3 witness, and triples (a,b,c) with equal ;p are
            // exactly the generalized elements of T_3 whenever it exists, so
            // this check is equivalent to the usual diagram.
            bool ok = true;
            std::string det;
            for (ObjId x = 0; x < C.n_obj() && ok; ++x) {
                const auto& hs = C.homset(x, tm);
                for (MorId a : hs)
                    for (MorId b : hs) {
                        if (mc(a, p) != mc(b, p)) continue;
                        for (MorId cc : hs) {
                            if (mc(a, p) != mc(cc, p)) continue;
                            MorId lhs =
                                mc(cx.pair2(m, mc(cx.pair2(m, a, b), s), cc),
                                   s);
                            MorId rhs =
                                mc(cx.pair2(m, a, mc(cx.pair2(m, b, cc), s)),
                                   s);
                            if (lhs == kNone || lhs != rhs) {
                                ok = false;
                                det = cat("triple (", C.mname(a), ",",
                                          C.mname(b), ",", C.mname(cc),
                                          ") from '", C.oname(x), "'");
                            }
                            if (!ok) break;
                        }
                        if (!ok) break;
                    }
            }
            rep.add("(i)", cat("s_assoc(", M, ")"), ok, det);
        }

        // ---- group (iii): (l, z) and (c, id) bundle morphisms --------
        eq("(iii)", cat("l_over_z_base(", M, ")"), mc(l, T.mor[p]), mc(p, z));
        eq("(iii)", cat("l_zero(", M, ")"), mc(z, l), mc(z, T.mor[z]));
        eq("(iii)", cat("l_additive(", M, ")"), mc(s, l),
           mc(cx.pair2_timg(m, mc(p1, l), mc(p2, l)), T.mor[s]));
        eq("(iii)", cat("c_over_p(", M, ")"), mc(c, ts.p[tm]), T.mor[p]);
        eq("(iii)", cat("c_zero(", M, ")"), mc(T.mor[z], c), ts.z[tm]);
        eq("(iii)", cat("c_additive(", M, ")"), mc(T.mor[s], c),
           mc(cx.pair2(tm, mc(T.mor[p1], c), mc(T.mor[p2], c)), ts.s[tm]));

        // ---- group (iv) ----------------------------------------------
        eq("(iv)", cat("c_involution(", M, ")"), mc(c, c),
           C.id(T.obj[tm]));
        eq("(iv)", cat("l_c_fix(", M, ")"), mc(l, c), l);

        // ---- group (v) -----------------------------------------------
        eq("(v)", cat("l_coassoc(", M, ")"), mc(l, T.mor[l]),
           mc(l, ts.l[tm]));

        // ---- group (vi): universality of the vertical lift -----------
        {
            MorId iota = mc(cx.pair2_timg(m, mc(p1, l), mc(p2, ts.z[tm])),
                            T.mor[s]);
            bool ok = false;
            std::string det;
            if (iota == kNone) {
                det = "blocked: pairing into T(T_2) unavailable";
            } else {
                Square sq{iota, z, mc(p1, p), T.mor[p]};
                if (!square_commutes(C, sq)) {
                    det = "vertical-lift square does not commute";
                } else {
                    auto v = is_T_pullback(C, T, sq);
                    ok = v.ok;
                    if (!ok) det = cat("fails at iterate k=", v.failing_k);
                }
            }
            rep.add("(vi)", cat("vertical_lift_universal(", M, ")"), ok, det);
        }

        // ---- group (vii): remaining flip coherences -------------------
        eq("(vii)", cat("yang_baxter(", M, ")"),
           mc(mc(ts.c[tm], T.mor[c]), ts.c[tm]),
           mc(mc(T.mor[c], ts.c[tm]), T.mor[c]));
        eq("(vii)", cat("lift_flip_interchange(", M, ")"),
           mc(mc(c, T.mor[l]), ts.c[tm]), mc(ts.l[tm], T.mor[c]));
    }
    return rep;
}

// Negation checks: naturality, compatibility with p, and the inverse law
// <n, id>;s = p;z. Requires ts.neg (input error otherwise).
inline AxiomReport check_negatives(const FinCategory& C,
                                   const TangentStructure& ts) {
    check_input(ts.neg.has_value(), "structure carries no negation");
    detail::require_component_typing(C, ts);
    detail::TangentContext cx(C, ts);
    AxiomReport rep;
    const auto& n = *ts.neg;
    auto mc = [&](MorId f, MorId g) { return cx.comp(f, g); };
    auto eq = [&](std::string name, MorId lhs, MorId rhs) {
        bool ok = lhs != kNone && lhs == rhs;
        rep.add("(neg)", std::move(name), ok,
                ok ? "" : "equation fails or composite undefined");
    };
    for (MorId f = 0; f < C.n_mor(); ++f)
        eq(cat("nat_n(", C.mname(f), ")"),
           mc(n[C.dom(f)], ts.T.mor[f]), mc(ts.T.mor[f], n[C.cod(f)]));
    for (ObjId m = 0; m < C.n_obj(); ++m) {
        eq(cat("n_over_p(", C.oname(m), ")"), mc(n[m], ts.p[m]), ts.p[m]);
        MorId pair = cx.pair2(m, n[m], C.id(ts.T.obj[m]));
        eq(cat("n_inverse(", C.oname(m), ")"), mc(pair, ts.s[m]),
           mc(ts.p[m], ts.z[m]));
    }
    return rep;
}

// Differential bundle data over a tangent category: q with zero, addition
// over the caller-supplied certified self-pullback e2, and lift.
struct DifferentialBundleData {
    MorId q = kNone;   // E -> M
    MorId z_q = kNone; // M -> E
    MorId s_q = kNone; // apex(e2) -> E
    MorId l_q = kNone; // E -> TE
    PullbackCertificate e2; // certified pullback of q along q
};

// The canonical bundle (p_M, z_M, s_M, l_M) with e2 taken from the binary
// witness of the structure.
inline DifferentialBundleData tangent_bundle_data(const FinCategory& C,
                                                  const TangentStructure& ts,
                                                  ObjId m) {
    DifferentialBundleData d;
    d.q = ts.p[m];
    d.z_q = ts.z[m];
    d.s_q = ts.s[m];
    d.l_q = ts.l[m];
    const TnWitness& w = ts.witnesses.at({m, 2});
    Square sq{w.projections[1], d.q, w.projections[0], d.q};
    auto v = is_pullback_square(C, sq);
    check_construction(v.ok, "binary witness square failed to re-certify");
    d.e2 = std::move(*v.cert);
    return d;
}

inline AxiomReport check_differential_bundle(const FinCategory& C,
                                             const TangentStructure& ts,
                                             const DifferentialBundleData& db) {
    detail::require_component_typing(C, ts);
    detail::TangentContext cx(C, ts);
    AxiomReport rep;
    const Functor& T = ts.T;
    auto mc = [&](MorId f, MorId g) { return cx.comp(f, g); };

    MorId q = db.q;
    check_input(q < C.n_mor(), "differential bundle: bad q");
    ObjId e = C.dom(q), m = C.cod(q);
    check_input(db.z_q < C.n_mor() && C.dom(db.z_q) == m && C.cod(db.z_q) == e,
                "ill-typed component z_q");
    check_input(db.e2.square.bottom == q && db.e2.square.rightv == q,
                "e2 is not a certificate for the cospan (q, q)");
    {
        auto v = is_pullback_square(C, db.e2.square);
        check_input(v.ok, "supplied e2 does not certify as a pullback");
    }
    MorId p1 = db.e2.square.leftv, p2 = db.e2.square.top;
    ObjId e2o = apex_of(C, db.e2.square);
    check_input(db.s_q < C.n_mor() && C.dom(db.s_q) == e2o && C.cod(db.s_q) == e,
                "ill-typed component s_q");
    check_input(db.l_q < C.n_mor() && C.dom(db.l_q) == e &&
                    C.cod(db.l_q) == T.obj[e],
                "ill-typed component l_q");
    MorId zq = db.z_q, sq = db.s_q, lq = db.l_q;
    auto pair_e2 = [&](MorId a, MorId b) -> MorId {
        if (a == kNone || b == kNone) return kNone;
        auto it = db.e2.mediators.find({a, b});
        return it == db.e2.mediators.end() ? kNone : it->second;
    };
    auto eq = [&](const char* grp, std::string name, MorId lhs, MorId rhs) {
        bool ok = lhs != kNone && lhs == rhs;
        rep.add(grp, std::move(name), ok,
                ok ? "" : "equation fails or composite undefined");
    };

    // Additive bundle for (q, z_q, s_q).
    eq("(add)", "zq_section", mc(zq, q), C.id(m));
    eq("(add)", "sq_over_q_pi1", mc(sq, q), mc(p1, q));
    eq("(add)", "sq_over_q_pi2", mc(sq, q), mc(p2, q));
    eq("(add)", "sq_comm", mc(pair_e2(p2, p1), sq), sq);
    MorId qz = mc(q, zq);
    eq("(add)", "sq_unit_r", mc(pair_e2(C.id(e), qz), sq), C.id(e));
    eq("(add)", "sq_unit_l", mc(pair_e2(qz, C.id(e)), sq), C.id(e));
    {
        bool ok = true;
        std::string det;
        for (ObjId x = 0; x < C.n_obj() && ok; ++x) {
            const auto& hs = C.homset(x, e);
            for (MorId a : hs)
                for (MorId b : hs) {
                    if (mc(a, q) != mc(b, q)) continue;
                    for (MorId cc : hs) {
                        if (mc(a, q) != mc(cc, q)) continue;
                        MorId lhs = mc(pair_e2(mc(pair_e2(a, b), sq), cc), sq);
                        MorId rhs = mc(pair_e2(a, mc(pair_e2(b, cc), sq)), sq);
                        if (lhs == kNone || lhs != rhs) {
                            ok = false;
                            det = cat("triple (", C.mname(a), ",", C.mname(b),
                                      ",", C.mname(cc), ")");
                            break;
                        }
                    }
                    if (!ok) break;
                }
        }
        rep.add("(add)", "sq_assoc", ok, det);
    }

    // e2 must be a T-pullback so pairings into T(E_2) are available.
    std::optional<std::map<std::vector<MorId>, MorId>> timg;
    {
        auto v = is_T_pullback(C, T, db.e2.square);
        rep.add("(add)", "e2_T_pullback", v.ok,
                v.ok ? "" : cat("fails at iterate k=", v.failing_k));
        if (v.ok) {
            std::string fd;
            Functor tf = iterate_functor(C, T, cx.orbit.bound() > 1 ? 1 : 0);
            timg = scan_wide_pullback(C, tf.obj[e2o],
                                      {tf.mor[p1], tf.mor[p2]}, tf.mor[q], &fd);
        }
    }
    auto pair_te2 = [&](MorId a, MorId b) -> MorId {
        if (a == kNone || b == kNone || !timg) return kNone;
        auto it = timg->find(std::vector<MorId>{a, b});
        return it == timg->end() ? kNone : it->second;
    };

    // Condition 1: (l_q, z) is a bundle morphism (q, z_q, s_q) -> (Tq, ...).
    eq("(1)", "lq_over_z_base", mc(lq, T.mor[q]), mc(q, ts.z[m]));
    eq("(1)", "lq_zero_z", mc(zq, lq), mc(ts.z[m], T.mor[zq]));
    eq("(1)", "lq_additive_z", mc(sq, lq),
       mc(pair_te2(mc(p1, lq), mc(p2, lq)), T.mor[sq]));

    // Condition 2: (l_q, z_q) is a bundle morphism (q, ...) -> (p_E, ...).
    eq("(2)", "lq_over_zq_base", mc(lq, ts.p[e]), mc(q, zq));
    eq("(2)", "lq_zero_zq", mc(zq, lq), mc(zq, ts.z[e]));
    eq("(2)", "lq_additive_zq", mc(sq, lq),
       mc(cx.pair2(e, mc(p1, lq), mc(p2, lq)), ts.s[e]));

    // Condition 3: universality of the bundle lift. The bottom arrow is the
    // structure zero z_M: M -> TM (forced by typing of the square corners).
    {
        MorId iota = mc(pair_te2(mc(p1, lq), mc(p2, ts.z[e])), T.mor[sq]);
        bool ok = false;
        std::string det;
        if (iota == kNone) {
            det = "blocked: pairing into T(E_2) unavailable";
        } else {
            Square sqr{iota, ts.z[m], mc(p1, q), T.mor[q]};
            if (!square_commutes(C, sqr)) {
                det = "lift square does not commute";
            } else {
                auto v = is_T_pullback(C, T, sqr);
                ok = v.ok;
                if (!ok) det = cat("fails at iterate k=", v.failing_k);
            }
        }
        rep.add("(3)", "bundle_lift_universal", ok, det);
    }

    // Condition 4: lift coherence.
    eq("(4)", "lq_coassoc", mc(lq, T.mor[lq]), mc(lq, ts.l[e]));
    return rep;
}

// Vertical bundle of q: the pullback of Tq along the structure zero of the
// base, when it exists.
struct VerticalBundle {
    ObjId total = kNone;
    PullbackCertificate cert;
};

inline std::optional<VerticalBundle>
compute_vertical_bundle(const FinCategory& C, const TangentStructure& ts,
                        MorId q) {
    check_input(q < C.n_mor(), "compute_vertical_bundle: bad morphism");
    auto cert = compute_pullback(
        C, Cospan{ts.z[C.cod(q)], ts.T.mor[q]});
    if (!cert) return std::nullopt;
    VerticalBundle v;
    v.total = apex_of(C, cert->square);
    v.cert = std::move(*cert);
    return v;
}

} // namespace tdm
