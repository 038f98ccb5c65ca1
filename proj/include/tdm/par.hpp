#pragma once
// Partial-map category over an etale tangent display system of monics, and
// the poset of open subobjects. Morphisms of Par are iso-classes of spans
// whose left leg lies in the system; representatives are canonical (least
// apex name, then least leg names), composition is by certified pullback of
// the monic leg, and the whole output is re-verified: the four restriction
// laws, splitting of restriction idempotents, totality of the lifted
// structural transformations, and the tangent axioms.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/display.hpp"
#include "tdm/fincat.hpp"
#include "tdm/limits.hpp"
#include "tdm/tangent.hpp"

namespace tdm {

namespace detail {

// Least representative of the subobject class of m under precomposition
// with isomorphisms, ordered by (domain name, morphism name).
inline MorId canon_subobject(const FinCategory& c,
                             const std::vector<MorId>& isos, MorId m) {
    MorId best = m;
    auto key = [&](MorId x) {
        return std::make_pair(c.oname(c.dom(x)), c.mname(x));
    };
    for (MorId psi : isos) {
        if (c.cod(psi) != c.dom(m)) continue;
        MorId cand = c.comp[psi][m];
        if (key(cand) < key(best)) best = cand;
    }
    return best;
}

inline std::pair<MorId, MorId> canon_span(const FinCategory& c,
                                          const std::vector<MorId>& isos,
                                          MorId m, MorId f) {
    std::pair<MorId, MorId> best{m, f};
    auto key = [&](const std::pair<MorId, MorId>& s) {
        return std::make_tuple(c.oname(c.dom(s.first)), c.mname(s.first),
                               c.mname(s.second));
    };
    for (MorId psi : isos) {
        if (c.cod(psi) != c.dom(m)) continue;
        std::pair<MorId, MorId> cand{c.comp[psi][m], c.comp[psi][f]};
        if (key(cand) < key(best)) best = cand;
    }
    return best;
}

} // namespace detail

// ---------------------------------------------------------------------
// Open subobjects: tangent monic + tangent display + etale.

inline bool is_open_mono(const FinCategory& c, const TangentStructure& ts,
                         MorId m) {
    DisplayVerdict v = classify_morphism(c, ts, m);
    return v.is_t_monic && v.is_t_display && v.is_etale;
}

struct OpenClassInfo {
    MorId rep = kNone;
    std::vector<MorId> elements; // the whole iso-class, ascending
};

struct OpenPoset {
    ObjId obj = kNone;
    std::vector<OpenClassInfo> classes;    // ascending by representative
    std::vector<std::vector<bool>> leq;    // factorization order
    std::vector<std::vector<int>> meet;    // class index, -1 when absent
    int top = -1;                          // class of the identity
    bool meets_ok = true;
};

struct OpenOutput {
    std::vector<MorId> members; // every open mono, ascending
    std::vector<OpenPoset> posets;
    SystemVerdict system; // the member set checked as a display system
    bool is_system = false;
    bool meets_ok = true;
    std::vector<std::string> notes;
};

inline OpenOutput open_subobjects(const FinCategory& c,
                                  const TangentStructure& ts) {
    {
        AxiomReport pre = check_tangent_axioms(c, ts);
        if (!pre.ok())
            throw input_error(
                cat("open_subobjects: tangent structure fails ",
                    pre.first_failure()->name));
    }
    OpenOutput out;
    for (MorId m = 0; m < c.n_mor(); ++m)
        if (is_open_mono(c, ts, m)) out.members.push_back(m);
    std::vector<MorId> isos = enumerate_isos(c);

    for (ObjId x = 0; x < c.n_obj(); ++x) {
        OpenPoset ps;
        ps.obj = x;
        std::map<MorId, std::vector<MorId>> by_rep;
        for (MorId m : out.members)
            if (c.cod(m) == x)
                by_rep[detail::canon_subobject(c, isos, m)].push_back(m);
        for (auto& [rep, elems] : by_rep)
            ps.classes.push_back({rep, elems});
        size_t n = ps.classes.size();
        ps.leq.assign(n, std::vector<bool>(n, false));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                MorId mi = ps.classes[i].rep, mj = ps.classes[j].rep;
                for (MorId h : c.homset(c.dom(mi), c.dom(mj)))
                    if (c.comp[h][mj] == mi) {
                        ps.leq[i][j] = true;
                        break;
                    }
            }
        MorId idrep = detail::canon_subobject(c, isos, c.id(x));
        for (size_t i = 0; i < n; ++i)
            if (ps.classes[i].rep == idrep) ps.top = int(i);
        ps.meet.assign(n, std::vector<int>(n, -1));
        for (size_t i = 0; i < n; ++i)
            for (size_t j = 0; j < n; ++j) {
                MorId mi = ps.classes[i].rep, mj = ps.classes[j].rep;
                auto cert = compute_pullback(c, Cospan{mi, mj});
                if (!cert) {
                    ps.meets_ok = false;
                    out.notes.push_back(cat("no meet of '", c.mname(mi),
                                            "' and '", c.mname(mj), "'"));
                    continue;
                }
                MorId mm = c.comp[cert->square.leftv][mi];
                MorId mrep = detail::canon_subobject(c, isos, mm);
                int k = -1;
                for (size_t t = 0; t < n; ++t)
                    if (ps.classes[t].rep == mrep) k = int(t);
                if (k < 0) {
                    ps.meets_ok = false;
                    out.notes.push_back(
                        cat("pullback of opens '", c.mname(mi), "', '",
                            c.mname(mj), "' is not open"));
                    continue;
                }
                bool glb = ps.leq[k][i] && ps.leq[k][j];
                for (size_t t = 0; t < n && glb; ++t)
                    if (ps.leq[t][i] && ps.leq[t][j]) glb = ps.leq[t][k];
                if (!glb) {
                    ps.meets_ok = false;
                    out.notes.push_back(cat("meet of '", c.mname(mi),
                                            "' and '", c.mname(mj),
                                            "' is not a greatest lower bound"));
                    continue;
                }
                ps.meet[i][j] = k;
            }
        out.meets_ok = out.meets_ok && ps.meets_ok;
        out.posets.push_back(std::move(ps));
    }

    out.system = check_display_system(c, ts, out.members, /*tangent=*/true);
    out.is_system = out.system.ok();
    if (!out.is_system)
        out.notes.push_back("open monos do not form a display system");
    return out;
}

// ---------------------------------------------------------------------
// Par construction.

struct ParOutput {
    FinCategory cat;
    TangentStructure ts;
    Functor embedding; // total spans
    std::vector<MorId> monic_system;
    std::vector<std::pair<MorId, MorId>> span_src; // par mor -> (monic, map)
    std::vector<MorId> restriction;                // par mor -> its bar
    bool r1 = false, r2 = false, r3 = false, r4 = false;
    struct SplitCase {
        MorId e = kNone, r = kNone, s = kNone;
        bool ok = false;
    };
    std::vector<SplitCase> splits;
    bool restriction_idempotents_split = false;
    bool components_total = false;
    bool totals_ok = false; // embedded maps are total; total;total is total
    bool embedding_faithful = false;
    AxiomReport axioms;
    std::vector<std::string> notes;
    bool ok() const {
        return r1 && r2 && r3 && r4 && restriction_idempotents_split &&
               components_total && totals_ok && embedding_faithful &&
               axioms.ok();
    }
};

inline ParOutput par_category(const FinCategory& C, const TangentStructure& ts,
                              std::vector<MorId> members) {
    {
        AxiomReport pre = check_tangent_axioms(C, ts);
        if (!pre.ok())
            throw input_error(cat("par: tangent structure fails ",
                                  pre.first_failure()->name));
    }
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    check_input(!members.empty(), "par: empty system");
    for (MorId m : members) {
        check_input(m < C.n_mor(), "par: bad member id");
        check_input(is_mono(C, m),
                    cat("par: member '", C.mname(m), "' is not monic"));
        DisplayVerdict v = classify_morphism(C, ts, m);
        check_input(v.is_etale,
                    cat("par: member '", C.mname(m), "' is not etale"));
    }
    SystemVerdict sys = check_display_system(C, ts, members, /*tangent=*/true);
    check_input(sys.ok(),
                cat("par: system clause fails: ",
                    sys.counterexamples.empty() ? "unknown"
                                                : sys.counterexamples[0]));
    auto is_member = [&](MorId f) {
        return std::binary_search(members.begin(), members.end(), f);
    };
    std::vector<MorId> isos = enumerate_isos(C);
    for (MorId i : isos)
        check_input(is_member(i), cat("par: isomorphism '", C.mname(i),
                                      "' is not in the system"));

    auto canon = [&](MorId m, MorId f) {
        return detail::canon_span(C, isos, m, f);
    };

    ParOutput out;
    out.monic_system = members;

    auto pname = [&](ObjId x) { return cat("par:", C.oname(x)); };
    auto sname = [&](const std::pair<MorId, MorId>& s) {
        return cat("par:<", C.mname(s.first), "|", C.mname(s.second), ">");
    };

    std::set<std::pair<MorId, MorId>> spans;
    for (MorId m : members)
        for (MorId f = 0; f < C.n_mor(); ++f)
            if (C.dom(f) == C.dom(m)) spans.insert(canon(m, f));

    CatBuilder b;
    for (ObjId x = 0; x < C.n_obj(); ++x) b.add_object(pname(x));
    for (const auto& s : spans)
        b.add_morphism(sname(s), pname(C.cod(s.first)), pname(C.cod(s.second)));
    for (ObjId x = 0; x < C.n_obj(); ++x)
        b.set_identity(pname(x), sname(canon(C.id(x), C.id(x))));
    for (const auto& a : spans)
        for (const auto& bb : spans) {
            if (C.cod(a.second) != C.cod(bb.first)) continue;
            auto cert = compute_pullback(C, Cospan{a.second, bb.first});
            check_construction(cert.has_value(),
                               cat("par: composition pullback of '",
                                   C.mname(bb.first), "' along '",
                                   C.mname(a.second), "' missing"));
            MorId lm = C.comp[cert->square.leftv][a.first];
            MorId rf = C.comp[cert->square.top][bb.second];
            check_construction(lm != kNone && rf != kNone && is_member(lm),
                               "par: composite span leaves the system");
            b.set_comp(sname(a), sname(bb), sname(canon(lm, rf)));
        }
    out.cat = b.build();
    {
        auto vr = validate_category(out.cat);
        check_construction(vr.valid(), "par: constructed tables invalid");
    }
    const FinCategory& P = out.cat;
    check_construction(P.n_obj() == C.n_obj(), "par: object count changed");
    for (ObjId x = 0; x < C.n_obj(); ++x)
        check_construction(P.oname(x) == pname(x), "par: object order changed");

    std::map<std::string, std::pair<MorId, MorId>> span_by_name;
    for (const auto& s : spans) span_by_name[sname(s)] = s;
    out.span_src.resize(P.n_mor());
    std::map<std::pair<MorId, MorId>, MorId> par_of;
    for (MorId pm = 0; pm < P.n_mor(); ++pm) {
        out.span_src[pm] = span_by_name.at(P.mname(pm));
        par_of[out.span_src[pm]] = pm;
    }
    auto pmor = [&](MorId m, MorId f) -> MorId {
        auto it = par_of.find(canon(m, f));
        check_construction(it != par_of.end(), "par: span lookup failed");
        return it->second;
    };

    out.restriction.resize(P.n_mor());
    for (MorId pm = 0; pm < P.n_mor(); ++pm) {
        MorId m = out.span_src[pm].first;
        out.restriction[pm] = pmor(m, m);
    }
    const auto& rbar = out.restriction;

    // Restriction laws.
    out.r1 = out.r2 = out.r3 = out.r4 = true;
    for (MorId f = 0; f < P.n_mor(); ++f)
        if (P.comp[rbar[f]][f] != f) {
            out.r1 = false;
            out.notes.push_back(cat("R1 fails at '", P.mname(f), "'"));
            break;
        }
    for (MorId f = 0; f < P.n_mor() && out.r2 && out.r3; ++f)
        for (MorId g = 0; g < P.n_mor(); ++g) {
            if (P.dom(g) != P.dom(f)) continue;
            if (P.comp[rbar[f]][rbar[g]] != P.comp[rbar[g]][rbar[f]]) {
                out.r2 = false;
                out.notes.push_back(cat("R2 fails at ('", P.mname(f), "', '",
                                        P.mname(g), "')"));
                break;
            }
            if (rbar[P.comp[rbar[f]][g]] != P.comp[rbar[f]][rbar[g]]) {
                out.r3 = false;
                out.notes.push_back(cat("R3 fails at ('", P.mname(f), "', '",
                                        P.mname(g), "')"));
                break;
            }
        }
    for (MorId f = 0; f < P.n_mor() && out.r4; ++f)
        for (MorId g = 0; g < P.n_mor(); ++g) {
            if (P.dom(g) != P.cod(f)) continue;
            if (P.comp[f][rbar[g]] != P.comp[rbar[P.comp[f][g]]][f]) {
                out.r4 = false;
                out.notes.push_back(cat("R4 fails at ('", P.mname(f), "', '",
                                        P.mname(g), "')"));
                break;
            }
        }

    // Restriction idempotents split through the domain of the monic leg.
    {
        std::set<MorId> ridem(rbar.begin(), rbar.end());
        out.restriction_idempotents_split = true;
        for (MorId e : ridem) {
            MorId u = out.span_src[e].first;
            ObjId s_obj = C.dom(u);
            ParOutput::SplitCase sc;
            sc.e = e;
            sc.r = pmor(u, C.id(s_obj));
            sc.s = pmor(C.id(s_obj), u);
            sc.ok = P.comp[sc.r][sc.s] == e &&
                    P.comp[sc.s][sc.r] == P.id(P.dom(sc.s));
            out.restriction_idempotents_split =
                out.restriction_idempotents_split && sc.ok;
            if (!sc.ok)
                out.notes.push_back(cat("restriction idempotent '",
                                        P.mname(e), "' fails to split"));
            out.splits.push_back(sc);
        }
    }

    // Embedding by total spans.
    out.embedding.obj.resize(C.n_obj());
    out.embedding.mor.resize(C.n_mor());
    for (ObjId x = 0; x < C.n_obj(); ++x) out.embedding.obj[x] = x;
    for (MorId f = 0; f < C.n_mor(); ++f)
        out.embedding.mor[f] = pmor(C.id(C.dom(f)), f);
    {
        auto fr = validate_functor(C, P, out.embedding);
        check_construction(fr.valid(), "par: embedding is not a functor");
        out.embedding_faithful = true;
        for (MorId f = 0; f < C.n_mor() && out.embedding_faithful; ++f)
            for (MorId g = f + 1; g < C.n_mor(); ++g)
                if (out.embedding.mor[f] == out.embedding.mor[g]) {
                    out.embedding_faithful = false;
                    out.notes.push_back("embedding identifies two maps");
                    break;
                }
    }
    out.totals_ok = true;
    for (MorId f = 0; f < C.n_mor() && out.totals_ok; ++f)
        if (rbar[out.embedding.mor[f]] != P.id(P.dom(out.embedding.mor[f]))) {
            out.totals_ok = false;
            out.notes.push_back(cat("embedded map '", C.mname(f),
                                    "' is not total"));
        }

    // Lifted tangent structure: spans cellwise, total structural pieces.
    TangentStructure& pts = out.ts;
    pts.bound = ts.bound;
    pts.T.obj = ts.T.obj;
    pts.T.mor.resize(P.n_mor());
    for (MorId pm = 0; pm < P.n_mor(); ++pm) {
        auto [m, f] = out.span_src[pm];
        check_construction(is_member(ts.T.mor[m]),
                           "par: T image of a monic leaves the system");
        pts.T.mor[pm] = pmor(ts.T.mor[m], ts.T.mor[f]);
    }
    {
        auto fr = validate_functor(P, P, pts.T);
        check_construction(fr.valid(), "par: lifted T is not a functor");
    }
    auto total = [&](MorId f) { return pmor(C.id(C.dom(f)), f); };
    pts.p.resize(P.n_obj());
    pts.z.resize(P.n_obj());
    pts.s.resize(P.n_obj());
    pts.l.resize(P.n_obj());
    pts.c.resize(P.n_obj());
    if (ts.neg) pts.neg = std::vector<MorId>(P.n_obj());
    for (ObjId x = 0; x < P.n_obj(); ++x) {
        pts.p[x] = total(ts.p[x]);
        pts.z[x] = total(ts.z[x]);
        pts.s[x] = total(ts.s[x]);
        pts.l[x] = total(ts.l[x]);
        pts.c[x] = total(ts.c[x]);
        if (ts.neg) (*pts.neg)[x] = total((*ts.neg)[x]);
    }
    for (const auto& [key, w] : ts.witnesses) {
        TnWitness pw;
        pw.apex = w.apex;
        for (MorId pr : w.projections) pw.projections.push_back(total(pr));
        std::string fd;
        auto table = scan_wide_pullback(P, pw.apex, pw.projections,
                                        pts.p[key.first], &fd);
        check_construction(table.has_value(),
                           cat("par: witness (", P.oname(key.first), ", ",
                               key.second,
                               ") fails to certify in Par: ", fd));
        pw.mediators = std::move(*table);
        pts.witnesses[key] = std::move(pw);
    }
    out.axioms = check_tangent_axioms(P, pts);

    out.components_total = true;
    auto leg_iso = [&](MorId pm) {
        return is_iso(C, out.span_src[pm].first);
    };
    for (ObjId x = 0; x < P.n_obj(); ++x) {
        bool t = leg_iso(pts.p[x]) && leg_iso(pts.z[x]) && leg_iso(pts.s[x]) &&
                 leg_iso(pts.l[x]) && leg_iso(pts.c[x]) &&
                 (!pts.neg || leg_iso((*pts.neg)[x]));
        if (!t) {
            out.components_total = false;
            out.notes.push_back(cat("structural component at '", P.oname(x),
                                    "' is not total"));
        }
    }
    return out;
}

} // namespace tdm
