#pragma once
// Classification of morphisms against a tangent structure: display maps,
// tangent display maps, submersions, etale maps, tangent monics; display
// systems with their closure properties; retractivity and idempotent
// splitting; well/fully displayed checks with budget-bounded search.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/fincat.hpp"
#include "tdm/limits.hpp"
#include "tdm/tangent.hpp"

namespace tdm {

struct DisplayVerdict {
    MorId mor = kNone;
    bool is_display = false;
    bool is_t_display = false;
    bool is_submersion = false;
    bool is_etale = false;
    bool is_t_monic = false;
    // reason -> counterexample description, for every negative flag
    std::vector<std::pair<std::string, std::string>> witnesses;
};

namespace detail {

inline Square p_naturality_square(const FinCategory& c,
                                  const TangentStructure& ts, MorId q) {
    // top p_E: TE -> E, leftv Tq: TE -> TM, bottom p_M: TM -> M, rightv q.
    return Square{ts.p[c.dom(q)], ts.p[c.cod(q)], ts.T.mor[q], q};
}

} // namespace detail

// q is a display map when the pullback of q along every f into cod q exists.
inline bool morphism_is_display(const FinCategory& c, MorId q,
                                std::string* counterexample = nullptr) {
    for (MorId f = 0; f < c.n_mor(); ++f) {
        if (c.cod(f) != c.cod(q)) continue;
        if (!compute_pullback(c, Cospan{f, q})) {
            if (counterexample)
                *counterexample =
                    cat("no pullback along '", c.mname(f), "'");
            return false;
        }
    }
    return true;
}

// Tangent display map, by the equivalent bounded form: for every n in one
// orbit of T and every f into cod(T^n q), the pullback of T^n q along f
// exists and is a T-pullback.
inline bool morphism_is_t_display(const FinCategory& c,
                                  const TangentStructure& ts, MorId q,
                                  std::string* counterexample = nullptr) {
    FunctorOrbit orb = functor_orbit(c, ts.T);
    Functor it = identity_functor(c);
    for (unsigned n = 0; n < orb.bound(); ++n) {
        MorId qn = it.mor[q];
        for (MorId f = 0; f < c.n_mor(); ++f) {
            if (c.cod(f) != c.cod(qn)) continue;
            auto cert = compute_pullback(c, Cospan{f, qn});
            if (!cert) {
                if (counterexample)
                    *counterexample = cat("no pullback of T^", n,
                                          " image along '", c.mname(f), "'");
                return false;
            }
            auto tv = is_T_pullback(c, ts.T, cert->square);
            if (!tv.ok) {
                if (counterexample)
                    *counterexample =
                        cat("pullback of T^", n, " image along '", c.mname(f),
                            "' is not a T-pullback (fails at k=",
                            tv.failing_k, ")");
                return false;
            }
        }
        it = compose_endofunctors(it, ts.T);
    }
    return true;
}

inline DisplayVerdict classify_morphism(const FinCategory& c,
                                        const TangentStructure& ts, MorId q) {
    check_input(q < c.n_mor(), "classify_morphism: bad morphism id");
    DisplayVerdict v;
    v.mor = q;
    std::string w;
    v.is_display = morphism_is_display(c, q, &w);
    if (!v.is_display) v.witnesses.emplace_back("display", w);
    v.is_t_display = morphism_is_t_display(c, ts, q, &w);
    if (!v.is_t_display) v.witnesses.emplace_back("t_display", w);

    Square nsq = detail::p_naturality_square(c, ts, q);
    if (!square_commutes(c, nsq)) {
        v.is_submersion = v.is_etale = false;
        v.witnesses.emplace_back("submersion", "p-naturality square does not commute");
        v.witnesses.emplace_back("etale", "p-naturality square does not commute");
    } else {
        auto wv = is_weak_T_pullback(c, ts.T, nsq);
        v.is_submersion = wv.ok;
        if (!wv.ok)
            v.witnesses.emplace_back(
                "submersion", cat("naturality square fails weak universality at k=",
                                  wv.failing_k));
        auto sv = is_T_pullback(c, ts.T, nsq);
        v.is_etale = sv.ok;
        if (!sv.ok)
            v.witnesses.emplace_back(
                "etale", cat("naturality square fails universality at k=",
                             sv.failing_k));
    }

    v.is_t_monic = true;
    {
        FunctorOrbit orb = functor_orbit(c, ts.T);
        Functor it = identity_functor(c);
        for (unsigned n = 0; n < orb.bound() && v.is_t_monic; ++n) {
            if (!is_mono(c, it.mor[q])) {
                v.is_t_monic = false;
                v.witnesses.emplace_back(
                    "t_monic", cat("T^", n, " image is not monic"));
            }
            it = compose_endofunctors(it, ts.T);
        }
    }
    return v;
}

struct SystemVerdict {
    std::vector<MorId> members; // ascending
    bool tangent = true;        // which closure clauses were applied
    bool each_member_display = false;
    bool closed_under_pullback = false;
    bool stable_under_T = false;
    bool closed_under_composition = false;
    bool retractive = false;
    std::vector<std::string> counterexamples;
    bool ok() const {
        return each_member_display && closed_under_pullback &&
               (!tangent || stable_under_T) && closed_under_composition &&
               retractive;
    }
};

struct CheckResult {
    bool ok = false;
    std::string detail;
};

// Retractivity: for every member q: P -> M and every section/retraction
// pair (s: E -> P, r: P -> E), the composite s;q is again a member.
inline CheckResult check_retractive(const FinCategory& c,
                                    const TangentStructure& /*ts*/,
                                    const std::vector<MorId>& members) {
    auto is_member = [&](MorId f) {
        return std::binary_search(members.begin(), members.end(), f);
    };
    for (MorId q : members) {
        ObjId p = c.dom(q);
        for (auto [s, r] : enumerate_retract_pairs(c, p)) {
            MorId sq = c.comp[s][q];
            if (sq == kNone || !is_member(sq))
                return {false, cat("section '", c.mname(s), "' of '",
                                   c.oname(p), "' composed with member '",
                                   c.mname(q), "' leaves the system")};
        }
    }
    return {true, ""};
}

// Display-system check. With tangent=true the clauses are: every member is a
// tangent display map, the family is closed under (the left legs of)
// T-pullback squares over members, and stable under T. With tangent=false:
// plain display maps and closure under all pullback squares.
// stable_under_T is reported true (not applicable) for plain systems.
inline SystemVerdict check_display_system(const FinCategory& c,
                                          const TangentStructure& ts,
                                          std::vector<MorId> members,
                                          bool tangent = true) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    SystemVerdict v;
    v.members = members;
    v.tangent = tangent;
    auto is_member = [&](MorId f) {
        return std::binary_search(members.begin(), members.end(), f);
    };
    auto note = [&](std::string s) { v.counterexamples.push_back(std::move(s)); };

    v.each_member_display = true;
    for (MorId q : members) {
        std::string w;
        bool ok = tangent ? morphism_is_t_display(c, ts, q, &w)
                          : morphism_is_display(c, q, &w);
        if (!ok) {
            v.each_member_display = false;
            note(cat("member '", c.mname(q), "' not ",
                     tangent ? "tangent display" : "display", ": ", w));
            break;
        }
    }

    v.closed_under_pullback = true;
    for (MorId q : members) {
        for (MorId f = 0; f < c.n_mor() && v.closed_under_pullback; ++f) {
            if (c.cod(f) != c.cod(q)) continue;
            for (const auto& cert :
                 all_pullback_certificates(c, Cospan{f, q})) {
                if (tangent &&
                    !is_T_pullback(c, ts.T, cert.square).ok)
                    continue; // only T-pullback squares constrain the family
                if (!is_member(cert.square.leftv)) {
                    v.closed_under_pullback = false;
                    note(cat("pullback of '", c.mname(q), "' along '",
                             c.mname(f), "' has left leg '",
                             c.mname(cert.square.leftv),
                             "' outside the system"));
                    break;
                }
            }
        }
        if (!v.closed_under_pullback) break;
    }

    v.stable_under_T = true;
    if (tangent)
        for (MorId q : members)
            if (!is_member(ts.T.mor[q])) {
                v.stable_under_T = false;
                note(cat("T image of '", c.mname(q),
                         "' outside the system"));
                break;
            }

    v.closed_under_composition = true;
    for (MorId q : members) {
        for (MorId r : members) {
            if (!c.composable(q, r) || c.comp[q][r] == kNone) continue;
            if (!is_member(c.comp[q][r])) {
                v.closed_under_composition = false;
                note(cat("composite '", c.mname(q), ";", c.mname(r),
                         "' outside the system"));
                break;
            }
        }
        if (!v.closed_under_composition) break;
    }

    auto rr = check_retractive(c, ts, members);
    v.retractive = rr.ok;
    if (!rr.ok) note(rr.detail);
    return v;
}

// The set of all tangent display maps, reported with its closure properties.
inline SystemVerdict
maximal_tangent_display_system(const FinCategory& c,
                               const TangentStructure& ts) {
    std::vector<MorId> members;
    for (MorId q = 0; q < c.n_mor(); ++q)
        if (morphism_is_t_display(c, ts, q)) members.push_back(q);
    return check_display_system(c, ts, members, /*tangent=*/true);
}

// For every certified pullback square and every idempotent eps on the right
// object compatible with the square's cone, the induced idempotent on the
// apex must split. (Quantifying over all idempotents rather than only split
// ones is a stricter premise and reproduces the expected verdicts; see the
// one-object monoid {1,e}, where the induced idempotent has no splitting.)
inline CheckResult check_split_idempotents_closed(const FinCategory& c) {
    std::vector<MorId> idem = enumerate_idempotents(c);
    for (MorId f = 0; f < c.n_mor(); ++f)
        for (MorId q = 0; q < c.n_mor(); ++q) {
            if (c.cod(f) != c.cod(q)) continue;
            for (const auto& cert :
                 all_pullback_certificates(c, Cospan{f, q})) {
                ObjId p = apex_of(c, cert.square);
                ObjId e1 = c.dom(q);
                for (MorId eps : idem) {
                    if (c.dom(eps) != e1) continue;
                    MorId top_eps = c.comp[cert.square.top][eps];
                    auto it = cert.mediators.find(
                        {cert.square.leftv, top_eps});
                    if (it == cert.mediators.end()) continue; // not a cone
                    MorId e = it->second; // idempotent on the apex
                    bool split = false;
                    for (ObjId d = 0; d < c.n_obj() && !split; ++d)
                        for (MorId r : c.homset(p, d)) {
                            for (MorId s : c.homset(d, p))
                                if (c.comp[r][s] == e &&
                                    c.comp[s][r] == c.id(d)) {
                                    split = true;
                                    break;
                                }
                            if (split) break;
                        }
                    if (!split)
                        return {false,
                                cat("idempotent '", c.mname(e),
                                    "' induced on the pullback of ('",
                                    c.mname(f), "', '", c.mname(q),
                                    "') by '", c.mname(eps),
                                    "' has no splitting")};
                }
            }
        }
    return {true, ""};
}

enum class Verdict3Value { pass, fail, inconclusive };

struct Verdict3 {
    Verdict3Value value = Verdict3Value::fail;
    std::string detail;
    bool passed() const { return value == Verdict3Value::pass; }
};

// Well displayed: every tangent projection p_M is a tangent display map.
inline Verdict3 check_well_displayed(const FinCategory& c,
                                     const TangentStructure& ts) {
    for (ObjId m = 0; m < c.n_obj(); ++m) {
        std::string w;
        if (!morphism_is_t_display(c, ts, ts.p[m], &w))
            return {Verdict3Value::fail,
                    cat("p(", c.oname(m), ") not tangent display: ", w)};
    }
    return {Verdict3Value::pass, ""};
}

// Fully displayed: every differential bundle has a tangent display
// projection. Candidates are either supplied or enumerated from the tables;
// the budget caps the number of candidate tuples examined.
inline Verdict3
check_fully_displayed(const FinCategory& c, const TangentStructure& ts,
                      std::vector<DifferentialBundleData> candidates,
                      unsigned long long budget) {
    if (candidates.empty()) {
        unsigned long long used = 0;
        for (MorId q = 0; q < c.n_mor(); ++q) {
            ObjId e = c.dom(q), m = c.cod(q);
            auto e2 = compute_pullback(c, Cospan{q, q});
            if (!e2) continue; // no bundle can have this projection
            MorId p1 = e2->square.leftv;
            ObjId e2o = apex_of(c, e2->square);
            for (MorId zq : c.homset(m, e)) {
                if (c.comp[zq][q] != c.id(m)) continue;
                for (MorId sq : c.homset(e2o, e)) {
                    if (c.comp[sq][q] != c.comp[p1][q]) continue;
                    for (MorId lq : c.homset(e, ts.T.obj[e])) {
                        if (c.comp[lq][ts.T.mor[q]] !=
                            c.comp[q][ts.z[m]])
                            continue;
                        if (++used > budget)
                            return {Verdict3Value::inconclusive,
                                    cat("budget of ", budget,
                                        " candidate tuples exhausted")};
                        DifferentialBundleData d;
                        d.q = q;
                        d.z_q = zq;
                        d.s_q = sq;
                        d.l_q = lq;
                        d.e2 = *e2;
                        candidates.push_back(std::move(d));
                    }
                }
            }
        }
    }
    for (const auto& d : candidates) {
        if (!check_differential_bundle(c, ts, d).ok()) continue;
        if (!morphism_is_t_display(c, ts, d.q))
            return {Verdict3Value::fail,
                    cat("differential bundle with projection '",
                        c.mname(d.q), "' is not tangent display")};
    }
    return {Verdict3Value::pass, ""};
}

} // namespace tdm
