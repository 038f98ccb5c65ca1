#pragma once
// Display slice tangent category over a base object: objects are the tangent
// display maps into the base, T^M is built fiberwise by pulling T back along
// the structure zero, and every structural component arises as a mediator of
// an explicitly certified pullback. Also: terminal/slice round-trip checks,
// cartesian lifts, and display transfer into the slice.

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "tdm/base.hpp"
#include "tdm/display.hpp"
#include "tdm/fincat.hpp"
#include "tdm/limits.hpp"
#include "tdm/tangent.hpp"

namespace tdm {

struct SliceOutput {
    FinCategory cat;
    TangentStructure ts;
    ObjId base = kNone;
    // provenance
    std::vector<MorId> obj_src; // slice object -> source tangent display map
    struct MorProv {
        MorId under = kNone; // underlying source morphism
        MorId dom_q = kNone; // source object-map of the domain
        MorId cod_q = kNone;
    };
    std::vector<MorProv> mor_src;
    // defining pullback (of Tq along the zero) per slice object, in the
    // source category; square.leftv = q^M, square.top = iota.
    std::vector<PullbackCertificate> obj_cert;
    // (under, dom_q, cod_q) -> slice morphism
    std::map<std::tuple<MorId, MorId, MorId>, MorId> mor_index;
    // re-verification
    AxiomReport axioms;
    bool terminal_is_identity = false;
    bool products_ok = false;
    bool products_preserved = false;
    std::vector<std::string> notes;

    std::optional<ObjId> obj_of(MorId src_q) const {
        for (ObjId x = 0; x < obj_src.size(); ++x)
            if (obj_src[x] == src_q) return x;
        return std::nullopt;
    }
};

inline SliceOutput slice_tangent_category(const FinCategory& C,
                                          const TangentStructure& ts,
                                          ObjId base) {
    check_input(base < C.n_obj(), "slice: bad base object");
    {
        AxiomReport pre = check_tangent_axioms(C, ts);
        if (!pre.ok())
            throw input_error(cat("slice: tangent structure fails axiom ",
                                  pre.first_failure()->name));
    }
    const Functor& T = ts.T;
    auto mc = [&](MorId f, MorId g) -> MorId {
        if (f == kNone || g == kNone || !C.composable(f, g)) return kNone;
        return C.comp[f][g];
    };

    SliceOutput out;
    out.base = base;

    std::vector<MorId> qs;
    for (MorId q = 0; q < C.n_mor(); ++q)
        if (C.cod(q) == base && morphism_is_t_display(C, ts, q))
            qs.push_back(q);

    auto oname = [&](MorId q) { return cat("/", C.mname(q)); };
    auto mname = [&](MorId f, MorId q, MorId q2) {
        return cat("/", C.mname(f), ":", C.mname(q), ">", C.mname(q2));
    };

    CatBuilder b;
    for (MorId q : qs) b.add_object(oname(q));
    std::vector<std::tuple<MorId, MorId, MorId>> cells; // (f, q, q')
    for (MorId q : qs)
        for (MorId q2 : qs)
            for (MorId f : C.homset(C.dom(q), C.dom(q2)))
                if (mc(f, q2) == q) {
                    cells.emplace_back(f, q, q2);
                    b.add_morphism(mname(f, q, q2), oname(q), oname(q2));
                }
    for (MorId q : qs) b.set_identity(oname(q), mname(C.id(C.dom(q)), q, q));
    for (const auto& [f, q, q2] : cells)
        for (const auto& [g, r, r2] : cells) {
            if (q2 != r) continue;
            b.set_comp(mname(f, q, q2), mname(g, r, r2),
                       mname(mc(f, g), q, r2));
        }
    out.cat = b.build();
    {
        auto vr = validate_category(out.cat);
        check_construction(vr.valid(), "slice: constructed tables invalid");
    }
    const FinCategory& S = out.cat;

    std::map<std::string, MorId> q_by_name;
    for (MorId q : qs) q_by_name[oname(q)] = q;
    out.obj_src.resize(S.n_obj());
    for (ObjId x = 0; x < S.n_obj(); ++x)
        out.obj_src[x] = q_by_name.at(S.oname(x));
    std::map<std::string, std::tuple<MorId, MorId, MorId>> cell_by_name;
    for (const auto& t : cells)
        cell_by_name[mname(std::get<0>(t), std::get<1>(t), std::get<2>(t))] = t;
    out.mor_src.resize(S.n_mor());
    for (MorId f = 0; f < S.n_mor(); ++f) {
        auto [u, q, q2] = cell_by_name.at(S.mname(f));
        out.mor_src[f] = {u, q, q2};
        out.mor_index[{u, q, q2}] = f;
    }
    auto sobj = [&](MorId q) -> ObjId {
        for (ObjId x = 0; x < S.n_obj(); ++x)
            if (out.obj_src[x] == q) return x;
        throw construction_error(
            cat("slice: '", C.mname(q), "' expected tangent display into '",
                C.oname(base), "'"));
    };
    auto smor = [&](MorId u, MorId q, MorId q2) -> MorId {
        auto it = out.mor_index.find({u, q, q2});
        check_construction(it != out.mor_index.end(),
                           cat("slice: expected morphism over '", C.mname(u),
                               "' from '", C.mname(q), "' to '", C.mname(q2),
                               "' missing"));
        return it->second;
    };

    // Defining pullback of Tq along the zero, per object, plus the mediator
    // table of its T-image (for pairings into T(T^M E)).
    FunctorOrbit orb = functor_orbit(C, T);
    struct ObjData {
        MorId qM = kNone, iota = kNone;
        std::map<Cone, MorId> timg;
    };
    std::vector<ObjData> od(S.n_obj());
    out.obj_cert.resize(S.n_obj());
    for (ObjId x = 0; x < S.n_obj(); ++x) {
        MorId q = out.obj_src[x];
        auto cert = compute_pullback(C, Cospan{ts.z[base], T.mor[q]});
        check_construction(cert.has_value(),
                           cat("slice: pullback of T('", C.mname(q),
                               "') along the zero missing"));
        auto tv = is_T_pullback(C, T, cert->square);
        check_construction(tv.ok,
                           cat("slice: defining square for '", C.mname(q),
                               "' is not a T-pullback"));
        od[x].qM = cert->square.leftv;
        od[x].iota = cert->square.top;
        od[x].timg = orb.bound() > 1 ? tv.cert->iterates[0].mediators
                                     : tv.cert->base.mediators;
        out.obj_cert[x] = std::move(*cert);
    }
    auto med = [&](ObjId x, MorId to_n, MorId to_e) -> MorId {
        auto it = out.obj_cert[x].mediators.find({to_n, to_e});
        check_construction(it != out.obj_cert[x].mediators.end(),
                           cat("slice: mediator into T^M('",
                               C.mname(out.obj_src[x]), "') missing"));
        return it->second;
    };
    auto med_timg = [&](ObjId x, MorId to_n, MorId to_e) -> MorId {
        auto it = od[x].timg.find({to_n, to_e});
        check_construction(it != od[x].timg.end(),
                           cat("slice: mediator into T(T^M('",
                               C.mname(out.obj_src[x]), "')) missing"));
        return it->second;
    };

    TangentStructure& sts = out.ts;
    sts.bound = ts.bound;
    sts.T.obj.resize(S.n_obj());
    sts.T.mor.resize(S.n_mor());
    for (ObjId x = 0; x < S.n_obj(); ++x) sts.T.obj[x] = sobj(od[x].qM);
    for (MorId f = 0; f < S.n_mor(); ++f) {
        const auto& pr = out.mor_src[f];
        ObjId x = sobj(pr.dom_q), y = sobj(pr.cod_q);
        MorId u = med(y, od[x].qM, mc(od[x].iota, T.mor[pr.under]));
        sts.T.mor[f] = smor(u, od[x].qM, od[y].qM);
    }
    {
        auto fr = validate_functor(S, S, sts.T);
        check_construction(fr.valid(), "slice: T^M is not a functor");
    }

    sts.p.resize(S.n_obj());
    sts.z.resize(S.n_obj());
    sts.s.resize(S.n_obj());
    sts.l.resize(S.n_obj());
    sts.c.resize(S.n_obj());
    bool has_neg = ts.neg.has_value();
    if (has_neg) sts.neg = std::vector<MorId>(S.n_obj());

    for (ObjId x = 0; x < S.n_obj(); ++x) {
        MorId q = out.obj_src[x];
        ObjId e = C.dom(q);
        MorId qM = od[x].qM, iota = od[x].iota;
        ObjId y = sobj(qM); // T^M x

        sts.p[x] = smor(mc(iota, ts.p[e]), qM, q);
        sts.z[x] = smor(med(x, q, ts.z[e]), q, qM);
        if (has_neg)
            (*sts.neg)[x] = smor(med(x, qM, mc(iota, (*ts.neg)[e])), qM, qM);

        // l^M: first into the T-image of the defining square, then down.
        {
            MorId lam = med_timg(x, mc(qM, ts.z[base]), mc(iota, ts.l[e]));
            MorId u = med(y, qM, lam);
            sts.l[x] = smor(u, qM, od[y].qM);
        }
        // c^M on (T^M)^2 x.
        {
            MorId qM2 = od[y].qM, iota2 = od[y].iota;
            MorId kap = med_timg(
                x, mc(qM2, ts.z[base]),
                mc(mc(iota2, T.mor[iota]), ts.c[e]));
            MorId u = med(y, qM2, kap);
            sts.c[x] = smor(u, qM2, qM2);
        }

        // Witnesses T_n^M: pull T_n q back along the n-fold zero pairing,
        // then certify the result inside the slice.
        for (unsigned n = 2; n <= ts.bound; ++n) {
            const TnWitness& wb = ts.witnesses.at({base, n});
            const TnWitness& we = ts.witnesses.at({e, n});
            std::vector<MorId> legs(n);
            for (unsigned i = 0; i < n; ++i)
                legs[i] = mc(we.projections[i], T.mor[q]);
            auto it_tnq = wb.mediators.find(legs);
            check_construction(it_tnq != wb.mediators.end(),
                               "slice: T_n image of q is not a cone");
            MorId tnq = it_tnq->second;
            auto it_zn =
                wb.mediators.find(std::vector<MorId>(n, ts.z[base]));
            check_construction(it_zn != wb.mediators.end(),
                               "slice: n-fold zero pairing is not a cone");
            MorId zn = it_zn->second;
            auto wc = compute_pullback(C, Cospan{zn, tnq});
            check_construction(wc.has_value(),
                               cat("slice: T_", n, " pullback for '",
                                   C.mname(q), "' missing"));
            MorId qMn = wc->square.leftv, iota_n = wc->square.top;
            ObjId yn = sobj(qMn);
            TnWitness sw;
            sw.apex = yn;
            sw.projections.resize(n);
            for (unsigned i = 0; i < n; ++i) {
                MorId u = med(x, qMn, mc(iota_n, we.projections[i]));
                sw.projections[i] = smor(u, qMn, qM);
            }
            if (n == 2) {
                MorId u = med(x, qMn, mc(iota_n, ts.s[e]));
                sts.s[x] = smor(u, qMn, qM);
            }
            std::string fd;
            auto table =
                scan_wide_pullback(S, sw.apex, sw.projections, sts.p[x], &fd);
            check_construction(table.has_value(),
                               cat("slice: witness (", S.oname(x), ", ", n,
                                   ") fails to certify in the slice: ", fd));
            sw.mediators = std::move(*table);
            sts.witnesses[{x, n}] = std::move(sw);
        }
    }

    out.axioms = check_tangent_axioms(S, sts);

    // Cartesianness: terminal is the identity of the base; binary products
    // are pullbacks over the base and are preserved by T^M.
    {
        // terminals are unique only up to isomorphism, so check the
        // identity object directly rather than comparing against the
        // first terminal a scan happens to find.
        ObjId idb = sobj(C.id(base));
        bool term = true;
        for (ObjId x = 0; x < S.n_obj() && term; ++x)
            term = S.homset(x, idb).size() == 1;
        out.terminal_is_identity = term;
        if (!out.terminal_is_identity)
            out.notes.push_back("terminal of the slice is not id of the base");
    }
    out.products_ok = true;
    out.products_preserved = true;
    for (ObjId x = 0; x < S.n_obj() && out.products_ok; ++x)
        for (ObjId x2 = 0; x2 < S.n_obj(); ++x2) {
            MorId q = out.obj_src[x], q2 = out.obj_src[x2];
            auto w = compute_pullback(C, Cospan{q, q2});
            if (!w) {
                out.products_ok = false;
                out.notes.push_back(cat("no product of '", C.mname(q),
                                        "' and '", C.mname(q2), "'"));
                break;
            }
            MorId r = mc(w->square.leftv, q);
            ObjId xr = sobj(r);
            MorId pr1 = smor(w->square.leftv, r, q);
            MorId pr2 = smor(w->square.top, r, q2);
            auto product_ok = [&](ObjId xr_, ObjId xa, ObjId xb, MorId a,
                                  MorId bm) {
                for (ObjId t = 0; t < S.n_obj(); ++t)
                    for (MorId u : S.homset(t, xa))
                        for (MorId v : S.homset(t, xb)) {
                            unsigned count = 0;
                            for (MorId m : S.homset(t, xr_))
                                if (S.comp[m][a] == u && S.comp[m][bm] == v)
                                    ++count;
                            if (count != 1) return false;
                        }
                return true;
            };
            if (!product_ok(xr, x, x2, pr1, pr2)) {
                out.products_ok = false;
                out.notes.push_back(cat("product universality fails for ('",
                                        C.mname(q), "', '", C.mname(q2),
                                        "')"));
                break;
            }
            if (!product_ok(sts.T.obj[xr], sts.T.obj[x], sts.T.obj[x2],
                            sts.T.mor[pr1], sts.T.mor[pr2])) {
                out.products_preserved = false;
                out.notes.push_back(cat("T^M image of product ('", C.mname(q),
                                        "', '", C.mname(q2),
                                        "') is not a product"));
            }
        }

    return out;
}

// ---------------------------------------------------------------------
// Terminal/slice round trip.

struct TermSliceReport {
    ObjId terminal = kNone;
    bool bangs_t_display = false;
    bool u_functor_iso = false;
    bool uc_identity = false;
    bool unit_exists = false;
    bool triangle_a = false;
    bool triangle_b = false;
    std::vector<std::string> notes;
    bool ok() const {
        return bangs_t_display && u_functor_iso && uc_identity &&
               unit_exists && triangle_a && triangle_b;
    }
};

namespace detail {

struct TermSliceCore {
    ObjId terminal = kNone;
    bool bangs_t_display = true;
    bool u_iso = false;
    bool uc_id = false;
    bool unit_exists = false;
    bool tri_a = false;
    SliceOutput slice;
    std::vector<std::string> notes;
};

inline TermSliceCore term_slice_core(const FinCategory& C,
                                     const TangentStructure& ts) {
    TermSliceCore r;
    auto t = compute_terminal(C);
    check_input(t.has_value(), "term_slice: no terminal object");
    r.terminal = *t;
    auto bang = [&](ObjId m) { return C.homset(m, *t)[0]; };
    for (ObjId m = 0; m < C.n_obj(); ++m)
        if (!morphism_is_t_display(C, ts, bang(m))) {
            r.bangs_t_display = false;
            r.notes.push_back(cat("map from '", C.oname(m),
                                  "' to the terminal is not tangent display"));
        }
    r.slice = slice_tangent_category(C, ts, *t);
    const FinCategory& S = r.slice.cat;
    if (!r.bangs_t_display) return r;

    Functor U;
    U.obj.resize(C.n_obj());
    U.mor.resize(C.n_mor());
    for (ObjId m = 0; m < C.n_obj(); ++m)
        U.obj[m] = *r.slice.obj_of(bang(m));
    for (MorId f = 0; f < C.n_mor(); ++f) {
        auto it = r.slice.mor_index.find(
            {f, bang(C.dom(f)), bang(C.cod(f))});
        check_construction(it != r.slice.mor_index.end(),
                           "term_slice: U image missing");
        U.mor[f] = it->second;
    }
    r.u_iso = validate_functor(C, S, U).valid() &&
              S.n_obj() == C.n_obj() && S.n_mor() == C.n_mor();

    // C: slice -> source is domain/underlying-morphism projection.
    r.uc_id = true;
    for (ObjId m = 0; m < C.n_obj() && r.uc_id; ++m)
        r.uc_id = C.dom(r.slice.obj_src[U.obj[m]]) == m;
    for (MorId f = 0; f < C.n_mor() && r.uc_id; ++f)
        r.uc_id = r.slice.mor_src[U.mor[f]].under == f;

    // Unit at M: mediator of (bang(TM), id_TM) over the defining square of
    // bang(M); triangle A is the composite with the counit iota.
    r.unit_exists = true;
    r.tri_a = true;
    for (ObjId m = 0; m < C.n_obj(); ++m) {
        ObjId x = U.obj[m];
        const PullbackCertificate& cert = r.slice.obj_cert[x];
        ObjId tm = ts.T.obj[m];
        auto it = cert.mediators.find({bang(tm), C.id(tm)});
        if (it == cert.mediators.end()) {
            r.unit_exists = false;
            r.tri_a = false;
            r.notes.push_back(cat("unit cone at '", C.oname(m),
                                  "' does not commute"));
            continue;
        }
        MorId eta = it->second;
        MorId comp = C.comp[eta][cert.square.top];
        if (comp != C.id(tm)) {
            r.tri_a = false;
            r.notes.push_back(cat("triangle at '", C.oname(m), "' fails"));
        }
    }
    return r;
}

} // namespace detail

// Checks the terminal/slice adjunction data: U: M -> (M -> *) is an
// isomorphism onto the slice, the codomain functor is inverse to it, the
// unit exists, and both triangle identities hold (the second one at the
// slice level, via the slice-of-slice round trip).
inline TermSliceReport term_slice_unit_counit(const FinCategory& C,
                                              const TangentStructure& ts) {
    auto core = detail::term_slice_core(C, ts);
    TermSliceReport rep;
    rep.terminal = core.terminal;
    rep.bangs_t_display = core.bangs_t_display;
    rep.u_functor_iso = core.u_iso;
    rep.uc_identity = core.uc_id;
    rep.unit_exists = core.unit_exists;
    rep.triangle_a = core.tri_a;
    rep.notes = core.notes;
    if (core.bangs_t_display) {
        auto core2 =
            detail::term_slice_core(core.slice.cat, core.slice.ts);
        rep.triangle_b = core2.bangs_t_display && core2.uc_id && core2.tri_a;
        for (auto& n : core2.notes)
            rep.notes.push_back(cat("slice level: ", n));
    }
    return rep;
}

// ---------------------------------------------------------------------
// Cartesian lift of a system member along a map, with T-image checks.

struct LiftResult {
    PullbackCertificate cert;
    bool t_image_is_pullback = false;
    bool t_image_iso_canonical = false;
};

inline LiftResult cartesian_lift(const FinCategory& C,
                                 const TangentStructure& ts,
                                 const SystemVerdict& system, MorId f,
                                 MorId q) {
    check_input(q < C.n_mor() && f < C.n_mor(), "cartesian_lift: bad ids");
    bool member = false;
    for (MorId m : system.members) member = member || m == q;
    check_input(member, "cartesian_lift: q is not in the system");
    check_input(C.cod(f) == C.cod(q),
                "cartesian_lift: f and q have different codomains");
    auto cert = compute_pullback(C, Cospan{f, q});
    check_construction(cert.has_value(),
                       "cartesian_lift: system member admits no pullback");
    LiftResult out;
    out.cert = *cert;
    Square timg = apply_functor_to_square(ts.T, cert->square);
    auto v = square_commutes(C, timg)
                 ? detail::certify_square(C, timg, false)
                 : PbVerdict{};
    out.t_image_is_pullback = v.ok;
    if (v.ok) {
        auto canon =
            compute_pullback(C, Cospan{ts.T.mor[f], ts.T.mor[q]});
        check_construction(canon.has_value(),
                           "cartesian_lift: canonical T-image lift missing");
        // isomorphic as cones: mediators both ways compose to identities
        auto it1 = canon->mediators.find({timg.leftv, timg.top});
        auto it2 = v.cert->mediators.find(
            {canon->square.leftv, canon->square.top});
        if (it1 != canon->mediators.end() && it2 != v.cert->mediators.end()) {
            MorId a = it1->second, bm = it2->second;
            out.t_image_iso_canonical =
                C.comp[a][bm] == C.id(apex_of(C, timg)) &&
                C.comp[bm][a] == C.id(apex_of(C, canon->square));
        }
    }
    return out;
}

// ---------------------------------------------------------------------
// Display transfer into the slice: every slice morphism lying over a tangent
// display map of the source is tangent display in the slice.

struct TransferInstance {
    MorId dom_q = kNone, cod_q = kNone; // source object-maps
    bool t_display_in_slice = false;
};

struct TransferReport {
    std::vector<TransferInstance> instances;
    bool all_ok = true;
};

inline TransferReport slice_display_transfer(const FinCategory& C,
                                             const TangentStructure& ts,
                                             ObjId base, MorId h) {
    check_input(h < C.n_mor(), "slice_display_transfer: bad morphism");
    check_input(morphism_is_t_display(C, ts, h),
                "slice_display_transfer: h is not tangent display");
    SliceOutput S = slice_tangent_category(C, ts, base);
    TransferReport rep;
    for (ObjId y = 0; y < S.cat.n_obj(); ++y) {
        MorId g = S.obj_src[y];
        if (C.dom(g) != C.cod(h)) continue;
        MorId f = C.comp[h][g];
        auto it = S.mor_index.find({h, f, g});
        if (it == S.mor_index.end()) continue; // f not tangent display
        TransferInstance inst;
        inst.dom_q = f;
        inst.cod_q = g;
        inst.t_display_in_slice =
            morphism_is_t_display(S.cat, S.ts, it->second);
        rep.all_ok = rep.all_ok && inst.t_display_in_slice;
        rep.instances.push_back(inst);
    }
    check_input(!rep.instances.empty(),
                "slice_display_transfer: h is not a morphism of the slice");
    return rep;
}

} // namespace tdm
