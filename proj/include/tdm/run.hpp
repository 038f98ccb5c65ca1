#pragma once
// Command dispatcher shared by the CLI binary and the tests: parses a
// presentation file, delegates to the engine, and renders a deterministic
// report plus an exit status (0 pass, 1 failed check or inconclusive,
// 2 input error).

#include <optional>
#include <string>

#include "tdm/display.hpp"
#include "tdm/fincat.hpp"
#include "tdm/karoubi.hpp"
#include "tdm/limits.hpp"
#include "tdm/par.hpp"
#include "tdm/presentation.hpp"
#include "tdm/report.hpp"
#include "tdm/ringcat.hpp"
#include "tdm/slice.hpp"
#include "tdm/tangent.hpp"

namespace tdm {

struct Flags {
    std::optional<std::string> mor;    // classify
    std::optional<std::string> base;   // slice
    std::optional<std::string> system; // par
    unsigned depth = 2;                // ring-demo
    unsigned long long budget = 200000; // fully-displayed enumeration cap
};

struct RunResult {
    std::string report;
    int exit_code = 0;
};

namespace detail {

inline const TangentStructure& need_ts(const PresentationFile& pf) {
    check_input(pf.ts.has_value(), "file has no tangent block");
    return *pf.ts;
}

inline void axiom_lines(Report& rep, const AxiomReport& ar) {
    rep.kv("checks", ar.entries.size());
    for (const auto& e : ar.entries)
        rep.check(cat("check (", e.group, ") ", e.name), e.ok, e.detail);
}

inline void run_validate(Report& rep, const PresentationFile& pf) {
    rep.kv("objects", pf.cat.n_obj());
    rep.kv("morphisms", pf.cat.n_mor());
    rep.kv("systems", pf.systems.size());
    rep.kv("algebras", pf.algebras.size());
    rep.kv("alghoms", pf.alghoms.size());
    rep.check("category_valid", validate_category(pf.cat).valid());
    rep.kv("tangent_block", pf.ts ? "present" : "absent");
}

inline void run_tangent_check(Report& rep, const PresentationFile& pf) {
    const auto& ts = need_ts(pf);
    FunctorOrbit orb = functor_orbit(pf.cat, ts.T);
    rep.kv("orbit_preperiod", orb.preperiod);
    rep.kv("orbit_period", orb.period);
    rep.kv("bound", ts.bound);
    AxiomReport ar = check_tangent_axioms(pf.cat, ts);
    axiom_lines(rep, ar);
    if (ts.neg) {
        AxiomReport nr = check_negatives(pf.cat, ts);
        rep.kv("negatives", "present");
        axiom_lines(rep, nr);
    } else {
        rep.kv("negatives", "absent");
    }
}

inline void classify_lines(Report& rep, const PresentationFile& pf, MorId q) {
    DisplayVerdict v = classify_morphism(pf.cat, need_ts(pf), q);
    rep.line(cat("mor ", pf.cat.mname(q), ": display=",
                 v.is_display ? "yes" : "no",
                 " t_display=", v.is_t_display ? "yes" : "no",
                 " submersion=", v.is_submersion ? "yes" : "no",
                 " etale=", v.is_etale ? "yes" : "no",
                 " t_monic=", v.is_t_monic ? "yes" : "no"));
    for (const auto& [what, why] : v.witnesses)
        rep.line(cat("  reason ", what, ": ", why));
}

inline void run_classify(Report& rep, const PresentationFile& pf,
                         const Flags& flags) {
    if (flags.mor) {
        auto q = pf.cat.mor_by_name(*flags.mor);
        check_input(q.has_value(),
                    cat("unknown morphism '", *flags.mor, "'"));
        classify_lines(rep, pf, *q);
    } else {
        for (MorId q = 0; q < pf.cat.n_mor(); ++q)
            classify_lines(rep, pf, q);
    }
}

inline void run_maximal_system(Report& rep, const PresentationFile& pf,
                               const Flags& flags) {
    const auto& ts = need_ts(pf);
    SystemVerdict v = maximal_tangent_display_system(pf.cat, ts);
    rep.kv("members", v.members.size());
    for (MorId m : v.members) rep.line(cat("member ", pf.cat.mname(m)));
    rep.check("each_member_display", v.each_member_display);
    rep.check("closed_under_pullback", v.closed_under_pullback);
    rep.check("stable_under_T", v.stable_under_T);
    rep.check("closed_under_composition", v.closed_under_composition);
    rep.check("retractive", v.retractive);
    for (const auto& cx : v.counterexamples)
        rep.line(cat("  counterexample: ", cx));
    auto sic = check_split_idempotents_closed(pf.cat);
    rep.line(cat("split_idempotents_closed: ",
                 sic.ok ? "yes" : cat("no -- ", sic.detail)));
    auto wd = check_well_displayed(pf.cat, ts);
    rep.check("well_displayed", wd.passed(), wd.detail);
    auto fd = check_fully_displayed(pf.cat, ts, {}, flags.budget);
    if (fd.value == Verdict3Value::inconclusive) {
        rep.line(cat("fully_displayed: inconclusive -- ", fd.detail));
        rep.note_failure();
    } else {
        rep.check("fully_displayed", fd.passed(), fd.detail);
    }
}

inline void run_split(Report& rep, const PresentationFile& pf) {
    SplitOutput out = karoubi_envelope(pf.cat, need_ts(pf));
    rep.kv("objects", out.cat.n_obj());
    rep.kv("morphisms", out.cat.n_mor());
    for (ObjId x = 0; x < out.cat.n_obj(); ++x)
        rep.line(cat("object ", out.cat.oname(x), " <- idempotent ",
                     pf.cat.mname(out.obj_idem[x])));
    rep.check("axioms", out.axioms.ok(),
              out.axioms.ok() ? "" : out.axioms.first_failure()->name);
    rep.check("all_idempotents_split", out.all_idempotents_split);
    rep.check("embedding_fully_faithful", out.embedding_fully_faithful);
    rep.check("t_display_transported", out.t_display_transported);
    rep.check("hom_comparison", out.hom_comparison_ok);
    for (const auto& n : out.notes) rep.line(cat("  note: ", n));
}

inline void run_slice(Report& rep, const PresentationFile& pf,
                      const Flags& flags) {
    const auto& ts = need_ts(pf);
    check_input(flags.base.has_value(), "slice needs --base");
    auto base = pf.cat.obj_by_name(*flags.base);
    check_input(base.has_value(), cat("unknown object '", *flags.base, "'"));
    SliceOutput out = slice_tangent_category(pf.cat, ts, *base);
    rep.kv("base", pf.cat.oname(*base));
    rep.kv("objects", out.cat.n_obj());
    rep.kv("morphisms", out.cat.n_mor());
    for (ObjId x = 0; x < out.cat.n_obj(); ++x)
        rep.line(cat("object ", out.cat.oname(x), " <- ",
                     pf.cat.mname(out.obj_src[x])));
    rep.check("axioms", out.axioms.ok(),
              out.axioms.ok() ? "" : out.axioms.first_failure()->name);
    rep.check("terminal_is_identity", out.terminal_is_identity);
    rep.check("products", out.products_ok);
    rep.check("products_preserved_by_T", out.products_preserved);
    for (const auto& n : out.notes) rep.line(cat("  note: ", n));
    TermSliceReport tsr = term_slice_unit_counit(pf.cat, ts);
    rep.check("term_slice_bangs_display", tsr.bangs_t_display);
    rep.check("term_slice_u_iso", tsr.u_functor_iso);
    rep.check("term_slice_round_trip", tsr.uc_identity);
    rep.check("term_slice_unit", tsr.unit_exists);
    rep.check("term_slice_triangle_a", tsr.triangle_a);
    rep.check("term_slice_triangle_b", tsr.triangle_b);
    for (const auto& n : tsr.notes) rep.line(cat("  note: ", n));
}

inline void par_lines(Report& rep, const ParOutput& out,
                      const FinCategory& src) {
    rep.kv("objects", out.cat.n_obj());
    rep.kv("morphisms", out.cat.n_mor());
    for (MorId pm = 0; pm < out.cat.n_mor(); ++pm)
        rep.line(cat("span ", out.cat.mname(pm), " <- (",
                     src.mname(out.span_src[pm].first), ", ",
                     src.mname(out.span_src[pm].second), ")"));
    rep.check("R1", out.r1);
    rep.check("R2", out.r2);
    rep.check("R3", out.r3);
    rep.check("R4", out.r4);
    rep.check("restriction_idempotents_split",
              out.restriction_idempotents_split);
    rep.check("components_total", out.components_total);
    rep.check("totals", out.totals_ok);
    rep.check("embedding_faithful", out.embedding_faithful);
    rep.check("axioms", out.axioms.ok(),
              out.axioms.ok() ? "" : out.axioms.first_failure()->name);
    for (const auto& n : out.notes) rep.line(cat("  note: ", n));
}

inline void run_par(Report& rep, const PresentationFile& pf,
                    const Flags& flags) {
    const auto& ts = need_ts(pf);
    check_input(flags.system.has_value(), "par needs --system");
    auto it = pf.systems.find(*flags.system);
    check_input(it != pf.systems.end(),
                cat("unknown system '", *flags.system, "'"));
    rep.kv("system", *flags.system);
    ParOutput out = par_category(pf.cat, ts, it->second);
    par_lines(rep, out, pf.cat);
}

inline void run_open(Report& rep, const PresentationFile& pf) {
    const auto& ts = need_ts(pf);
    OpenOutput out = open_subobjects(pf.cat, ts);
    rep.kv("members", out.members.size());
    for (MorId m : out.members) rep.line(cat("member ", pf.cat.mname(m)));
    for (const auto& ps : out.posets) {
        rep.line(cat("object ", pf.cat.oname(ps.obj), ": classes ",
                     ps.classes.size()));
        for (size_t k = 0; k < ps.classes.size(); ++k) {
            std::string elems;
            for (MorId e : ps.classes[k].elements)
                elems += cat(" ", pf.cat.mname(e));
            rep.line(cat("  class [", pf.cat.mname(ps.classes[k].rep),
                         "]:", elems));
        }
        if (ps.top >= 0)
            rep.line(cat("  top [",
                         pf.cat.mname(ps.classes[size_t(ps.top)].rep), "]"));
        for (size_t a = 0; a < ps.classes.size(); ++a)
            for (size_t b = 0; b < ps.classes.size(); ++b)
                if (ps.meet[a][b] >= 0)
                    rep.line(cat(
                        "  meet [", pf.cat.mname(ps.classes[a].rep), "] ^ [",
                        pf.cat.mname(ps.classes[b].rep), "] = [",
                        pf.cat.mname(ps.classes[size_t(ps.meet[a][b])].rep),
                        "]"));
    }
    rep.check("system", out.is_system);
    rep.check("meets", out.meets_ok);
    for (const auto& n : out.notes) rep.line(cat("  note: ", n));
    ParOutput par = par_category(pf.cat, ts, out.members);
    rep.line("par over the open system:");
    par_lines(rep, par, pf.cat);
}

inline void run_ring_demo(Report& rep, const PresentationFile& pf,
                          const Flags& flags) {
    check_input(!pf.alghoms.empty(), "ring-demo needs alghom blocks");
    rep.kv("depth", flags.depth);
    bool any = false;
    for (const auto& f : pf.alghoms)
        for (const auto& g : pf.alghoms) {
            if (f.src != g.src) continue;
            any = true;
            const FiniteAlgebra& m = *pf.algebra(f.src);
            const FiniteAlgebra& n = *pf.algebra(f.tgt);
            const FiniteAlgebra& e = *pf.algebra(g.tgt);
            PushoutResult pr = tensor_over(m, n, e, f.hom, g.hom);
            rep.line(cat("pushout ", f.name, " , ", g.name, ": dim ",
                         pr.tensor.dim));
            rep.check(cat("  spanning ", f.name, " , ", g.name),
                      pr.spanning_ok);
            PreservationVerdict pv = check_T_preserves_pushout(
                m, n, e, f.hom, g.hom, flags.depth);
            for (const auto& lvl : pv.levels)
                rep.check(cat("  preserve ", f.name, " , ", g.name, " k=",
                              lvl.k, " (dim ", lvl.dim_tensor_of_duals,
                              " vs ", lvl.dim_dual_of_tensor, ")"),
                          lvl.bijective);
        }
    check_input(any, "ring-demo needs two homs out of a common source");
}

} // namespace detail

inline RunResult run_command(const std::string& command,
                             const std::string& path, const Flags& flags) {
    Report rep(command, path);
    try {
        PresentationFile pf = parse_file(path);
        if (command == "validate") {
            detail::run_validate(rep, pf);
        } else if (command == "tangent-check") {
            detail::run_tangent_check(rep, pf);
        } else if (command == "classify") {
            detail::run_classify(rep, pf, flags);
        } else if (command == "maximal-system") {
            detail::run_maximal_system(rep, pf, flags);
        } else if (command == "split") {
            detail::run_split(rep, pf);
        } else if (command == "slice") {
            detail::run_slice(rep, pf, flags);
        } else if (command == "par") {
            detail::run_par(rep, pf, flags);
        } else if (command == "open") {
            detail::run_open(rep, pf);
        } else if (command == "ring-demo") {
            detail::run_ring_demo(rep, pf, flags);
        } else {
            return {rep.finish_error(cat("unknown command '", command, "'")),
                    2};
        }
    } catch (const input_error& e) {
        return {rep.finish_error(e.what()), 2};
    } catch (const construction_error& e) {
        return {rep.finish_error(cat("construction: ", e.what())), 2};
    }
    bool failed = rep.any_failure();
    return {rep.finish(), failed ? 1 : 0};
}

} // namespace tdm
