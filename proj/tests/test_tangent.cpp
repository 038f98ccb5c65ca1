#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "tdm/fincat.hpp"
#include "tdm/presentation.hpp"
#include "tdm/tangent.hpp"

#include "util.hpp"

using namespace tdm;

TEST_CASE("bundled tangent structures satisfy every axiom") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        REQUIRE(pf.ts.has_value());
        AxiomReport rep = check_tangent_axioms(pf.cat, *pf.ts);
        INFO(name << ": first failure "
                  << (rep.ok() ? "-" : rep.first_failure()->name));
        CHECK(rep.ok());
        if (pf.cat.n_obj() > 0) CHECK_FALSE(rep.entries.empty());
    }
}

TEST_CASE("axiom groups all appear on a nonempty example") {
    auto pf = load_example("diamond.cat");
    AxiomReport rep = check_tangent_axioms(pf.cat, *pf.ts);
    std::set<std::string> groups;
    for (const auto& e : rep.entries) groups.insert(e.group);
    for (const char* g :
         {"(0)", "(i)", "(ii)", "(iii)", "(iv)", "(v)", "(vi)", "(vii)"})
        CHECK(groups.count(g) == 1);
}

TEST_CASE("negative structure verdicts") {
    auto z2 = load_example("z2.cat");
    REQUIRE(z2.ts->neg.has_value());
    CHECK(check_negatives(z2.cat, *z2.ts).ok());

    auto tw = load_example("z2twist.cat");
    REQUIRE(tw.ts->neg.has_value());
    CHECK(check_negatives(tw.cat, *tw.ts).ok());

    // n = g on the plain z2 structure breaks n_over_p (g;one != one)
    TangentStructure broken = *z2.ts;
    (*broken.neg)[0] = *z2.cat.mor_by_name("g");
    AxiomReport rep = check_negatives(z2.cat, broken);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("trivial tangent structure passes on every bundled category") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        TangentStructure ts = trivial_tangent(pf.cat);
        INFO(name);
        CHECK(check_tangent_axioms(pf.cat, ts).ok());
        CHECK(check_negatives(pf.cat, ts).ok());
    }
}

TEST_CASE("twisted structure parses with the scanned (g,g) witness") {
    auto tw = load_example("z2twist.cat");
    const FinCategory& c = tw.cat;
    MorId g = *c.mor_by_name("g");
    const TnWitness& w = tw.ts->witnesses.at({*c.obj_by_name("pt"), 2});
    CHECK(w.projections == std::vector<MorId>{g, g});
    CHECK(check_tangent_axioms(c, *tw.ts).ok());
}

TEST_CASE("swap structure runs a genuine second functor iterate") {
    auto pf = load_example("iso2swap.cat");
    const FinCategory& c = pf.cat;
    const TangentStructure& ts = *pf.ts;
    ObjId x = *c.obj_by_name("x"), y = *c.obj_by_name("y");
    CHECK(ts.T.obj[x] == y);
    CHECK(ts.T.obj[y] == x);
    CHECK(ts.T.mor[c.id(x)] == c.id(y)); // identity rows are auto-filled
    FunctorOrbit orb = functor_orbit(c, ts.T);
    CHECK(orb.preperiod == 0);
    CHECK(orb.period == 2);
    CHECK(check_tangent_axioms(c, ts).ok());
    REQUIRE(ts.neg.has_value());
    CHECK(check_negatives(c, ts).ok());
}

TEST_CASE("ill-typed components are input errors, not axiom failures") {
    auto pf = load_example("z2.cat");
    TangentStructure bad = *pf.ts;
    bad.p.clear();
    CHECK_THROWS_AS(check_tangent_axioms(pf.cat, bad), input_error);

    TangentStructure missing = *pf.ts;
    missing.witnesses.clear();
    CHECK_THROWS_AS(check_tangent_axioms(pf.cat, missing), input_error);
}

TEST_CASE("a wrong sum component fails an additive-bundle axiom") {
    auto pf = load_example("z2.cat");
    TangentStructure bad = *pf.ts;
    bad.s[0] = *pf.cat.mor_by_name("g"); // still well-typed at the apex
    AxiomReport rep = check_tangent_axioms(pf.cat, bad);
    REQUIRE_FALSE(rep.ok());
    CHECK(rep.first_failure()->group != "(ii)"); // witnesses still fine
}

TEST_CASE("tangent bundle data forms a differential bundle everywhere") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        for (ObjId m = 0; m < pf.cat.n_obj(); ++m) {
            DifferentialBundleData d = tangent_bundle_data(pf.cat, *pf.ts, m);
            AxiomReport rep = check_differential_bundle(pf.cat, *pf.ts, d);
            INFO(name << " object " << pf.cat.oname(m) << ": "
                      << (rep.ok() ? "-" : rep.first_failure()->name));
            CHECK(rep.ok());
        }
    }
}

TEST_CASE("vertical bundles exist for identity-structure projections") {
    auto pf = load_example("diamond.cat");
    for (MorId q = 0; q < pf.cat.n_mor(); ++q) {
        auto vb = compute_vertical_bundle(pf.cat, *pf.ts, q);
        REQUIRE(vb.has_value());
        // with T = Id and z = id the vertical bundle is the domain itself
        CHECK(vb->total == pf.cat.dom(q));
    }
}

TEST_CASE("witness tables answer every cone") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        const FinCategory& c = pf.cat;
        for (const auto& [key, w] : pf.ts->witnesses) {
            MorId p = pf.ts->p[key.first];
            unsigned n = key.second;
            // every n-tuple of legs with equal composite into the base must
            // have exactly one mediator entry
            for (ObjId src = 0; src < c.n_obj(); ++src) {
                std::vector<MorId> legs(n);
                const auto& hs = c.homset(src, c.dom(p));
                if (hs.empty()) continue;
                std::vector<std::size_t> idx(n, 0);
                for (;;) {
                    for (unsigned i = 0; i < n; ++i) legs[i] = hs[idx[i]];
                    bool cone = true;
                    for (unsigned i = 1; i < n; ++i)
                        if (c.comp[legs[i]][p] != c.comp[legs[0]][p])
                            cone = false;
                    if (cone) {
                        auto it = w.mediators.find(legs);
                        REQUIRE(it != w.mediators.end());
                        for (unsigned i = 0; i < n; ++i)
                            CHECK(c.comp[it->second][w.projections[i]] ==
                                  legs[i]);
                    }
                    unsigned i = 0;
                    for (; i < n; ++i) {
                        if (++idx[i] < hs.size()) break;
                        idx[i] = 0;
                    }
                    if (i == n) break;
                }
            }
        }
    }
}
