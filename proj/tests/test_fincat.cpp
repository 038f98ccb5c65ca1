#include <catch2/catch_amalgamated.hpp>

#include "tdm/fincat.hpp"
#include "tdm/presentation.hpp"

#include "oracles.hpp"
#include "util.hpp"

using namespace tdm;

namespace {

FinCategory build_diamond() {
    CatBuilder b;
    for (const char* o : {"bot", "a", "b", "top"}) b.add_object(o);
    b.add_morphism("bot_a", "bot", "a");
    b.add_morphism("bot_b", "bot", "b");
    b.add_morphism("a_top", "a", "top");
    b.add_morphism("b_top", "b", "top");
    b.add_morphism("bot_top", "bot", "top");
    for (const char* o : {"bot", "a", "b", "top"}) {
        b.add_morphism(std::string("id_") + o, o, o);
        b.set_identity(o, std::string("id_") + o);
    }
    b.set_comp("bot_a", "a_top", "bot_top");
    b.set_comp("bot_b", "b_top", "bot_top");
    return b.build();
}

} // namespace

TEST_CASE("builder assembles a valid poset category") {
    FinCategory c = build_diamond();
    CHECK(c.n_obj() == 4);
    CHECK(c.n_mor() == 9);
    CHECK(validate_category(c).valid());

    // identity composites are auto-filled
    MorId f = *c.mor_by_name("bot_a");
    CHECK(c.comp[c.id(*c.obj_by_name("bot"))][f] == f);
    CHECK(c.comp[f][c.id(*c.obj_by_name("a"))] == f);
    // declared composite
    CHECK(c.comp[f][*c.mor_by_name("a_top")] == *c.mor_by_name("bot_top"));
}

TEST_CASE("builder rejects duplicate names") {
    CatBuilder b;
    CHECK(b.add_object("x"));
    CHECK_FALSE(b.add_object("x"));
    CHECK(b.add_morphism("f", "x", "x"));
    CHECK_FALSE(b.add_morphism("f", "x", "x"));
}

TEST_CASE("ids are sorted by name") {
    FinCategory c = build_diamond();
    for (ObjId x = 0; x + 1 < c.n_obj(); ++x)
        CHECK(c.oname(x) < c.oname(x + 1));
    for (MorId f = 0; f + 1 < c.n_mor(); ++f)
        CHECK(c.mname(f) < c.mname(f + 1));
}

TEST_CASE("validation flags missing composites") {
    CatBuilder b;
    b.add_object("x");
    b.add_object("y");
    b.add_object("z");
    b.add_morphism("f", "x", "y");
    b.add_morphism("g", "y", "z");
    for (const char* o : {"x", "y", "z"}) {
        b.add_morphism(std::string("i") + o, o, o);
        b.set_identity(o, std::string("i") + o);
    }
    FinCategory c = b.build();
    auto r = validate_category(c);
    REQUIRE_FALSE(r.valid());
    CHECK(r.violations[0].find("undefined for composable pair") !=
          std::string::npos);
}

TEST_CASE("validation flags associativity failures") {
    CatBuilder b;
    b.add_object("m");
    b.add_morphism("one", "m", "m");
    b.add_morphism("a", "m", "m");
    b.add_morphism("b", "m", "m");
    b.set_identity("m", "one");
    b.set_comp("a", "a", "b");
    b.set_comp("a", "b", "one");
    b.set_comp("b", "a", "b");
    b.set_comp("b", "b", "one");
    auto r = validate_category(b.build());
    REQUIRE_FALSE(r.valid());
    bool assoc = false;
    for (const auto& v : r.violations)
        if (v.find("associativity") != std::string::npos) assoc = true;
    CHECK(assoc);
}

TEST_CASE("monos, idempotents and isos on the bundled monoid") {
    FinCategory c = load_example("monoid-e.cat").cat;
    MorId one = *c.mor_by_name("one");
    MorId e = *c.mor_by_name("e");
    CHECK(is_mono(c, one));
    CHECK_FALSE(is_mono(c, e)); // one;e = e;e = e
    CHECK(enumerate_idempotents(c) == std::vector<MorId>{e, one});
    CHECK(enumerate_isos(c) == std::vector<MorId>{one});
    CHECK_FALSE(is_iso(c, e));
}

TEST_CASE("mono verdicts agree with the oracle everywhere") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        for (MorId f = 0; f < pf.cat.n_mor(); ++f) {
            INFO(name << " morphism " << pf.cat.mname(f));
            CHECK(is_mono(pf.cat, f) == oracle::is_monic(pf.cat, f));
        }
    }
}

TEST_CASE("retract pairs on the isomorphism pair") {
    FinCategory c = load_example("iso2.cat").cat;
    ObjId x = *c.obj_by_name("x");
    auto pairs = enumerate_retract_pairs(c, x);
    // (ix, ix) and (finv, f): finv;f = iy
    REQUIRE(pairs.size() == 2);
    MorId f = *c.mor_by_name("f"), finv = *c.mor_by_name("finv");
    bool found = false;
    for (auto [s, r] : pairs)
        if (s == finv && r == f) found = true;
    CHECK(found);
    CHECK(inverse_of(c, f) == finv);
}

TEST_CASE("functor orbit of the identity functor") {
    FinCategory c = build_diamond();
    FunctorOrbit orb = functor_orbit(c, identity_functor(c));
    CHECK(orb.preperiod == 0);
    CHECK(orb.period == 1);
    CHECK(orb.bound() == 1);
}

TEST_CASE("functor orbit matches the oracle iterate count") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        if (!pf.ts) continue;
        FunctorOrbit orb = functor_orbit(pf.cat, pf.ts->T);
        auto iterates = oracle::functor_iterates(pf.cat, pf.ts->T);
        INFO(name);
        CHECK(orb.bound() == iterates.size());
    }
}

TEST_CASE("functor validation catches broken tables") {
    FinCategory c = build_diamond();
    Functor f = identity_functor(c);
    f.mor[*c.mor_by_name("bot_a")] = *c.mor_by_name("bot_b"); // wrong type
    CHECK_FALSE(validate_functor(c, c, f).valid());
}

TEST_CASE("natural transformation validation") {
    FinCategory c = load_example("z2.cat").cat;
    Functor idf = identity_functor(c);
    NatTransformation good{std::vector<MorId>{*c.mor_by_name("one")}};
    CHECK(validate_nat(c, c, idf, idf, good).valid());
    // g is also natural id => id here since the group is abelian
    NatTransformation alt{std::vector<MorId>{*c.mor_by_name("g")}};
    CHECK(validate_nat(c, c, idf, idf, alt).valid());
}
