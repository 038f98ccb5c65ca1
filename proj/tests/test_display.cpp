#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "tdm/display.hpp"
#include "tdm/presentation.hpp"

#include "oracles.hpp"
#include "util.hpp"

using namespace tdm;

namespace {

std::set<std::string> member_names(const FinCategory& c,
                                   const std::vector<MorId>& ms) {
    std::set<std::string> out;
    for (MorId m : ms) out.insert(c.mname(m));
    return out;
}

} // namespace

TEST_CASE("classification agrees with the oracle on every morphism") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        for (MorId q = 0; q < pf.cat.n_mor(); ++q) {
            DisplayVerdict v = classify_morphism(pf.cat, *pf.ts, q);
            oracle::Flags f = oracle::classify(pf.cat, *pf.ts, q);
            INFO(name << " morphism " << pf.cat.mname(q));
            CHECK(v.is_display == f.display);
            CHECK(v.is_t_display == f.t_display);
            CHECK(v.is_submersion == f.submersion);
            CHECK(v.is_etale == f.etale);
            CHECK(v.is_t_monic == f.t_monic);
        }
    }
}

TEST_CASE("cospan poset: only identities are display") {
    auto pf = load_example("vposet.cat");
    SystemVerdict v = maximal_tangent_display_system(pf.cat, *pf.ts);
    CHECK(member_names(pf.cat, v.members) ==
          std::set<std::string>{"id_a", "id_b", "id_c"});
    CHECK(v.ok());
}

TEST_CASE("diamond: every morphism is tangent display") {
    auto pf = load_example("diamond.cat");
    SystemVerdict v = maximal_tangent_display_system(pf.cat, *pf.ts);
    CHECK(v.members.size() == 9);
    CHECK(v.ok());
}

TEST_CASE("monoid-e: e is etale but not display and not monic") {
    auto pf = load_example("monoid-e.cat");
    MorId e = *pf.cat.mor_by_name("e");
    DisplayVerdict v = classify_morphism(pf.cat, *pf.ts, e);
    CHECK_FALSE(v.is_display);
    CHECK_FALSE(v.is_t_display);
    CHECK(v.is_submersion);
    CHECK(v.is_etale);
    CHECK_FALSE(v.is_t_monic);
    // negative flags carry reasons
    bool has_display_reason = false;
    for (const auto& [what, why] : v.witnesses)
        if (what == "display" && !why.empty()) has_display_reason = true;
    CHECK(has_display_reason);

    SystemVerdict sys = maximal_tangent_display_system(pf.cat, *pf.ts);
    CHECK(member_names(pf.cat, sys.members) == std::set<std::string>{"one"});
    CHECK(sys.ok());
}

TEST_CASE("group of order two: everything is display and etale") {
    for (const char* file : {"z2.cat", "z2twist.cat"}) {
        auto pf = load_example(file);
        SystemVerdict v = maximal_tangent_display_system(pf.cat, *pf.ts);
        INFO(file);
        CHECK(v.members.size() == 2);
        CHECK(v.ok());
        for (MorId q = 0; q < pf.cat.n_mor(); ++q) {
            DisplayVerdict d = classify_morphism(pf.cat, *pf.ts, q);
            CHECK(d.is_etale);
            CHECK(d.is_t_monic);
        }
    }
}

TEST_CASE("maximal system passes the display-system clauses everywhere") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        SystemVerdict v = maximal_tangent_display_system(pf.cat, *pf.ts);
        INFO(name << ": " << (v.counterexamples.empty()
                                  ? ""
                                  : v.counterexamples.front()));
        CHECK(v.each_member_display);
        CHECK(v.closed_under_pullback);
        CHECK(v.stable_under_T);
        CHECK(v.closed_under_composition);
        CHECK(v.retractive);
    }
}

TEST_CASE("a non-closed family is rejected with a counterexample") {
    auto pf = load_example("diamond.cat");
    // bot_a composed with a_top leaves {bot_a, a_top}: bot_top missing
    std::vector<MorId> fam{*pf.cat.mor_by_name("bot_a"),
                           *pf.cat.mor_by_name("a_top")};
    SystemVerdict v = check_display_system(pf.cat, *pf.ts, fam);
    CHECK_FALSE(v.closed_under_composition);
    CHECK_FALSE(v.ok());
    CHECK_FALSE(v.counterexamples.empty());
}

TEST_CASE("plain display systems skip the T clauses") {
    auto pf = load_example("vposet.cat");
    std::vector<MorId> ids{*pf.cat.mor_by_name("id_a"),
                           *pf.cat.mor_by_name("id_b"),
                           *pf.cat.mor_by_name("id_c")};
    SystemVerdict v = check_display_system(pf.cat, *pf.ts, ids,
                                           /*tangent=*/false);
    CHECK(v.ok());
    CHECK(v.stable_under_T); // reported not-applicable as true
}

TEST_CASE("split idempotent closure verdicts") {
    CHECK(check_split_idempotents_closed(load_example("diamond.cat").cat).ok);
    CHECK(check_split_idempotents_closed(load_example("z2.cat").cat).ok);
    CHECK(check_split_idempotents_closed(load_example("iso2.cat").cat).ok);
    auto r = check_split_idempotents_closed(load_example("monoid-e.cat").cat);
    CHECK_FALSE(r.ok);
    CHECK(r.detail.find("no splitting") != std::string::npos);
}

TEST_CASE("well displayed and fully displayed verdicts") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        INFO(name);
        CHECK(check_well_displayed(pf.cat, *pf.ts).passed());
        Verdict3 fd = check_fully_displayed(pf.cat, *pf.ts, {}, 200000);
        CHECK(fd.value == Verdict3Value::pass);
    }
}

TEST_CASE("tiny budget reports inconclusive, not failure") {
    auto pf = load_example("diamond.cat");
    Verdict3 fd = check_fully_displayed(pf.cat, *pf.ts, {}, 1);
    CHECK(fd.value == Verdict3Value::inconclusive);
    CHECK(fd.detail.find("budget") != std::string::npos);
}

TEST_CASE("etale members form a retractive tangent display system") {
    for (const auto& name : tangent_examples()) {
        auto pf = load_example(name);
        std::vector<MorId> etale_display, subm_display;
        for (MorId q = 0; q < pf.cat.n_mor(); ++q) {
            DisplayVerdict v = classify_morphism(pf.cat, *pf.ts, q);
            if (v.is_t_display && v.is_etale) etale_display.push_back(q);
            if (v.is_t_display && v.is_submersion) subm_display.push_back(q);
        }
        INFO(name);
        if (!etale_display.empty())
            CHECK(check_display_system(pf.cat, *pf.ts, etale_display).ok());
        if (!subm_display.empty())
            CHECK(check_display_system(pf.cat, *pf.ts, subm_display).ok());
    }
}
