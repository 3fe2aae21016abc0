#include <doctest.h>

#include "common.hpp"
#include "generators.hpp"
#include "mpst/analysis.hpp"
#include "oracles.hpp"

using namespace mpst;
using mpst::test::G;
using mpst::test::load_example;

namespace {

struct Matrix {
    bool safe;
    bool df;
    bool live;
};

Matrix props(const TypingContext& ctx) {
    auto g = reachable_contexts(ctx, "s");
    return {check_safety(g).holds, check_deadlock_free(g).holds, check_live(g).holds};
}

}  // namespace

TEST_CASE("OAuth association") {
    auto f = load_example("oauth.mpst");
    auto r = check_association(f.global("G_auth"), f.context("Gamma_auth"), "s");
    CHECK(r.holds);
    REQUIRE(r.roles.size() == 3);
    for (const auto& rr : r.roles) {
        CHECK(rr.subtype_holds);
        CHECK(rr.projection);
        CHECK(rr.entry);
    }
    CHECK(r.end_part.empty());
}

TEST_CASE("association failures") {
    auto f = load_example("oauth.mpst");
    const auto& g = f.global("G_auth");

    auto missing = check_association(g, parse_context("{ s[s]: c(+)cancel }"), "s");
    CHECK_FALSE(missing.holds);
    CHECK(missing.failure);

    auto wrong = check_association(g, parse_context("{ s[s]: c(+)cancel, s[c]: s&cancel . a(+)quit, s[a]: c&quit }"), "s");
    CHECK_FALSE(wrong.holds);

    auto extra_end = parse_context(
        "{ s[s]: c(+)cancel, s[c]: s&{ login . a(+)passwd(str), cancel . a(+)quit }, s[a]: c&{ passwd(str) . "
        "s(+)auth(bool), quit }, s[z]: end }");
    auto ok = check_association(g, extra_end, "s");
    CHECK(ok.holds);
    REQUIRE(ok.end_part.size() == 1);
    CHECK(to_string(ok.end_part[0]) == "s[z]");

    auto extra_live = parse_context("{ s[p]: q(+)a, s[q]: p&a, s[z]: p(+)b }");
    CHECK_FALSE(associated(G("p->q:a"), extra_live, "s"));

    auto unprojectable = load_example("merge.mpst").global("G");
    auto bad = check_association(unprojectable, parse_context("{ s[A]: end, s[B]: end, s[C]: end }"), "s");
    CHECK_FALSE(bad.holds);
}

TEST_CASE("property matrix") {
    auto f = load_example("counterexamples.mpst");
    CHECK_FALSE(props(f.context("Gamma_A")).safe);
    CHECK_FALSE(props(f.context("Gamma_B")).safe);

    auto c = props(f.context("Gamma_C"));
    CHECK(c.safe);
    CHECK_FALSE(c.df);

    auto d = props(f.context("Gamma_D"));
    CHECK_FALSE(d.safe);
    CHECK(d.df);

    CHECK(props(f.context("Gamma_E")).live);

    auto e1 = props(f.context("Gamma_E1"));
    CHECK(e1.safe);
    CHECK(e1.df);
    CHECK_FALSE(e1.live);

    auto e2 = props(f.context("Gamma_E2"));
    CHECK(e2.live);
    CHECK_FALSE(e2.safe);

    auto fp = props(f.context("Gamma_F"));
    CHECK(fp.live);
    CHECK_FALSE(associated(G("p->q:l(<rec t . q(+)l(<t>) . end>)"), f.context("Gamma_F"), "s"));

    auto oauth = props(load_example("oauth.mpst").context("Gamma_auth"));
    CHECK(oauth.safe);
    CHECK(oauth.df);
    CHECK(oauth.live);
}

TEST_CASE("liveness witness for the unfair cycle") {
    auto f = load_example("counterexamples.mpst");
    auto v = check_live(f.context("Gamma_E1"), "s");
    REQUIRE_FALSE(v.holds);
    REQUIRE(v.pending);
    CHECK(obligation_pair(*v.pending) == std::pair<Role, Role>{"q", "r"});
    REQUIRE_FALSE(v.cycle.empty());
    for (const auto& e : v.cycle) {
        CHECK(e.label.from() == Role("q"));
        CHECK(e.label.to() == Role("p"));
    }
    CHECK(v.cycle.front().source == v.cycle.back().target);
}

TEST_CASE("safety and deadlock witnesses") {
    auto f = load_example("counterexamples.mpst");
    auto s = check_safety(f.context("Gamma_B"), "s");
    REQUIRE_FALSE(s.holds);
    CHECK(s.trace.empty());
    REQUIRE(s.pending);
    CHECK(format_label(*s.pending) == "s:p!q:m(real)");

    auto d = check_deadlock_free(f.context("Gamma_C"), "s");
    REQUIRE_FALSE(d.holds);
    REQUIRE(d.node);
    CHECK(d.trace.empty());
}

TEST_CASE("obligation pairs") {
    CHECK(obligation_pair(parse_label("s:p!q:a(int)")) == std::pair<Role, Role>{"p", "q"});
    CHECK(obligation_pair(parse_label("s:q?p:a(int)")) == std::pair<Role, Role>{"p", "q"});
    CHECK(obligation_pair(parse_label("s:p->q:a")) == std::pair<Role, Role>{"p", "q"});
}

TEST_CASE("soundness and completeness on OAuth") {
    auto f = load_example("oauth.mpst");
    CHECK(check_soundness_correspondence(f.global("G_auth"), f.context("Gamma_auth"), "s", 6).empty());
    CHECK(check_completeness_correspondence(f.global("G_auth"), f.context("Gamma_auth"), "s", 6).empty());
}

TEST_CASE("completeness catches a context that outruns its global type") {
    auto g = G("p->q:a");
    auto ctx = parse_context("{ s[p]: q(+)a, s[q]: p&a }");
    CHECK(check_completeness_correspondence(g, ctx, "s", 4).empty());
    auto loose = parse_context("{ s[p]: q(+)a . q(+)b, s[q]: p&a . p&b }");
    CHECK_FALSE(check_completeness_correspondence(g, loose, "s", 4).empty());
}

TEST_CASE("everything by association") {
    auto ring = load_example("merge.mpst").global("Ring");
    auto r = check_all_by_association(ring, "s");
    CHECK(r.holds());
    CHECK(r.association.holds);
}

TEST_CASE("association implies the three properties on generated types") {
    testing::Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        auto g = testing::random_projectable_global(rng);
        auto ctx = testing::associated_context(rng, g, i % 2 == 0);
        REQUIRE(associated(g, ctx, "s"));
        auto graph = reachable_contexts(ctx, "s");
        CHECK(check_safety(graph).holds);
        CHECK(check_deadlock_free(graph).holds);
        CHECK(check_live(graph).holds);
    }
}

TEST_CASE("checkers agree with the oracles on random contexts") {
    testing::Rng rng(31);
    int compared = 0;
    for (int i = 0; i < 400; ++i) {
        auto ctx = testing::random_context(rng, 2 + i % 2, 3);
        auto g = reachable_contexts(ctx, "s", 500);
        CHECK(check_safety(g).holds == testing::clause_safe(g));
        CHECK(check_deadlock_free(g).holds == testing::clause_deadlock_free(g));
        if (g.size() <= 12) {
            ++compared;
            CHECK(check_live(g).holds == testing::brute_force_live(g));
        }
    }
    CHECK(compared > 300);
}
