#include <doctest.h>

#include "common.hpp"
#include "generators.hpp"
#include "mpst/projection.hpp"

using namespace mpst;
using mpst::test::G;
using mpst::test::L;
using mpst::test::load_example;

TEST_CASE("OAuth projections") {
    auto f = load_example("oauth.mpst");
    const auto& g = f.global("G_auth");
    CHECK(*project(g, "s").value() == *f.local("T_s"));
    CHECK(*project(g, "c").value() == *f.local("T_c"));
    CHECK(*project(g, "a").value() == *f.local("T_a"));

    auto all = project_all(*g);
    REQUIRE(all.ok());
    CHECK(all.value().size() == 3);
}

TEST_CASE("merging external choices unions labels") {
    auto m = merge(L("A&greet(str)"), L("A&farewell(bool)"));
    REQUIRE(m.ok());
    CHECK(canonical_key(*m.value()) == canonical_key(*L("A&{ greet(str), farewell(bool) }")));
}

TEST_CASE("undefined merges") {
    auto reason = [](const char* a, const char* b) { return merge(L(a), L(b)).error().reason; };
    CHECK(reason("A(+)greet(str)", "A(+)farewell(bool)") == MergeFailure::Reason::InternalChoiceClash);
    CHECK(reason("A&greet(str)", "A&greet(bool)") == MergeFailure::Reason::LabelPayloadClash);
    CHECK(reason("A(+)greet(str)", "A(+)greet(bool)") == MergeFailure::Reason::PayloadMismatch);
    CHECK(reason("A(+)greet(str)", "B(+)greet(str)") == MergeFailure::Reason::PeerMismatch);
    CHECK(reason("A(+)greet(str)", "A(+)greet(str) . B&farewell(bool)") == MergeFailure::Reason::ShapeMismatch);
    CHECK(reason("rec t . A(+)a . t", "rec t . rec u . A(+)a . u") == MergeFailure::Reason::ShapeMismatch);
}

TEST_CASE("merge failure paths point at the clash") {
    auto r = merge(L("A&{ x . B(+)a, y }"), L("A&{ x . B(+)b }"));
    REQUIRE_FALSE(r.ok());
    CHECK(r.error().path == std::vector<std::string>{"x"});
    CHECK(describe(r.error()).find("[x]") != std::string::npos);
}

TEST_CASE("projection onto C fails") {
    auto f = load_example("merge.mpst");
    const auto& g = f.global("G");
    CHECK(project(g, "A").ok());
    CHECK(project(g, "B").ok());
    auto c = project(g, "C");
    REQUIRE_FALSE(c.ok());
    CHECK(c.error().reason == MergeFailure::Reason::InternalChoiceClash);
    CHECK(c.error().role == Role("C"));

    auto all = project_all(*g);
    REQUIRE_FALSE(all.ok());
    CHECK(all.error().size() == 1);
}

TEST_CASE("recursion") {
    auto g = G("rec t . A->B { more(int) . B->C:fwd(int) . t, stop . B->C:stop }");
    CHECK(*project(g, "A").value() == *L("rec t . B(+){ more(int) . t, stop }"));
    CHECK(*project(g, "C").value() == *L("rec t . B&{ fwd(int) . t, stop }"));
    CHECK(*project(g, "D").value() == *LocalType::end());
    CHECK(*project(G("rec t . A->B:a . t"), "C").value() == *LocalType::end());
}

TEST_CASE("alpha-variant binders merge and stay closed") {
    auto m = merge(L("rec t . A&a . t"), L("rec u . A&{ a . u, b . u }"));
    REQUIRE(m.ok());
    CHECK(free_vars(*m.value()).empty());
    CHECK(canonical_key(*m.value()) == canonical_key(*L("rec t . A&{ a . t, b . t }")));

    auto g = G("C->B { a . rec t . C->A:b, d . B->C:a . rec u . C->A { a . B->C:b . u, d . u } }");
    auto a = project(g, "A");
    REQUIRE(a.ok());
    CHECK(free_vars(*a.value()).empty());
}

TEST_CASE("merge is commutative and associative where defined") {
    testing::Rng rng(17);
    int defined = 0;
    for (int i = 0; i < 400; ++i) {
        auto base = testing::random_local(rng, 0, 3, 3, 2, 1);
        auto a = testing::widen(rng, base);
        auto b = testing::widen(rng, base);
        auto c = testing::widen(rng, base);
        auto ab = merge(a, b);
        auto ba = merge(b, a);
        REQUIRE(ab.ok() == ba.ok());
        if (!ab.ok()) continue;
        ++defined;
        CHECK(canonical_key(*ab.value()) == canonical_key(*ba.value()));
        auto left = merge(ab.value(), c);
        auto bc = merge(b, c);
        if (!bc.ok()) {
            CHECK_FALSE(left.ok());
            continue;
        }
        auto right = merge(a, bc.value());
        REQUIRE(right.ok() == left.ok());
        if (left.ok()) CHECK(canonical_key(*left.value()) == canonical_key(*right.value()));
    }
    CHECK(defined > 50);
}
