#include <doctest.h>

#include <map>

#include "common.hpp"
#include "generators.hpp"
#include "mpst/analysis.hpp"
#include "mpst/lts.hpp"

using namespace mpst;
using mpst::test::G;
using mpst::test::L;
using mpst::test::load_example;

namespace {

std::vector<std::string> labels(const std::vector<GlobalStep>& steps) {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(format_label(s.label));
    return out;
}

std::vector<std::string> labels(const std::vector<ContextStep>& steps) {
    std::vector<std::string> out;
    for (const auto& s : steps) out.push_back(format_label(s.label));
    return out;
}

}  // namespace

TEST_CASE("global steps") {
    auto f = load_example("oauth.mpst");
    auto steps = global_steps(f.global("G_auth"));
    CHECK(labels(steps) == std::vector<std::string>{"s:s->c:login", "s:s->c:cancel"});

    auto g = G("p->q:a . r->s:b");
    auto s = global_steps(g);
    REQUIRE(s.size() == 2);
    CHECK(format_label(s[1].label) == "s:r->s:b");
    CHECK(*s[1].target == *G("p->q:a"));

    CHECK(global_steps(G("end")).empty());
    CHECK(global_steps(G("rec t . p->q:a . t")).size() == 1);
    CHECK(format_label(global_steps(G("p->q:a"), "k")[0].label) == "k:p->q:a");
}

TEST_CASE("global steps do not commute past their own roles") {
    CHECK(global_steps(G("p->q:a . q->r:b")).size() == 1);
    CHECK(global_steps(G("p->q:a . r->p:b")).size() == 1);
    CHECK(global_steps(G("p->q { a . r->s:c, b . r->s:c }")).size() == 3);
    CHECK(global_steps(G("p->q { a . r->s:c, b . r->s:d }")).size() == 2);
}

TEST_CASE("context half steps and transmissions") {
    auto ctx = parse_context("{ s[p]: q(+){ a(int), b }, s[q]: p&{ a(real), c }, k[r]: p(+)z }");
    auto halves = labels(context_half_steps(ctx, "s"));
    CHECK(halves == std::vector<std::string>{"s:p!q:a(int)", "s:p!q:b(unit)", "s:q?p:a(real)", "s:q?p:c(unit)"});
    auto tx = context_transmissions(ctx, "s");
    REQUIRE(tx.size() == 1);
    CHECK(format_label(tx[0].label) == "s:p->q:a");
    CHECK(*tx[0].target.at(Endpoint{"s", "p"}).session() == *LocalType::end());
    CHECK(tx[0].target.contains(Endpoint{"k", "r"}));

    auto mismatch = parse_context("{ s[p]: q(+)a(real), s[q]: p&a(int) }");
    CHECK(context_transmissions(mismatch, "s").empty());
}

TEST_CASE("two-step chain of the OAuth context") {
    auto f = load_example("oauth.mpst");
    const auto& ctx = f.context("Gamma_auth");
    auto first = context_transmissions(ctx, "s");
    REQUIRE(labels(first) == std::vector<std::string>{"s:s->c:cancel"});
    const auto& mid = first[0].target;
    CHECK(*mid.at(Endpoint{"s", "s"}).session() == *L("end"));
    CHECK(*mid.at(Endpoint{"s", "c"}).session() == *L("a(+)quit"));
    CHECK(*mid.at(Endpoint{"s", "a"}).session() == *ctx.at(Endpoint{"s", "a"}).session());

    auto second = context_transmissions(mid, "s");
    REQUIRE(labels(second) == std::vector<std::string>{"s:c->a:quit"});
    for (const auto& [k, v] : second[0].target) CHECK(v.session()->is_end());
    CHECK(context_transmissions(second[0].target, "s").empty());
}

TEST_CASE("apply_transmission") {
    auto ctx = parse_context("{ s[p]: q(+)a, s[q]: p&a }");
    CHECK(apply_transmission(ctx, parse_label("s:p->q:a")));
    CHECK_FALSE(apply_transmission(ctx, parse_label("s:p->q:b")));
    CHECK_FALSE(apply_transmission(ctx, parse_label("s:q->p:a")));
}

TEST_CASE("reachable contexts") {
    auto f = load_example("oauth.mpst");
    auto g = reachable_contexts(f.context("Gamma_auth"), "s");
    CHECK(g.size() == 3);
    CHECK(g.out[0].size() == 1);
    auto trace = g.trace_to(2);
    REQUIRE(trace.size() == 2);
    CHECK(format_label(trace[0]) == "s:s->c:cancel");
    CHECK(format_label(trace[1]) == "s:c->a:quit");

    auto loop = reachable_contexts(parse_context("{ s[p]: rec t . q(+)a . t, s[q]: rec u . p&a . u }"), "s");
    CHECK(loop.size() == 1);
    REQUIRE(loop.out[0].size() == 1);
    CHECK(loop.out[0][0].target == 0);
}

TEST_CASE("exploration limit") {
    auto ctx = parse_context("{ s[p]: rec t . q(+){ a . t, b . q(+)a . t }, s[q]: rec t . p&{ a . t, b . t } }");
    CHECK_NOTHROW(reachable_contexts(ctx, "s", 10));
    auto big = parse_context(
        "{ s[p]: q(+)a . q(+)a . q(+)a, s[q]: p&a . p&a . p&a, s[r]: u(+)a . u(+)a . u(+)a, s[u]: r&a . r&a . r&a }");
    CHECK(reachable_contexts(big, "s").size() == 16);
    CHECK_THROWS_AS(reachable_contexts(big, "s", 5), LimitExceeded);
}

TEST_CASE("state keys ignore binder names") {
    auto a = parse_context("{ s[p]: rec t . q(+)a . t }");
    auto b = parse_context("{ s[p]: rec u . q(+)a . u }");
    CHECK(state_key(a) == state_key(b));
    CHECK_FALSE(state_key(a) == state_key(parse_context("{ s[p]: rec u . q&a . u }")));
}

TEST_CASE("context reduction is deterministic on generated graphs") {
    testing::Rng rng(8);
    std::size_t edges = 0;
    for (int i = 0; i < 300; ++i) {
        auto ctx = i % 2 ? testing::random_context(rng) : testing::associated_context(rng, testing::random_projectable_global(rng), true);
        auto g = reachable_contexts(ctx, "s", 2000);
        for (std::size_t n = 0; n < g.size(); ++n) {
            std::map<std::string, std::size_t> by_label;
            for (const auto& e : g.out[n]) {
                ++edges;
                auto [it, fresh] = by_label.emplace(format_label(e.label), e.target);
                CHECK((fresh || it->second == e.target));
                auto again = apply_transmission(g.nodes[n], e.label);
                REQUIRE(again);
                CHECK(state_key(*again) == state_key(g.nodes[e.target]));
            }
        }
    }
    CHECK(edges > 500);
}
