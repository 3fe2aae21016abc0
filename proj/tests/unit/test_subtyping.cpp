#include <doctest.h>

#include "common.hpp"
#include "generators.hpp"
#include "mpst/projection.hpp"
#include "mpst/subtyping.hpp"

using namespace mpst;
using mpst::test::L;
using mpst::test::load_example;

namespace {

bool sub(const char* a, const char* b) { return subtype(L(a), L(b)); }

}  // namespace

TEST_CASE("basic sorts") {
    CHECK(basic_subtype(BasicSort::Int, BasicSort::Real));
    CHECK_FALSE(basic_subtype(BasicSort::Real, BasicSort::Int));
    CHECK(basic_subtype(BasicSort::Str, BasicSort::Str));
    CHECK_FALSE(subtype(Sort(BasicSort::Int), Sort(L("end"))));
}

TEST_CASE("selection: the subtype may select more") {
    CHECK(sub("q(+){ a, b }", "q(+)a"));
    CHECK_FALSE(sub("q(+)a", "q(+){ a, b }"));
    CHECK(sub("q(+)a(real)", "q(+)a(int)"));
    CHECK_FALSE(sub("q(+)a(int)", "q(+)a(real)"));
    CHECK_FALSE(sub("q(+)a", "r(+)a"));
}

TEST_CASE("branching: the subtype may offer fewer") {
    CHECK(sub("q&a", "q&{ a, b }"));
    CHECK_FALSE(sub("q&{ a, b }", "q&a"));
    CHECK(sub("q&a(int)", "q&a(real)"));
    CHECK_FALSE(sub("q&a(real)", "q&a(int)"));
    CHECK_FALSE(sub("q&a", "q(+)a"));
}

TEST_CASE("continuations and delegated sessions") {
    CHECK(sub("q(+)a . p&b", "q(+)a . p&{ b, c }"));
    CHECK_FALSE(sub("q(+)a . p&{ b, c }", "q(+)a . p&b"));
    CHECK(sub("q&a(<r(+){ x, y }>)", "q&a(<r(+)x>)"));
    CHECK(sub("q(+)a(<r(+)x>)", "q(+)a(<r(+){ x, y }>)"));
}

TEST_CASE("recursion up to unfolding") {
    CHECK(sub("rec t . q(+)a . t", "q(+)a . rec t . q(+)a . t"));
    CHECK(sub("q(+)a . rec t . q(+)a . t", "rec t . q(+)a . t"));
    CHECK(sub("rec t . q(+)a . q(+)a . t", "rec u . q(+)a . u"));
    CHECK(sub("rec t . q(+){ a . t, b }", "rec t . q(+)a . t"));
    CHECK_FALSE(sub("rec t . q(+)a . t", "rec t . q(+){ a . t, b }"));
    CHECK(sub("end", "end"));
    CHECK_FALSE(sub("end", "q(+)a"));
}

TEST_CASE("recursive payloads only relate to themselves") {
    auto f = load_example("counterexamples.mpst");
    const auto& t = f.local("T");
    CHECK(subtype(t, t));
    CHECK(subtype(t, L("rec u . q(+)l(<u>) . end")));
    CHECK_FALSE(subtype(t, L("q(+)l(<rec t . q(+)l(<t>) . end>) . end")));
}

TEST_CASE("end-like sorts") {
    CHECK(is_end_like(Sort(L("end"))));
    CHECK_FALSE(is_end_like(Sort(L("q(+)a"))));
    CHECK_FALSE(is_end_like(Sort(BasicSort::Unit)));
}

TEST_CASE("context subtyping") {
    auto a = parse_context("{ s[p]: q(+){ a, b }, x: int }");
    auto b = parse_context("{ s[p]: q(+)a, x: int }");
    CHECK(context_subtype(a, b));
    CHECK_FALSE(context_subtype(b, a));
    CHECK_FALSE(context_subtype(a, parse_context("{ s[p]: q(+)a }")));
}

TEST_CASE("OAuth entries refine the projections") {
    auto f = load_example("oauth.mpst");
    const auto& ctx = f.context("Gamma_auth");
    CHECK(subtype(f.local("T_s"), ctx.at(Endpoint{"s", "s"}).session()));
    CHECK(subtype(f.local("T_c"), ctx.at(Endpoint{"s", "c"}).session()));
    CHECK(subtype(f.local("T_a"), ctx.at(Endpoint{"s", "a"}).session()));
    CHECK_FALSE(subtype(ctx.at(Endpoint{"s", "c"}).session(), f.local("T_c")));
}

TEST_CASE("reflexivity, transitivity and unfolding on random types") {
    testing::Rng rng(99);
    int chains = 0;
    for (int i = 0; i < 1000; ++i) {
        auto t = testing::random_local(rng, 0, 3, 4, 3, 2);
        CHECK(subtype(t, t));
        auto u = unfold_once(t);
        CHECK(subtype(t, u));
        CHECK(subtype(u, t));

        auto w1 = testing::widen(rng, t);
        auto w2 = testing::widen(rng, w1);
        auto other = testing::random_local(rng, 0, 3, 4, 3, 2);
        for (const auto& [a, b, c] : {std::tuple{t, w1, w2}, std::tuple{t, w1, other}, std::tuple{other, t, w1}}) {
            if (subtype(a, b) && subtype(b, c)) {
                ++chains;
                CHECK(subtype(a, c));
            }
        }
    }
    CHECK(chains >= 1000);
}

TEST_CASE("each member of a mergeable family is below the merge") {
    testing::Rng rng(123);
    std::size_t families = 0;
    for (int i = 0; i < 300; ++i) {
        auto g = testing::random_projectable_global(rng);
        std::vector<std::vector<LocalTypePtr>> fams;
        fams = testing::merge_families(g);
        for (const auto& fam : fams) {
            auto m = merge_all(fam);
            REQUIRE(m.ok());
            ++families;
            for (const auto& t : fam) CHECK(subtype(t, m.value()));
        }
    }
    CHECK(families > 20);
}
