#include <doctest.h>

#include <algorithm>

#include "common.hpp"
#include "mpst/types.hpp"

using namespace mpst;
using mpst::test::G;
using mpst::test::L;

namespace {

bool has_kind(const std::vector<Diagnostic>& ds, Diagnostic::Kind k) {
    return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.kind == k; });
}

}  // namespace

TEST_CASE("factories and accessors") {
    auto t = LocalType::internal("q", {{"l", Sort(BasicSort::Int), LocalType::end()}});
    CHECK(t->kind() == LocalType::Kind::Internal);
    CHECK(t->is_choice());
    CHECK(t->peer() == Role("q"));
    REQUIRE(t->find_branch("l"));
    CHECK(t->find_branch("l")->payload == Sort(BasicSort::Int));
    CHECK(t->find_branch("m") == nullptr);

    auto g = GlobalType::transmission("p", "q", {{"l", Sort(BasicSort::Bool), GlobalType::end()}});
    CHECK(g->from() == Role("p"));
    CHECK(g->to() == Role("q"));
    CHECK(roles_of(*g) == std::set<Role>{"p", "q"});
}

TEST_CASE("basic sort names") {
    for (auto b : {BasicSort::Int, BasicSort::Bool, BasicSort::Real, BasicSort::Str, BasicSort::Unit})
        CHECK(parse_basic_sort(to_string(b)) == b);
    CHECK_FALSE(parse_basic_sort("float"));
}

TEST_CASE("structural equality sees binder names") {
    CHECK(*L("rec t . q(+)l . t") == *L("rec t . q(+)l . t"));
    CHECK_FALSE(*L("rec t . q(+)l . t") == *L("rec u . q(+)l . u"));
    CHECK_FALSE(*L("q(+)l(int)") == *L("q(+)l(real)"));
    CHECK_FALSE(*L("q(+)l") == *L("q&l"));
}

TEST_CASE("free variables") {
    CHECK(free_vars(*L("rec t . q(+)l . t")).empty());
    CHECK(free_vars(*L("q(+)l . t")) == std::set<RecVar>{"t"});
    CHECK(free_vars(*G("rec t . p->q:l . t")).empty());
}

TEST_CASE("substitution respects shadowing") {
    auto body = L("q(+){ a . t, b . rec t . p&c . t }");
    auto r = substitute(body, "t", LocalType::end());
    CHECK(*r == *L("q(+){ a . end, b . rec t . p&c . t }"));
}

TEST_CASE("unfolding") {
    auto t = L("rec t . q(+)l . t");
    auto u = unfold_once(t);
    CHECK(u->kind() == LocalType::Kind::Internal);
    CHECK(*u->branches()[0].cont == *t);
    CHECK(*unfold_once(L("end")) == *LocalType::end());

    auto g = unfold_once(G("rec t . p->q:l . t"));
    CHECK(g->kind() == GlobalType::Kind::Transmission);

    CHECK_THROWS_AS(unfold_once(LocalType::var("t")), IllFormed);
    CHECK_THROWS_AS(unfold_once(LocalType::rec("t", LocalType::var("t"))), IllFormed);
}

TEST_CASE("contractivity") {
    CHECK(is_contractive(*L("rec t . q(+)l . t")));
    CHECK(is_contractive(*L("rec t . rec u . q(+){ a . t, b . u }")));
    CHECK_FALSE(is_contractive(*LocalType::rec("t", LocalType::var("t"))));
    CHECK_FALSE(is_contractive(*GlobalType::rec("t", GlobalType::var("t"))));
}

TEST_CASE("recursive payloads") {
    CHECK(has_recursive_payload(*L("rec t . q(+)l(<t>) . end")));
    CHECK_FALSE(has_recursive_payload(*L("q(+)l(<rec t . p&m . t>) . end")));
    CHECK_FALSE(has_recursive_payload(*L("rec t . q(+)l . t")));
}

TEST_CASE("well-formedness diagnostics") {
    CHECK(well_formed(*L("q(+){ a, b . p&c }")).empty());
    CHECK(has_kind(well_formed(*L("q(+)l . t")), Diagnostic::Kind::OpenType));
    CHECK(has_kind(well_formed(*LocalType::rec("t", LocalType::var("t"))), Diagnostic::Kind::NonContractive));
    CHECK(has_kind(well_formed(*LocalType::internal("q", {{"a", Sort(BasicSort::Int), LocalType::end()},
                                                           {"a", Sort(BasicSort::Int), LocalType::end()}})),
                   Diagnostic::Kind::DuplicateLabel));
    CHECK(has_kind(well_formed(*GlobalType::transmission("p", "p", {{"a", Sort(BasicSort::Int), GlobalType::end()}})),
                   Diagnostic::Kind::SelfReception));
    CHECK(has_kind(well_formed(*L("rec t . q(+)l(<t>) . end")), Diagnostic::Kind::OpenPayload));

    auto ds = well_formed(*L("q(+){ a . p&{ b . r(+){ c, c } } }"));
    REQUIRE(ds.size() == 1);
    CHECK(ds[0].path == std::vector<std::string>{"a", "b"});
}

TEST_CASE("canonical keys identify alpha-variants") {
    CHECK(canonical_key(*L("rec t . q(+){ a . t, b }")) == canonical_key(*L("rec u . q(+){ b, a . u }")));
    CHECK_FALSE(canonical_key(*L("rec t . q(+)a . t")) == canonical_key(*L("rec t . q&a . t")));
    CHECK(canonical_key(*G("rec t . p->q { a . t, b }")) == canonical_key(*G("rec x . p->q { b, a . x }")));
    CHECK(alpha_equal(Sort(L("rec t . q(+)a . t")), Sort(L("rec v . q(+)a . v"))));
    CHECK_FALSE(alpha_equal(Sort(BasicSort::Int), Sort(BasicSort::Real)));

    auto nested_a = L("rec t . rec u . q(+){ a . t, b . u }");
    auto nested_b = L("rec t . rec u . q(+){ a . u, b . t }");
    CHECK_FALSE(canonical_key(*nested_a) == canonical_key(*nested_b));
}

TEST_CASE("typing contexts") {
    TypingContext ctx{{Endpoint{"s", "p"}, Sort(L("q(+)l"))}, {VarName("x"), Sort(BasicSort::Int)}};
    CHECK(ctx.size() == 2);
    CHECK(ctx.contains(Endpoint{"s", "p"}));
    CHECK(ctx.find(VarName("y")) == nullptr);
    CHECK_THROWS_AS(ctx.insert(VarName("x"), Sort(BasicSort::Bool)), std::invalid_argument);
    ctx.assign(VarName("x"), Sort(BasicSort::Bool));
    CHECK(ctx.at(VarName("x")) == Sort(BasicSort::Bool));

    TypingContext other{{Endpoint{"r", "p"}, Sort(LocalType::end())}};
    auto both = TypingContext::compose(ctx, other);
    CHECK(both.size() == 3);
    CHECK(both.sessions() == std::set<SessionName>{"r", "s"});
    CHECK(both.restrict_to("r") == other);
    CHECK_THROWS(TypingContext::compose(ctx, ctx));
    CHECK(to_string(ContextKey(Endpoint{"s", "p"})) == "s[p]");
}

TEST_CASE("transition labels") {
    auto t = TransitionLabel::transmission("s", "p", "q", "l");
    CHECK(t.subjects() == std::set<Role>{"p", "q"});
    auto o = TransitionLabel::output("s", "p", "q", "l", Sort(BasicSort::Int));
    CHECK(o.subjects() == std::set<Role>{"p"});
    CHECK_FALSE(t == o);
    CHECK((t < o) != (o < t));
}
