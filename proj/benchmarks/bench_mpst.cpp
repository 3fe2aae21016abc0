#include <benchmark/benchmark.h>

#include <string>

#include "mpst/analysis.hpp"
#include "mpst/lts.hpp"
#include "mpst/projection.hpp"
#include "mpst/subtyping.hpp"
#include "mpst/surface.hpp"
#include "mpst/typing.hpp"

using namespace mpst;

namespace {

// rec t . r0->r1 { a . r1->r2:a ... t, b . r1->r2:b ... end }
std::string ring(int n) {
    std::string fwd_a, fwd_b;
    for (int i = 1; i + 1 < n; ++i) {
        auto hop = "r" + std::to_string(i) + "->r" + std::to_string(i + 1);
        fwd_a += hop + ":a(int) . ";
        fwd_b += hop + ":b . ";
    }
    return "rec t . r0->r1 { a(int) . " + fwd_a + "t, b . " + fwd_b + "end }";
}

// k independent pairs; the reachable graph has 2^k nodes.
std::string pairs(int k) {
    std::string out = "{ ";
    for (int i = 0; i < k; ++i) {
        auto p = "p" + std::to_string(i), q = "q" + std::to_string(i);
        if (i) out += ", ";
        out += "s[" + p + "]: " + q + "(+){ a . " + q + "&b, c }, s[" + q + "]: " + p + "&{ a . " + p + "(+)b, c }";
    }
    return out + " }";
}

void BM_project_ring(benchmark::State& st) {
    auto g = parse_global(ring(int(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(project_all(*g));
}
BENCHMARK(BM_project_ring)->RangeMultiplier(2)->Range(4, 32);

void BM_subtype_unfolded(benchmark::State& st) {
    auto g = parse_global(ring(int(st.range(0))));
    auto t = project(g, "r1").value();
    auto u = unfold_once(unfold_once(t));
    for (auto _ : st) benchmark::DoNotOptimize(subtype(t, u));
}
BENCHMARK(BM_subtype_unfolded)->RangeMultiplier(2)->Range(4, 32);

void BM_reachable_pairs(benchmark::State& st) {
    auto ctx = parse_context(pairs(int(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(reachable_contexts(ctx, "s", 100000));
}
BENCHMARK(BM_reachable_pairs)->DenseRange(2, 7, 1);

void BM_properties_pairs(benchmark::State& st) {
    auto g = reachable_contexts(parse_context(pairs(int(st.range(0)))), "s", 100000);
    for (auto _ : st) {
        benchmark::DoNotOptimize(check_safety(g));
        benchmark::DoNotOptimize(check_deadlock_free(g));
        benchmark::DoNotOptimize(check_live(g));
    }
    st.counters["nodes"] = double(g.size());
}
BENCHMARK(BM_properties_pairs)->DenseRange(2, 7, 1);

void BM_verify_ring(benchmark::State& st) {
    auto g = parse_global(ring(int(st.range(0))));
    for (auto _ : st) benchmark::DoNotOptimize(check_all_by_association(g, "s"));
}
BENCHMARK(BM_verify_ring)->DenseRange(4, 12, 4);

void BM_typecheck_oauth(benchmark::State& st) {
    auto p = parse_process(
        "new s : s->c { login . c->a:passwd(str) . a->s:auth(bool), cancel . c->a:quit } in "
        "s[s][c](+)cancel | s[c][s]&{ login . s[c][a](+)passwd<\"XYZ\">, cancel . s[c][a](+)quit } | "
        "s[a][c]&{ passwd(y) . s[a][s](+)auth<true>, quit }");
    for (auto _ : st) benchmark::DoNotOptimize(typecheck({}, {}, p));
}
BENCHMARK(BM_typecheck_oauth);

}  // namespace

BENCHMARK_MAIN();
