#include "oracles.hpp"

#include <cstdint>
#include <set>
#include <stdexcept>
#include <utility>

#include "mpst/analysis.hpp"
#include "mpst/subtyping.hpp"
#include "mpst/surface.hpp"

namespace mpst::testing {
namespace {

using Pair = std::pair<Role, Role>;

LocalTypePtr head(LocalTypePtr t) {
    for (int guard = 0; t->kind() == LocalType::Kind::Rec; ++guard) {
        if (guard > 64) throw std::runtime_error("unfolding does not reach a choice");
        t = substitute(t->body(), t->rec_var(), t);
    }
    return t;
}

std::vector<std::pair<Role, LocalTypePtr>> endpoints(const TypingContext& ctx, const SessionName& s) {
    std::vector<std::pair<Role, LocalTypePtr>> out;
    for (const auto& [k, v] : ctx) {
        const auto* ep = std::get_if<Endpoint>(&k);
        if (ep && ep->session == s && v.is_session()) out.emplace_back(ep->role, head(v.session()));
    }
    return out;
}

std::set<Pair> obligations(const TypingContext& ctx, const SessionName& s) {
    std::set<Pair> out;
    for (const auto& [r, t] : endpoints(ctx, s)) {
        if (t->kind() == LocalType::Kind::Internal) out.insert({r, t->peer()});
        if (t->kind() == LocalType::Kind::External) out.insert({t->peer(), r});
    }
    return out;
}

Pair pair_of(const TransitionLabel& l) { return {l.from(), l.to()}; }

// Strongly connected on the nodes of `mask` using only edges inside it that
// do not fire `avoid`; also reports the pairs those edges fire.
bool strongly_connected(const StateGraph& g, std::uint32_t mask, const Pair& avoid, std::set<Pair>& fired) {
    const std::size_t n = g.size();
    std::size_t first = n;
    bool any_edge = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mask >> i & 1U)) continue;
        if (first == n) first = i;
        for (const auto& e : g.out[i]) {
            if (!(mask >> e.target & 1U) || pair_of(e.label) == avoid) continue;
            any_edge = true;
            fired.insert(pair_of(e.label));
        }
    }
    if (!any_edge) return false;
    auto reach = [&](bool forward) {
        std::uint32_t seen = 1U << first;
        std::vector<std::size_t> stack{first};
        while (!stack.empty()) {
            auto u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (!(mask >> v & 1U) || (seen >> v & 1U)) continue;
                const auto& edges = forward ? g.out[u] : g.out[v];
                const std::size_t want = forward ? v : u;
                for (const auto& e : edges) {
                    if (e.target == want && pair_of(e.label) != avoid) {
                        seen |= 1U << v;
                        stack.push_back(v);
                        break;
                    }
                }
            }
        }
        return seen == mask;
    };
    return reach(true) && reach(false);
}

bool is_end_type(const LocalTypePtr& t) { return head(t)->is_end(); }

std::string fail_at(const Derivation& d, const std::string& what) { return d.rule + " at " + d.judgment() + ": " + what; }

std::optional<ContextKey> key_of(const Value& v) {
    if (v.is_endpoint()) return ContextKey(v.endpoint());
    if (v.is_var()) return ContextKey(v.var());
    return std::nullopt;
}

bool all_end(const TypingContext& ctx) {
    for (const auto& [k, v] : ctx)
        if (v.is_session() && !is_end_type(v.session())) return false;
    return true;
}

void validate(const Derivation& d, std::vector<std::string>& out);

void expect(bool ok, const Derivation& d, const std::string& what, std::vector<std::string>& out) {
    if (!ok) out.push_back(fail_at(d, what));
}

void check_value(const Derivation& v, const Value& want, std::vector<std::string>& out) {
    expect(v.value && *v.value == want, v, "premise types another value", out);
}

void validate_select(const Derivation& d, std::vector<std::string>& out) {
    const auto before = out.size();
    const auto& p = *d.process;
    expect(p.kind() == Process::Kind::Select && d.premises.size() == 3, d, "shape", out);
    if (out.size() != before) return;
    auto ck = key_of(p.channel());
    const auto& chan = d.premises[0];
    const auto& payload = d.premises[1];
    const auto& cont = d.premises[2];
    expect(chan.rule == "T-sub", d, "channel premise is not T-sub", out);
    check_value(chan, p.channel(), out);
    check_value(payload, p.payload(), out);
    if (!ck || !chan.sort || !chan.sort->is_session()) {
        out.push_back(fail_at(d, "channel premise has no session sort"));
        return;
    }
    auto single = head(chan.sort->session());
    expect(single->kind() == LocalType::Kind::Internal && single->peer() == p.peer() && single->branches().size() == 1 &&
               single->branches()[0].label == p.label(),
           d, "channel sort is not a single selection of the sent label", out);
    if (out.size() != before) return;
    const Sort* have = d.context.find(*ck);
    expect(have && subtype(*have, *chan.sort), d, "channel entry is not a subtype of the selection", out);
    expect(payload.sort && subtype(*payload.sort, single->branches()[0].payload), d, "payload sort mismatch", out);
    TypingContext rest = d.context;
    rest.erase(*ck);
    if (auto dk = key_of(p.payload())) rest.erase(*dk);
    rest.insert(*ck, Sort(single->branches()[0].cont));
    expect(cont.context == rest, d, "continuation context differs", out);
    expect(cont.process && *cont.process == *p.cont(), d, "continuation process differs", out);
}

void validate_branch(const Derivation& d, std::vector<std::string>& out) {
    const auto before = out.size();
    const auto& p = *d.process;
    expect(p.kind() == Process::Kind::Branch && !d.premises.empty(), d, "shape", out);
    if (out.size() != before) return;
    auto ck = key_of(p.channel());
    const auto& chan = d.premises[0];
    if (!ck || !chan.sort || !chan.sort->is_session()) {
        out.push_back(fail_at(d, "channel premise has no session sort"));
        return;
    }
    const Sort* have = d.context.find(*ck);
    expect(have && subtype(*have, *chan.sort), d, "channel entry is not a subtype of the branching", out);
    auto t = head(chan.sort->session());
    expect(t->kind() == LocalType::Kind::External && t->peer() == p.peer(), d, "channel sort is not a branching", out);
    expect(d.premises.size() == t->branches().size() + 1, d, "one premise per branch", out);
    if (out.size() != before) return;
    for (std::size_t i = 0; i < t->branches().size(); ++i) {
        const auto& b = t->branches()[i];
        const auto* arm = p.find_arm(b.label);
        const auto& prem = d.premises[i + 1];
        expect(arm && prem.process && *prem.process == *arm->body, d, "arm " + b.label.str() + " mismatch", out);
        if (!arm) continue;
        TypingContext inner = d.context;
        inner.erase(*ck);
        if (arm->var) inner.insert(*arm->var, b.payload);
        inner.insert(*ck, Sort(b.cont));
        expect(prem.context == inner, d, "arm " + b.label.str() + " context differs", out);
    }
}

void validate_call(const Derivation& d, std::vector<std::string>& out) {
    const auto before = out.size();
    const auto& p = *d.process;
    expect(p.kind() == Process::Kind::Call && d.premises.size() == 2 + p.args().size(), d, "shape", out);
    if (out.size() != before) return;
    const auto& x = d.premises[0];
    auto it = d.theta.find(p.name());
    expect(x.rule == "T-X" && it != d.theta.end() && x.sorts == it->second, d, "T-X premise disagrees with theta", out);
    if (out.size() != before) return;
    TypingContext rest = d.context;
    for (std::size_t i = 0; i < p.args().size(); ++i) {
        const auto& a = d.premises[2 + i];
        check_value(a, p.args()[i], out);
        expect(a.sort && a.sort == std::optional<Sort>(it->second[i]), d, "argument sort differs from parameter", out);
        if (auto k = key_of(p.args()[i])) {
            const Sort* have = rest.find(*k);
            expect(have && subtype(*have, it->second[i]), d, "argument is not a subtype of its parameter", out);
            rest.erase(*k);
        }
    }
    expect(d.premises[1].rule == "T-end" && d.premises[1].context == rest, d, "leftover context differs", out);
}

void validate(const Derivation& d, std::vector<std::string>& out) {
    const auto before = out.size();
    if (d.rule == "T-end") {
        expect(all_end(d.context), d, "context is not end", out);
    } else if (d.rule == "T-0") {
        expect(d.process && d.process->kind() == Process::Kind::Nil, d, "process is not 0", out);
        expect(d.premises.size() == 1 && d.premises[0].rule == "T-end" && d.premises[0].context == d.context, d,
               "missing T-end premise", out);
    } else if (d.rule == "T-par") {
        expect(d.process && d.process->kind() == Process::Kind::Par && d.premises.size() == 2, d, "shape", out);
        if (out.size() == before) {
            const auto& l = d.premises[0];
            const auto& r = d.premises[1];
            bool disjoint = true;
            for (const auto& [k, v] : l.context) disjoint = disjoint && !r.context.contains(k);
            expect(disjoint && TypingContext::compose(l.context, r.context) == d.context, d, "split is not a partition", out);
            expect(l.process && *l.process == *d.process->left() && r.process && *r.process == *d.process->right(), d,
                   "premise processes differ", out);
        }
    } else if (d.rule == "T-(+)") {
        validate_select(d, out);
    } else if (d.rule == "T-&") {
        validate_branch(d, out);
    } else if (d.rule == "T-def") {
        const auto& p = *d.process;
        expect(p.kind() == Process::Kind::Def && d.premises.size() == 2, d, "shape", out);
        if (out.size() == before) {
            TypingContext params;
            std::vector<Sort> sorts;
            for (const auto& prm : p.params()) {
                params.insert(prm.name, prm.sort);
                sorts.push_back(prm.sort);
            }
            auto theta = d.theta;
            theta[p.name()] = sorts;
            expect(d.premises[0].context == params && d.premises[0].theta == theta, d, "body judgment differs", out);
            expect(d.premises[1].context == d.context && d.premises[1].theta == theta, d, "scope judgment differs", out);
        }
    } else if (d.rule == "T-call") {
        validate_call(d, out);
    } else if (d.rule == "T-X") {
        expect(d.proc_var && d.theta.count(*d.proc_var) && d.theta.at(*d.proc_var) == d.sorts, d, "not in theta", out);
    } else if (d.rule == "T-sub") {
        expect(d.context.size() == 1 && d.sort && subtype(d.context.begin()->second, *d.sort), d, "entry is not a subtype", out);
        if (d.value && d.context.size() == 1) expect(key_of(*d.value) == d.context.begin()->first, d, "wrong key", out);
    } else if (d.rule == "T-B") {
        expect(d.value && d.value->is_literal() && d.sort && d.sort->is_basic() &&
                   basic_subtype(sort_of(d.value->literal()), d.sort->basic()),
               d, "literal does not have the sort", out);
    } else if (d.rule == "T-G-nu") {
        const auto& p = *d.process;
        expect(p.kind() == Process::Kind::Res && d.premises.size() == 1, d, "shape", out);
        if (out.size() == before) {
            const auto& body = d.premises[0];
            auto local = body.context.restrict_to(p.session());
            expect(!d.context.has_session(p.session()), d, "session already bound", out);
            expect(TypingContext::compose(d.context, local) == body.context, d, "body context is not an extension", out);
            expect(p.annotation().global && associated(p.annotation().global, local, p.session()), d,
                   "body context is not associated", out);
        }
    } else {
        out.push_back(fail_at(d, "unknown rule"));
    }
    for (const auto& prem : d.premises) validate(prem, out);
}

}  // namespace

bool brute_force_live(const StateGraph& g) {
    const std::size_t n = g.size();
    if (n > 20) throw std::invalid_argument("graph too large for enumeration");
    std::vector<std::set<Pair>> enabled(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& e : g.out[i]) enabled[i].insert(pair_of(e.label));

    for (std::size_t m = 0; m < n; ++m) {
        auto pending = obligations(g.nodes[m], g.session);
        if (pending.empty()) continue;
        if (g.out[m].empty()) return false;
        for (const auto& o : pending) {
            for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
                if (!(mask >> m & 1U)) continue;
                std::set<Pair> fired;
                if (!strongly_connected(g, mask, o, fired)) continue;
                bool fair = true;
                for (std::size_t i = 0; i < n && fair; ++i) {
                    if (!(mask >> i & 1U)) continue;
                    for (const auto& p : enabled[i]) fair = fair && fired.count(p) != 0;
                }
                if (fair) return false;
            }
        }
    }
    return true;
}

bool clause_safe(const StateGraph& g) {
    for (const auto& node : g.nodes) {
        auto eps = endpoints(node, g.session);
        for (const auto& [p, tp] : eps) {
            if (tp->kind() != LocalType::Kind::Internal) continue;
            for (const auto& [q, tq] : eps) {
                if (q != tp->peer() || tq->kind() != LocalType::Kind::External || tq->peer() != p) continue;
                for (const auto& b : tp->branches()) {
                    const auto* c = tq->find_branch(b.label);
                    if (!c || !subtype(b.payload, c->payload)) return false;
                }
            }
        }
    }
    return true;
}

bool clause_deadlock_free(const StateGraph& g) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!g.out[i].empty()) continue;
        for (const auto& [r, t] : endpoints(g.nodes[i], g.session))
            if (!t->is_end()) return false;
    }
    return true;
}

std::vector<std::string> validate_derivation(const Derivation& d) {
    std::vector<std::string> out;
    validate(d, out);
    return out;
}

}  // namespace mpst::testing
