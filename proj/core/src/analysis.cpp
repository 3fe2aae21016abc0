#include "mpst/analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "mpst/subtyping.hpp"

namespace mpst {

// ---------------------------------------------------------------------------
// Association

AssociationReport check_association(const GlobalTypePtr& g, const TypingContext& ctx, const SessionName& s) {
    AssociationReport rep;
    rep.holds = true;
    auto fail = [&](std::string why) {
        if (rep.holds) rep.failure = std::move(why);
        rep.holds = false;
    };
    const auto roles = roles_of(*g);
    for (const auto& r : roles) {
        AssociationReport::RoleResult rr;
        rr.role = r;
        auto proj = project(g, r);
        if (proj) rr.projection = proj.value();
        else rr.projection_failure = proj.error();
        if (const Sort* e = ctx.find(Endpoint{s, r})) rr.entry = *e;
        if (!rr.projection) fail("projection undefined: " + describe(*rr.projection_failure));
        else if (!rr.entry) fail("no entry for " + s.str() + "[" + r.str() + "]");
        else {
            rr.subtype_holds = subtype(Sort(*rr.projection), *rr.entry);
            if (!rr.subtype_holds) fail("projection onto " + r.str() + " is not a subtype of the entry");
        }
        rep.roles.push_back(std::move(rr));
    }
    for (const auto& [k, v] : ctx) {
        const auto* ep = std::get_if<Endpoint>(&k);
        if (ep && ep->session == s && roles.count(ep->role)) continue;
        rep.end_part.push_back(k);
        if (!ep || ep->session != s) fail("entry " + to_string(k) + " is not an endpoint of " + s.str());
        else if (!v.is_session() || !v.session()->is_end()) fail("leftover entry " + to_string(k) + " is not end");
    }
    return rep;
}

bool associated(const GlobalTypePtr& g, const TypingContext& ctx, const SessionName& s) {
    return check_association(g, ctx, s).holds;
}

TypingContext projected_context(const GlobalType& g, const SessionName& s) {
    auto all = project_all(g);
    if (!all) throw IllFormed("global type is not projectable: " + describe(all.error().front()));
    TypingContext ctx;
    for (const auto& [r, t] : all.value()) ctx.insert(Endpoint{s, r}, Sort(t));
    return ctx;
}

// ---------------------------------------------------------------------------
// Properties

std::string_view to_string(Property p) noexcept {
    switch (p) {
    case Property::Safe: return "Safe";
    case Property::DeadlockFree: return "DeadlockFree";
    case Property::Live: return "Live";
    }
    return "?";
}

std::pair<Role, Role> obligation_pair(const TransitionLabel& l) {
    if (l.kind == TransitionLabel::Kind::Input) return {l.peer, l.subject};
    return {l.subject, l.peer};
}

namespace {

PropertyVerdict violation(Property p, const StateGraph& graph, std::size_t node, std::string reason) {
    PropertyVerdict v;
    v.property = p;
    v.holds = false;
    v.node = node;
    v.trace = graph.trace_to(node);
    v.reason = std::move(reason);
    return v;
}

PropertyVerdict holds(Property p) {
    PropertyVerdict v;
    v.property = p;
    v.holds = true;
    return v;
}

struct Head {
    Role role;
    LocalTypePtr type;  // unfolded
};

std::map<Role, LocalTypePtr> unfolded_heads(const TypingContext& ctx, const SessionName& s) {
    std::map<Role, LocalTypePtr> out;
    for (const auto& [k, v] : ctx) {
        const auto* ep = std::get_if<Endpoint>(&k);
        if (ep && ep->session == s && v.is_session()) out.emplace(ep->role, unfold_once(v.session()));
    }
    return out;
}

using Pair = std::pair<Role, Role>;

/// Iterative Tarjan restricted to `alive` nodes and edges accepted by `keep`.
std::vector<std::vector<std::size_t>> sccs(const StateGraph& g, const std::vector<bool>& alive,
                                           const std::function<bool(const StateGraph::Edge&)>& keep) {
    const std::size_t n = g.size();
    constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, kUnset);
    std::vector<std::size_t> low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> out;
    std::size_t counter = 0;
    struct Frame {
        std::size_t v;
        std::size_t next;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (!alive[root] || index[root] != kUnset) continue;
        std::vector<Frame> call{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            Frame& f = call.back();
            const auto& edges = g.out[f.v];
            if (f.next < edges.size()) {
                const auto& e = edges[f.next++];
                if (!alive[e.target] || !keep(e)) continue;
                if (index[e.target] == kUnset) {
                    index[e.target] = low[e.target] = counter++;
                    stack.push_back(e.target);
                    on_stack[e.target] = true;
                    call.push_back(Frame{e.target, 0});
                } else if (on_stack[e.target]) {
                    low[f.v] = std::min(low[f.v], index[e.target]);
                }
                continue;
            }
            const std::size_t v = f.v;
            call.pop_back();
            if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
            if (low[v] == index[v]) {
                std::vector<std::size_t> comp;
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp.push_back(w);
                } while (w != v);
                std::sort(comp.begin(), comp.end());
                out.push_back(std::move(comp));
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Pair edge_pair(const StateGraph::Edge& e) { return {e.label.subject, e.label.peer}; }

/// Searches `region` for a strongly connected node set with an internal edge
/// in which every pair enabled (in the full graph) at one of its nodes labels
/// one of its internal edges.
std::optional<std::vector<std::size_t>> fair_component(const StateGraph& g, std::vector<bool> region,
                                                       const std::function<bool(const StateGraph::Edge&)>& keep,
                                                       std::vector<bool>* all = nullptr) {
    auto first = sccs(g, region, keep);
    std::deque<std::vector<std::size_t>> work(first.begin(), first.end());
    std::vector<bool> in(g.size(), false);
    while (!work.empty()) {
        auto comp = std::move(work.front());
        work.pop_front();
        for (auto v : comp) in[v] = true;
        std::set<Pair> taken;
        bool has_edge = false;
        for (auto v : comp)
            for (const auto& e : g.out[v])
                if (in[e.target] && keep(e)) {
                    taken.insert(edge_pair(e));
                    has_edge = true;
                }
        std::vector<bool> keep_node;
        if (has_edge) keep_node = in;
        for (auto v : comp) in[v] = false;
        if (!has_edge) continue;
        bool removed = false;
        for (auto v : comp)
            for (const auto& e : g.out[v])
                if (!taken.count(edge_pair(e))) {
                    keep_node[v] = false;
                    removed = true;
                    break;
                }
        if (!removed) {
            if (!all) return comp;
            for (auto v : comp) (*all)[v] = true;
            continue;
        }
        auto sub = sccs(g, keep_node, keep);
        work.insert(work.begin(), sub.begin(), sub.end());
    }
    return std::nullopt;
}

/// Nodes from which a fair component avoiding `keep`-rejected edges is reachable.
std::vector<bool> reaching_fair(const StateGraph& g, const std::function<bool(const StateGraph::Edge&)>& keep) {
    std::vector<bool> fair(g.size(), false);
    fair_component(g, std::vector<bool>(g.size(), true), keep, &fair);
    std::vector<std::vector<std::size_t>> in(g.size());
    for (std::size_t v = 0; v < g.size(); ++v)
        for (const auto& e : g.out[v])
            if (keep(e)) in[e.target].push_back(v);
    std::deque<std::size_t> q;
    for (std::size_t v = 0; v < g.size(); ++v)
        if (fair[v]) q.push_back(v);
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        for (auto u : in[v])
            if (!fair[u]) {
                fair[u] = true;
                q.push_back(u);
            }
    }
    return fair;
}

std::vector<bool> reachable_from(const StateGraph& g, std::size_t start,
                                 const std::function<bool(const StateGraph::Edge&)>& keep) {
    std::vector<bool> seen(g.size(), false);
    std::deque<std::size_t> q{start};
    seen[start] = true;
    while (!q.empty()) {
        auto v = q.front();
        q.pop_front();
        for (const auto& e : g.out[v])
            if (keep(e) && !seen[e.target]) {
                seen[e.target] = true;
                q.push_back(e.target);
            }
    }
    return seen;
}

}  // namespace

PropertyVerdict check_safety(const StateGraph& graph) {
    for (std::size_t n = 0; n < graph.size(); ++n) {
        auto heads = unfolded_heads(graph.nodes[n], graph.session);
        for (const auto& [p, t] : heads) {
            if (t->kind() != LocalType::Kind::Internal) continue;
            auto it = heads.find(t->peer());
            if (it == heads.end()) continue;
            const auto& u = it->second;
            if (u->kind() != LocalType::Kind::External || u->peer() != p) continue;
            for (const auto& b : t->branches()) {
                const auto* in = u->find_branch(b.label);
                std::string why;
                if (!in) why = "label " + b.label.str() + " sent by " + p.str() + " is not accepted by " + t->peer().str();
                else if (!subtype(b.payload, in->payload)) why = "payload of " + b.label.str() + " is not a subtype of the expected payload";
                if (why.empty()) continue;
                auto v = violation(Property::Safe, graph, n, std::move(why));
                v.pending = TransitionLabel::output(graph.session, p, t->peer(), b.label, b.payload);
                return v;
            }
        }
    }
    return holds(Property::Safe);
}

PropertyVerdict check_deadlock_free(const StateGraph& graph) {
    for (std::size_t n = 0; n < graph.size(); ++n) {
        if (!graph.out[n].empty()) continue;
        for (const auto& [k, v] : graph.nodes[n]) {
            const auto* ep = std::get_if<Endpoint>(&k);
            if (!ep || ep->session != graph.session) continue;
            if (!v.is_session() || !v.session()->is_end())
                return violation(Property::DeadlockFree, graph, n, "stuck with " + to_string(k) + " not terminated");
        }
    }
    return holds(Property::DeadlockFree);
}

PropertyVerdict check_live(const StateGraph& graph) {
    std::vector<std::vector<TransitionLabel>> pending(graph.size());
    for (std::size_t n = 0; n < graph.size(); ++n)
        for (auto& st : context_half_steps(graph.nodes[n], graph.session)) pending[n].push_back(st.label);

    for (std::size_t n = 0; n < graph.size(); ++n) {
        if (graph.out[n].empty() && !pending[n].empty()) {
            auto v = violation(Property::Live, graph, n, "stuck with a pending action");
            v.pending = pending[n].front();
            return v;
        }
    }
    std::map<Pair, std::vector<bool>> doomed;
    for (std::size_t n = 0; n < graph.size(); ++n)
        for (const auto& half : pending[n]) {
            const Pair o = obligation_pair(half);
            if (!doomed.count(o))
                doomed.emplace(o, reaching_fair(graph, [&o](const StateGraph::Edge& e) { return edge_pair(e) != o; }));
        }
    for (std::size_t n = 0; n < graph.size(); ++n) {
        std::set<Pair> done;
        for (const auto& half : pending[n]) {
            const Pair o = obligation_pair(half);
            if (!done.insert(o).second) continue;
            if (!doomed.at(o)[n]) continue;
            auto keep = [&o](const StateGraph::Edge& e) { return edge_pair(e) != o; };
            auto region = reachable_from(graph, n, keep);
            auto comp = fair_component(graph, region, keep);
            if (!comp) continue;
            auto v = violation(Property::Live, graph, n,
                               "fair cycle never lets " + o.first.str() + " and " + o.second.str() + " interact");
            v.pending = half;
            std::vector<bool> in(graph.size(), false);
            for (auto c : *comp) in[c] = true;
            for (auto c : *comp)
                for (const auto& e : graph.out[c])
                    if (in[e.target] && keep(e)) v.cycle.push_back(PropertyVerdict::CycleEdge{c, e.label, e.target});
            return v;
        }
    }
    return holds(Property::Live);
}

PropertyVerdict check_safety(const TypingContext& ctx, const SessionName& s, std::size_t limit) {
    return check_safety(reachable_contexts(ctx, s, limit));
}

PropertyVerdict check_deadlock_free(const TypingContext& ctx, const SessionName& s, std::size_t limit) {
    return check_deadlock_free(reachable_contexts(ctx, s, limit));
}

PropertyVerdict check_live(const TypingContext& ctx, const SessionName& s, std::size_t limit) {
    return check_live(reachable_contexts(ctx, s, limit));
}

// ---------------------------------------------------------------------------
// Correspondence harnesses

namespace {

struct JointState {
    GlobalTypePtr g;
    TypingContext ctx;
    std::vector<TransitionLabel> trace;
};

template <typename Visit>
std::vector<CorrespondenceViolation> explore_joint(const GlobalTypePtr& g, const TypingContext& ctx,
                                                   const SessionName& s, std::size_t depth, Visit visit) {
    std::vector<CorrespondenceViolation> out;
    std::set<std::pair<CanonicalKey, std::string>> seen;
    std::deque<JointState> frontier{JointState{g, ctx, {}}};
    seen.emplace(canonical_key(*g), state_key(ctx));
    while (!frontier.empty()) {
        JointState cur = std::move(frontier.front());
        frontier.pop_front();
        std::vector<JointState> next;
        visit(cur, out, next);
        if (cur.trace.size() >= depth) continue;
        for (auto& n : next)
            if (seen.emplace(canonical_key(*n.g), state_key(n.ctx)).second) frontier.push_back(std::move(n));
    }
    (void)s;
    return out;
}

}  // namespace

std::vector<CorrespondenceViolation> check_soundness_correspondence(const GlobalTypePtr& g, const TypingContext& ctx,
                                                                    const SessionName& s, std::size_t depth) {
    return explore_joint(g, ctx, s, depth, [&](const JointState& cur, auto& out, auto& next) {
        auto gsteps = global_steps(cur.g, s);
        auto csteps = context_transmissions(cur.ctx, s);
        for (const auto& gs : gsteps) {
            bool matched = false;
            for (const auto& gs2 : gsteps) {
                if (gs2.label.subject != gs.label.subject || gs2.label.peer != gs.label.peer) continue;
                for (const auto& cs : csteps) {
                    if (!(cs.label == gs2.label) || !associated(gs2.target, cs.target, s)) continue;
                    matched = true;
                    auto trace = cur.trace;
                    trace.push_back(cs.label);
                    next.push_back(JointState{gs2.target, cs.target, std::move(trace)});
                }
            }
            if (!matched)
                out.push_back(CorrespondenceViolation{cur.trace, gs.label, "no matching context transmission"});
        }
    });
}

std::vector<CorrespondenceViolation> check_completeness_correspondence(const GlobalTypePtr& g,
                                                                       const TypingContext& ctx,
                                                                       const SessionName& s, std::size_t depth) {
    return explore_joint(g, ctx, s, depth, [&](const JointState& cur, auto& out, auto& next) {
        auto gsteps = global_steps(cur.g, s);
        for (const auto& cs : context_transmissions(cur.ctx, s)) {
            bool matched = false;
            for (const auto& gs : gsteps) {
                if (!(gs.label == cs.label) || !associated(gs.target, cs.target, s)) continue;
                matched = true;
                auto trace = cur.trace;
                trace.push_back(cs.label);
                next.push_back(JointState{gs.target, cs.target, std::move(trace)});
            }
            if (!matched)
                out.push_back(CorrespondenceViolation{cur.trace, cs.label, "no matching global step"});
        }
    });
}

AllPropertiesReport check_all_by_association(const GlobalTypePtr& g, const SessionName& s, std::size_t limit) {
    AllPropertiesReport rep;
    auto all = project_all(*g);
    TypingContext ctx;
    if (all)
        for (const auto& [r, t] : all.value()) ctx.insert(Endpoint{s, r}, Sort(t));
    rep.association = check_association(g, ctx, s);
    auto graph = reachable_contexts(ctx, s, limit);
    rep.safe = check_safety(graph);
    rep.deadlock_free = check_deadlock_free(graph);
    rep.live = check_live(graph);
    return rep;
}

}  // namespace mpst
