#include "mpst/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "mpst/subtyping.hpp"

namespace mpst {

namespace {

struct GlobalStepper {
    const SessionName& session;

    std::vector<GlobalStep> run(const GlobalTypePtr& g, std::set<CanonicalKey>& on_path) {
        switch (g->kind()) {
        case GlobalType::Kind::End: return {};
        case GlobalType::Kind::Var: throw IllFormed("steps of open global type: free variable " + g->rec_var().str());
        case GlobalType::Kind::Rec: {
            auto key = canonical_key(*g);
            if (on_path.count(key)) return {};
            on_path.insert(key);
            auto out = run(unfold_once(g), on_path);
            on_path.erase(key);
            return out;
        }
        case GlobalType::Kind::Transmission: break;
        }
        std::vector<GlobalStep> out;
        for (const auto& b : g->branches())
            out.push_back(GlobalStep{TransitionLabel::transmission(session, g->from(), g->to(), b.label), b.cont});

        std::vector<std::vector<GlobalStep>> per_branch;
        for (const auto& b : g->branches()) per_branch.push_back(run(b.cont, on_path));

        std::vector<TransitionLabel> candidates;
        for (const auto& st : per_branch.front()) {
            if (st.label.subject == g->from() || st.label.subject == g->to() || st.label.peer == g->from() ||
                st.label.peer == g->to())
                continue;
            if (std::find(candidates.begin(), candidates.end(), st.label) == candidates.end())
                candidates.push_back(st.label);
        }
        for (const auto& lab : candidates) {
            std::vector<std::vector<GlobalTypePtr>> choices;
            bool everywhere = true;
            for (const auto& steps : per_branch) {
                std::vector<GlobalTypePtr> targets;
                for (const auto& st : steps)
                    if (st.label == lab) targets.push_back(st.target);
                if (targets.empty()) {
                    everywhere = false;
                    break;
                }
                choices.push_back(std::move(targets));
            }
            if (!everywhere) continue;
            std::vector<std::size_t> idx(choices.size(), 0);
            while (true) {
                std::vector<GlobalBranch> branches;
                for (std::size_t i = 0; i < choices.size(); ++i) {
                    const auto& b = g->branches()[i];
                    branches.push_back(GlobalBranch{b.label, b.payload, choices[i][idx[i]]});
                }
                out.push_back(GlobalStep{lab, GlobalType::transmission(g->from(), g->to(), std::move(branches))});
                std::size_t k = 0;
                while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
                if (k == idx.size()) break;
            }
        }
        return out;
    }
};

const LocalTypePtr* session_entry(const Sort& s) { return s.is_session() ? &s.session() : nullptr; }

}  // namespace

std::vector<GlobalStep> global_steps(const GlobalTypePtr& g, const SessionName& session) {
    GlobalStepper st{session};
    std::set<CanonicalKey> on_path;
    auto raw = st.run(g, on_path);
    std::vector<GlobalStep> out;
    std::set<std::pair<TransitionLabel, CanonicalKey>> seen;
    for (auto& s : raw)
        if (seen.emplace(s.label, canonical_key(*s.target)).second) out.push_back(std::move(s));
    return out;
}

std::vector<ContextStep> context_half_steps(const TypingContext& ctx, const SessionName& s) {
    std::vector<ContextStep> out;
    for (const auto& [key, sort] : ctx) {
        const auto* ep = std::get_if<Endpoint>(&key);
        const auto* t = session_entry(sort);
        if (!ep || ep->session != s || !t) continue;
        auto u = unfold_once(*t);
        if (!u->is_choice()) continue;
        for (const auto& b : u->branches()) {
            TypingContext next = ctx;
            next.assign(key, Sort(b.cont));
            auto label = u->kind() == LocalType::Kind::Internal
                             ? TransitionLabel::output(s, ep->role, u->peer(), b.label, b.payload)
                             : TransitionLabel::input(s, ep->role, u->peer(), b.label, b.payload);
            out.push_back(ContextStep{std::move(label), std::move(next)});
        }
    }
    return out;
}

std::vector<ContextStep> context_transmissions(const TypingContext& ctx, const SessionName& s) {
    std::vector<ContextStep> out;
    for (const auto& [key, sort] : ctx) {
        const auto* ep = std::get_if<Endpoint>(&key);
        const auto* t = session_entry(sort);
        if (!ep || ep->session != s || !t) continue;
        auto u = unfold_once(*t);
        if (u->kind() != LocalType::Kind::Internal) continue;
        const ContextKey peer_key = Endpoint{s, u->peer()};
        const Sort* peer_sort = ctx.find(peer_key);
        if (!peer_sort || !peer_sort->is_session()) continue;
        auto v = unfold_once(peer_sort->session());
        if (v->kind() != LocalType::Kind::External || v->peer() != ep->role) continue;
        for (const auto& b : u->branches()) {
            const auto* in = v->find_branch(b.label);
            if (!in || !subtype(b.payload, in->payload)) continue;
            TypingContext next = ctx;
            next.assign(key, Sort(b.cont));
            next.assign(peer_key, Sort(in->cont));
            out.push_back(ContextStep{TransitionLabel::transmission(s, ep->role, u->peer(), b.label), std::move(next)});
        }
    }
    return out;
}

std::optional<TypingContext> apply_transmission(const TypingContext& ctx, const TransitionLabel& label) {
    for (auto& st : context_transmissions(ctx, label.session))
        if (st.label == label) return std::move(st.target);
    return std::nullopt;
}

std::string state_key(const TypingContext& ctx) {
    std::string out;
    for (const auto& [k, v] : ctx) {
        out += to_string(k);
        out += '=';
        out += canonical_key(v).repr();
        out += ';';
    }
    return out;
}

std::vector<TransitionLabel> StateGraph::trace_to(std::size_t n) const {
    std::vector<TransitionLabel> out;
    while (n != 0) {
        out.push_back(via[n]);
        n = parent[n];
    }
    std::reverse(out.begin(), out.end());
    return out;
}

StateGraph reachable_contexts(const TypingContext& ctx, const SessionName& s, std::size_t limit) {
    StateGraph g;
    g.session = s;
    std::unordered_map<std::string, std::size_t> index;
    auto add = [&](const TypingContext& c, std::size_t parent, const TransitionLabel* via) -> std::pair<std::size_t, bool> {
        auto key = state_key(c);
        auto it = index.find(key);
        if (it != index.end()) return {it->second, false};
        if (g.nodes.size() >= limit) throw LimitExceeded(limit);
        std::size_t id = g.nodes.size();
        index.emplace(std::move(key), id);
        g.nodes.push_back(c);
        g.out.emplace_back();
        g.parent.push_back(parent);
        g.via.push_back(via ? *via : TransitionLabel{});
        return {id, true};
    };
    add(ctx, 0, nullptr);
    for (std::size_t cur = 0; cur < g.nodes.size(); ++cur) {
        auto steps = context_transmissions(g.nodes[cur], s);
        for (auto& st : steps) {
            auto [id, fresh] = add(st.target, cur, &st.label);
            (void)fresh;
            g.out[cur].push_back(StateGraph::Edge{st.label, id});
        }
    }
    return g;
}

}  // namespace mpst
