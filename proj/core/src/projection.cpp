#include "mpst/projection.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace mpst {

std::string_view to_string(MergeFailure::Reason r) noexcept {
    switch (r) {
    case MergeFailure::Reason::InternalChoiceClash: return "InternalChoiceClash";
    case MergeFailure::Reason::PeerMismatch: return "PeerMismatch";
    case MergeFailure::Reason::PayloadMismatch: return "PayloadMismatch";
    case MergeFailure::Reason::LabelPayloadClash: return "LabelPayloadClash";
    case MergeFailure::Reason::ShapeMismatch: return "ShapeMismatch";
    case MergeFailure::Reason::BinderMismatch: return "BinderMismatch";
    }
    return "?";
}

std::string describe(const MergeFailure& f) {
    std::string out(to_string(f.reason));
    if (f.role) out += " projecting onto " + f.role->str();
    out += " at [";
    for (std::size_t i = 0; i < f.path.size(); ++i) out += (i ? "." : "") + f.path[i];
    out += "]";
    if (!f.detail.empty()) out += ": " + f.detail;
    return out;
}

namespace {

constexpr std::size_t kFree = static_cast<std::size_t>(-1);

struct Merger {
    std::vector<RecVar> left;
    std::vector<RecVar> right;
    std::vector<std::string> path;

    static std::size_t index_of(const std::vector<RecVar>& stack, const RecVar& v) {
        for (std::size_t i = stack.size(); i-- > 0;)
            if (stack[i] == v) return stack.size() - 1 - i;
        return kFree;
    }

    // Moves a right-hand subterm under the left-hand binders: variables bound
    // by the right stack take the left name at the same depth, and inner
    // binders that would capture such a name are renamed.
    LocalTypePtr transport(const LocalTypePtr& t, std::map<RecVar, RecVar> inner) const {
        using K = LocalType::Kind;
        switch (t->kind()) {
        case K::End: return t;
        case K::Var: {
            if (auto it = inner.find(t->rec_var()); it != inner.end()) return LocalType::var(it->second);
            auto i = index_of(right, t->rec_var());
            if (i == kFree) return t;
            return LocalType::var(left[left.size() - 1 - i]);
        }
        case K::Rec: {
            RecVar w = t->rec_var();
            while (std::find(left.begin(), left.end(), w) != left.end()) w = RecVar(w.str() + "'");
            inner[t->rec_var()] = w;
            return LocalType::rec(w, transport(t->body(), inner));
        }
        case K::Internal:
        case K::External: {
            std::vector<LocalBranch> br;
            for (const auto& x : t->branches())
                br.push_back(LocalBranch{x.label, transport(x.payload, inner), transport(x.cont, inner)});
            return t->kind() == K::Internal ? LocalType::internal(t->peer(), std::move(br))
                                            : LocalType::external(t->peer(), std::move(br));
        }
        }
        return t;
    }

    Sort transport(const Sort& s, const std::map<RecVar, RecVar>& inner) const {
        if (s.is_basic()) return s;
        return Sort(transport(s.session(), inner));
    }

    MergeFailure fail(MergeFailure::Reason r, std::string detail) const {
        return MergeFailure{r, path, std::nullopt, std::move(detail)};
    }

    MergeResult run(const LocalTypePtr& a, const LocalTypePtr& b) {
        using K = LocalType::Kind;
        if (a->kind() != b->kind()) {
            if (a->kind() == K::Var || b->kind() == K::Var)
                return fail(MergeFailure::Reason::ShapeMismatch, "recursion variable against another shape");
            return fail(MergeFailure::Reason::ShapeMismatch, "incompatible shapes");
        }
        switch (a->kind()) {
        case K::End: return a;
        case K::Var: {
            auto ia = index_of(left, a->rec_var());
            auto ib = index_of(right, b->rec_var());
            bool same = ia == kFree ? (ib == kFree && a->rec_var() == b->rec_var()) : ia == ib;
            if (!same)
                return fail(MergeFailure::Reason::BinderMismatch,
                            "variables " + a->rec_var().str() + " and " + b->rec_var().str());
            return a;
        }
        case K::Rec: {
            left.push_back(a->rec_var());
            right.push_back(b->rec_var());
            auto body = run(a->body(), b->body());
            left.pop_back();
            right.pop_back();
            if (!body) return body;
            return LocalType::rec(a->rec_var(), body.value());
        }
        case K::Internal: return internal(a, b);
        case K::External: return external(a, b);
        }
        return fail(MergeFailure::Reason::ShapeMismatch, "incompatible shapes");
    }

    MergeResult internal(const LocalTypePtr& a, const LocalTypePtr& b) {
        if (a->peer() != b->peer())
            return fail(MergeFailure::Reason::PeerMismatch, "peers " + a->peer().str() + " and " + b->peer().str());
        std::set<Label> la;
        std::set<Label> lb;
        for (const auto& br : a->branches()) la.insert(br.label);
        for (const auto& br : b->branches()) lb.insert(br.label);
        if (la != lb) return fail(MergeFailure::Reason::InternalChoiceClash, "selections offer different labels");
        std::vector<LocalBranch> out;
        for (const auto& x : a->branches()) {
            const auto* y = b->find_branch(x.label);
            if (!alpha_equal(x.payload, y->payload))
                return fail(MergeFailure::Reason::PayloadMismatch, "payloads of " + x.label.str() + " differ");
            path.push_back(x.label.str());
            auto c = run(x.cont, y->cont);
            path.pop_back();
            if (!c) return c;
            out.push_back(LocalBranch{x.label, x.payload, c.value()});
        }
        return LocalType::internal(a->peer(), std::move(out));
    }

    MergeResult external(const LocalTypePtr& a, const LocalTypePtr& b) {
        if (a->peer() != b->peer())
            return fail(MergeFailure::Reason::PeerMismatch, "peers " + a->peer().str() + " and " + b->peer().str());
        std::vector<LocalBranch> out;
        for (const auto& x : a->branches()) {
            const auto* y = b->find_branch(x.label);
            if (!y) {
                out.push_back(x);
                continue;
            }
            if (!alpha_equal(x.payload, y->payload))
                return fail(MergeFailure::Reason::LabelPayloadClash, "payloads of " + x.label.str() + " differ");
            path.push_back(x.label.str());
            auto c = run(x.cont, y->cont);
            path.pop_back();
            if (!c) return c;
            out.push_back(LocalBranch{x.label, x.payload, c.value()});
        }
        for (const auto& y : b->branches())
            if (!a->find_branch(y.label)) out.push_back(LocalBranch{y.label, transport(y.payload, {}), transport(y.cont, {})});
        return LocalType::external(a->peer(), std::move(out));
    }
};

struct Projector {
    const Role& role;
    std::vector<std::string> path;

    MergeResult run(const GlobalTypePtr& g) {
        switch (g->kind()) {
        case GlobalType::Kind::End: return LocalType::end();
        case GlobalType::Kind::Var: return LocalType::var(g->rec_var());
        case GlobalType::Kind::Rec: {
            auto roles = roles_of(*g->body());
            if (!roles.count(role) && free_vars(*g).empty()) return LocalType::end();
            auto body = run(g->body());
            if (!body) return body;
            return LocalType::rec(g->rec_var(), body.value());
        }
        case GlobalType::Kind::Transmission: break;
        }
        const bool sender = g->from() == role;
        const bool receiver = g->to() == role;
        std::vector<LocalBranch> branches;
        std::vector<LocalTypePtr> conts;
        for (const auto& b : g->branches()) {
            path.push_back(b.label.str());
            auto c = run(b.cont);
            path.pop_back();
            if (!c) return c;
            if (sender || receiver) branches.push_back(LocalBranch{b.label, b.payload, c.value()});
            else conts.push_back(c.value());
        }
        if (sender) return LocalType::internal(g->to(), std::move(branches));
        if (receiver) return LocalType::external(g->from(), std::move(branches));
        Merger m;
        LocalTypePtr acc = conts.front();
        for (std::size_t i = 1; i < conts.size(); ++i) {
            m.path = path;
            m.path.push_back(g->branches()[i].label.str());
            auto r = m.run(acc, conts[i]);
            if (!r) return r;
            acc = r.value();
        }
        return acc;
    }
};

}  // namespace

MergeResult merge(const LocalTypePtr& a, const LocalTypePtr& b) {
    Merger m;
    return m.run(a, b);
}

MergeResult merge_all(const std::vector<LocalTypePtr>& family) {
    if (family.empty()) throw std::invalid_argument("merge of an empty family");
    LocalTypePtr acc = family.front();
    for (std::size_t i = 1; i < family.size(); ++i) {
        auto r = merge(acc, family[i]);
        if (!r) return r;
        acc = r.value();
    }
    return acc;
}

MergeResult project(const GlobalTypePtr& g, const Role& p) {
    Projector pr{p, {}};
    auto r = pr.run(g);
    if (r) return r;
    MergeFailure f = r.error();
    f.role = p;
    return f;
}

MergeResult project(const GlobalType& g, const Role& p) {
    // Non-owning alias; Projector never retains the root pointer.
    GlobalTypePtr alias(std::shared_ptr<const GlobalType>{}, &g);
    return project(alias, p);
}

Result<ProjectionMap, std::vector<MergeFailure>> project_all(const GlobalType& g) {
    ProjectionMap out;
    std::vector<MergeFailure> failures;
    for (const auto& r : roles_of(g)) {
        auto t = project(g, r);
        if (t) out.emplace(r, t.value());
        else failures.push_back(t.error());
    }
    if (!failures.empty()) return failures;
    return out;
}

}  // namespace mpst
