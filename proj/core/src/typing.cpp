#include "mpst/typing.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mpst/lts.hpp"
#include "mpst/subtyping.hpp"
#include "mpst/surface.hpp"

namespace mpst {

std::string_view to_string(TypeError::Kind k) noexcept {
    switch (k) {
    case TypeError::Kind::UnboundChannel: return "UnboundChannel";
    case TypeError::Kind::LabelNotInType: return "LabelNotInType";
    case TypeError::Kind::PayloadMismatch: return "PayloadMismatch";
    case TypeError::Kind::NonLinearSplit: return "NonLinearSplit";
    case TypeError::Kind::EndDelegation: return "EndDelegation";
    case TypeError::Kind::AssociationFailure: return "AssociationFailure";
    case TypeError::Kind::ArityMismatch: return "ArityMismatch";
    case TypeError::Kind::ChannelShape: return "ChannelShape";
    case TypeError::Kind::UnusedResource: return "UnusedResource";
    case TypeError::Kind::UnboundProcessVariable: return "UnboundProcessVariable";
    case TypeError::Kind::ErrorProcess: return "ErrorProcess";
    }
    return "?";
}

std::string describe(const TypeError& e) {
    return std::string(to_string(e.kind)) + " in " + e.rule + " at `" + e.position + "`: " + e.reason;
}

std::string_view to_string(SubjectReductionFailure::Kind k) noexcept {
    switch (k) {
    case SubjectReductionFailure::Kind::Refuted: return "Refuted";
    case SubjectReductionFailure::Kind::NotFound: return "NotFound";
    case SubjectReductionFailure::Kind::Error: return "Error";
    }
    return "?";
}

namespace {

std::string print_theta(const ProcVarEnv& theta) {
    std::string out;
    for (const auto& [x, sorts] : theta) {
        if (!out.empty()) out += ", ";
        out += x.str() + ":(";
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            if (i) out += ", ";
            out += print(sorts[i]);
        }
        out += ")";
    }
    return out;
}

}  // namespace

std::string Derivation::judgment() const {
    std::string prefix = theta.empty() ? "" : print_theta(theta) + "; ";
    if (rule == "T-end") return "end(" + print(context) + ")";
    if (rule == "T-X") {
        std::string out = prefix + "|- " + proc_var->str() + " : (";
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            if (i) out += ", ";
            out += print(sorts[i]);
        }
        return out + ")";
    }
    if (value) return print(context) + " |- " + print(*value) + " : " + print(*sort);
    return prefix + print(context) + " |- " + (process ? print(*process) : std::string("?"));
}

std::size_t Derivation::size() const {
    std::size_t n = 1;
    for (const auto& p : premises) n += p.size();
    return n;
}

const Derivation* Derivation::find_rule(std::string_view rule_name) const {
    if (rule == rule_name) return this;
    for (const auto& p : premises)
        if (const auto* d = p.find_rule(rule_name)) return d;
    return nullptr;
}

namespace {

void print_tree(const Derivation& d, std::size_t depth, std::string& out) {
    out += std::string(depth * 2, ' ') + "[" + d.rule + "] " + d.judgment();
    if (!d.side_conditions.empty()) {
        out += "   if ";
        for (std::size_t i = 0; i < d.side_conditions.size(); ++i) {
            if (i) out += ", ";
            out += d.side_conditions[i];
        }
    }
    out += "\n";
    for (const auto& p : d.premises) print_tree(p, depth + 1, out);
}

}  // namespace

std::string print(const Derivation& d) {
    std::string out;
    print_tree(d, 0, out);
    return out;
}

bool end_predicate(const TypingContext& ctx) {
    for (const auto& [k, v] : ctx)
        if (!v.is_basic() && !is_end_like(v)) return false;
    return true;
}

namespace {

struct Failure {
    TypeError error;
};

std::string position(const Process& p) {
    std::string s = print(p);
    if (s.size() > 120) s = s.substr(0, 117) + "...";
    return s;
}

[[noreturn]] void fail(TypeError::Kind k, std::string rule, const Process& p, std::string reason) {
    throw Failure{TypeError{k, std::move(rule), position(p), std::move(reason)}};
}

std::optional<ContextKey> key_of(const Value& v) {
    if (v.is_var()) return ContextKey(v.var());
    if (v.is_endpoint()) return ContextKey(v.endpoint());
    return std::nullopt;
}

void collect_free(const Value& v, const std::set<SessionName>& bs, const std::set<VarName>& bv,
                  std::set<ContextKey>& out) {
    if (v.is_var() && !bv.count(v.var())) out.insert(v.var());
    if (v.is_endpoint() && !bs.count(v.endpoint().session)) out.insert(v.endpoint());
}

void collect_free(const Process& p, std::set<SessionName> bs, std::set<VarName> bv, std::set<ContextKey>& out) {
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: return;
    case Process::Kind::Res:
        bs.insert(p.session());
        collect_free(*p.body(), std::move(bs), std::move(bv), out);
        return;
    case Process::Kind::Select:
        collect_free(p.channel(), bs, bv, out);
        collect_free(p.payload(), bs, bv, out);
        collect_free(*p.cont(), std::move(bs), std::move(bv), out);
        return;
    case Process::Kind::Branch:
        collect_free(p.channel(), bs, bv, out);
        for (const auto& a : p.arms()) {
            auto inner = bv;
            if (a.var) inner.insert(*a.var);
            collect_free(*a.body, bs, std::move(inner), out);
        }
        return;
    case Process::Kind::Def: {
        auto inner = bv;
        for (const auto& prm : p.params()) inner.insert(prm.name);
        collect_free(*p.body(), bs, std::move(inner), out);
        collect_free(*p.scope(), std::move(bs), std::move(bv), out);
        return;
    }
    case Process::Kind::Call:
        for (const auto& a : p.args()) collect_free(a, bs, bv, out);
        return;
    case Process::Kind::Par:
        collect_free(*p.left(), bs, bv, out);
        collect_free(*p.right(), std::move(bs), std::move(bv), out);
        return;
    }
}

std::set<ContextKey> free_keys(const Process& p) {
    std::set<ContextKey> out;
    collect_free(p, {}, {}, out);
    return out;
}

TypingContext singleton(const ContextKey& k, const Sort& s) {
    TypingContext c;
    c.insert(k, s);
    return c;
}

Derivation end_node(const ProcVarEnv& theta, const TypingContext& ctx) {
    Derivation d;
    d.rule = "T-end";
    d.theta = theta;
    d.context = ctx;
    return d;
}

Derivation entail_node(const ContextKey& k, const Value& v, const Sort& actual, const Sort& claimed) {
    Derivation d;
    d.rule = "T-sub";
    d.context = singleton(k, actual);
    d.value = v;
    d.sort = claimed;
    d.side_conditions.push_back(print(actual) + " <= " + print(claimed));
    return d;
}

Derivation literal_node(const Value& v, const Sort& claimed) {
    Derivation d;
    d.rule = "T-B";
    d.value = v;
    d.sort = claimed;
    return d;
}

LocalTypePtr session_unfolded(const Sort& s, const Process& at, const std::string& rule, const std::string& chan) {
    if (!s.is_session()) fail(TypeError::Kind::ChannelShape, rule, at, chan + " has basic sort " + print(s));
    try {
        return unfold_once(s.session());
    } catch (const IllFormed& e) {
        fail(TypeError::Kind::ChannelShape, rule, at, chan + " has ill-formed type: " + e.what());
    }
}

class Checker {
public:
    Derivation check(const ProcVarEnv& theta, const TypingContext& ctx, const ProcessPtr& p) {
        Derivation d;
        d.theta = theta;
        d.context = ctx;
        d.process = p;
        switch (p->kind()) {
        case Process::Kind::Nil: nil(d); break;
        case Process::Kind::Err: fail(TypeError::Kind::ErrorProcess, "-", *p, "err has no typing rule");
        case Process::Kind::Par: par(d); break;
        case Process::Kind::Select: select(d); break;
        case Process::Kind::Branch: branch(d); break;
        case Process::Kind::Def: def(d); break;
        case Process::Kind::Call: call(d); break;
        case Process::Kind::Res: res(d); break;
        }
        return d;
    }

private:
    void nil(Derivation& d) {
        d.rule = "T-0";
        if (!end_predicate(d.context)) {
            for (const auto& [k, v] : d.context)
                if (!v.is_basic() && !is_end_like(v))
                    fail(TypeError::Kind::UnusedResource, "T-0", *d.process,
                         to_string(k) + " : " + print(v) + " is not end");
        }
        d.premises.push_back(end_node(d.theta, d.context));
    }

    void par(Derivation& d) {
        d.rule = "T-par";
        const auto& p = *d.process;
        auto left_keys = free_keys(*p.left());
        auto right_keys = free_keys(*p.right());
        TypingContext left;
        TypingContext right;
        for (const auto& [k, v] : d.context) {
            const bool l = left_keys.count(k) != 0;
            const bool r = right_keys.count(k) != 0;
            if (l && r)
                fail(TypeError::Kind::NonLinearSplit, "T-par", p, to_string(k) + " is used on both sides");
            if (r) right.insert(k, v);
            else left.insert(k, v);
        }
        d.premises.push_back(check(d.theta, left, p.left()));
        d.premises.push_back(check(d.theta, right, p.right()));
    }

    void select(Derivation& d) {
        d.rule = "T-(+)";
        const auto& p = *d.process;
        auto ck = key_of(p.channel());
        if (!ck) fail(TypeError::Kind::ChannelShape, "T-(+)", p, "a literal used as a channel");
        const Sort* cs = d.context.find(*ck);
        if (!cs) fail(TypeError::Kind::UnboundChannel, "T-(+)", p, to_string(*ck) + " is not in the context");
        auto t = session_unfolded(*cs, p, "T-(+)", to_string(*ck));
        if (t->kind() != LocalType::Kind::Internal || t->peer() != p.peer())
            fail(TypeError::Kind::ChannelShape, "T-(+)", p,
                 to_string(*ck) + " : " + print(*cs) + " is not a selection towards " + p.peer().str());
        const LocalBranch* b = t->find_branch(p.label());
        if (!b)
            fail(TypeError::Kind::LabelNotInType, "T-(+)", p,
                 "label " + p.label().str() + " not offered by " + print(*cs));

        TypingContext rest = d.context;
        rest.erase(*ck);
        Derivation payload;
        std::optional<Sort> sd;
        if (auto dk = key_of(p.payload())) {
            if (*dk == *ck)
                fail(TypeError::Kind::NonLinearSplit, "T-(+)", p, to_string(*dk) + " sent over itself");
            const Sort* ds = rest.find(*dk);
            if (!ds) fail(TypeError::Kind::UnboundChannel, "T-(+)", p, to_string(*dk) + " is not in the context");
            sd = *ds;
            payload = entail_node(*dk, p.payload(), *ds, *ds);
            rest.erase(*dk);
        } else {
            sd = Sort(sort_of(p.payload().literal()));
            payload = literal_node(p.payload(), *sd);
        }
        if (!subtype(*sd, b->payload))
            fail(TypeError::Kind::PayloadMismatch, "T-(+)", p,
                 "payload " + print(*sd) + " is not a subtype of " + print(b->payload));
        if (is_end_like(*sd))
            fail(TypeError::Kind::EndDelegation, "T-(+)", p, "payload of type " + print(*sd) + " is below end");

        auto single = LocalType::internal(p.peer(), {LocalBranch{p.label(), *sd, b->cont}});
        d.premises.push_back(entail_node(*ck, p.channel(), *cs, Sort(single)));
        d.premises.push_back(std::move(payload));
        rest.insert(*ck, Sort(b->cont));
        d.premises.push_back(check(d.theta, rest, p.cont()));
        d.side_conditions.push_back(print(*sd) + " not<= end");
    }

    void branch(Derivation& d) {
        d.rule = "T-&";
        const auto& p = *d.process;
        auto ck = key_of(p.channel());
        if (!ck) fail(TypeError::Kind::ChannelShape, "T-&", p, "a literal used as a channel");
        const Sort* cs = d.context.find(*ck);
        if (!cs) fail(TypeError::Kind::UnboundChannel, "T-&", p, to_string(*ck) + " is not in the context");
        auto t = session_unfolded(*cs, p, "T-&", to_string(*ck));
        if (t->kind() != LocalType::Kind::External || t->peer() != p.peer())
            fail(TypeError::Kind::ChannelShape, "T-&", p,
                 to_string(*ck) + " : " + print(*cs) + " is not a branching from " + p.peer().str());
        TypingContext rest = d.context;
        rest.erase(*ck);
        d.premises.push_back(entail_node(*ck, p.channel(), *cs, Sort(t)));
        for (const auto& b : t->branches()) {
            const BranchArm* arm = p.find_arm(b.label);
            if (!arm)
                fail(TypeError::Kind::LabelNotInType, "T-&", p, "no arm for label " + b.label.str() + " of " + print(*cs));
            TypingContext inner = rest;
            if (arm->var) {
                if (inner.contains(*arm->var) || ContextKey(*arm->var) == *ck)
                    fail(TypeError::Kind::NonLinearSplit, "T-&", p, "binder " + arm->var->str() + " is already in the context");
                inner.insert(*arm->var, b.payload);
            } else if (!b.payload.is_basic() && !is_end_like(b.payload)) {
                fail(TypeError::Kind::UnusedResource, "T-&", p,
                     "arm " + b.label.str() + " drops a payload of type " + print(b.payload));
            }
            inner.insert(*ck, Sort(b.cont));
            d.premises.push_back(check(d.theta, inner, arm->body));
        }
    }

    void def(Derivation& d) {
        d.rule = "T-def";
        const auto& p = *d.process;
        std::vector<Sort> sorts;
        TypingContext params;
        for (const auto& prm : p.params()) {
            if (params.contains(prm.name))
                fail(TypeError::Kind::NonLinearSplit, "T-def", p, "duplicate parameter " + prm.name.str());
            params.insert(prm.name, prm.sort);
            sorts.push_back(prm.sort);
        }
        ProcVarEnv inner = d.theta;
        inner[p.name()] = sorts;
        d.premises.push_back(check(inner, params, p.body()));
        d.premises.push_back(check(inner, d.context, p.scope()));
    }

    void call(Derivation& d) {
        d.rule = "T-call";
        const auto& p = *d.process;
        auto it = d.theta.find(p.name());
        if (it == d.theta.end())
            fail(TypeError::Kind::UnboundProcessVariable, "T-X", p, p.name().str() + " is not defined");
        const auto& sorts = it->second;
        if (sorts.size() != p.args().size())
            fail(TypeError::Kind::ArityMismatch, "T-call", p,
                 p.name().str() + " expects " + std::to_string(sorts.size()) + " arguments, got " +
                     std::to_string(p.args().size()));
        Derivation x;
        x.rule = "T-X";
        x.theta = d.theta;
        x.proc_var = p.name();
        x.sorts = sorts;
        TypingContext rest = d.context;
        std::vector<Derivation> args;
        for (std::size_t i = 0; i < sorts.size(); ++i) {
            const auto& a = p.args()[i];
            const auto& want = sorts[i];
            if (is_end_like(want))
                fail(TypeError::Kind::EndDelegation, "T-call", p, "parameter type " + print(want) + " is below end");
            if (auto k = key_of(a)) {
                const Sort* have = rest.find(*k);
                if (!have) {
                    if (d.context.contains(*k))
                        fail(TypeError::Kind::NonLinearSplit, "T-call", p, to_string(*k) + " passed twice");
                    fail(TypeError::Kind::UnboundChannel, "T-call", p, to_string(*k) + " is not in the context");
                }
                if (!subtype(*have, want))
                    fail(TypeError::Kind::PayloadMismatch, "T-call", p,
                         "argument " + to_string(*k) + " : " + print(*have) + " is not a subtype of " + print(want));
                args.push_back(entail_node(*k, a, *have, want));
                rest.erase(*k);
            } else {
                BasicSort ls = sort_of(a.literal());
                if (!want.is_basic() || !basic_subtype(ls, want.basic()))
                    fail(TypeError::Kind::PayloadMismatch, "T-call", p,
                         "literal of sort " + std::string(to_string(ls)) + " passed for " + print(want));
                args.push_back(literal_node(a, want));
            }
        }
        if (!end_predicate(rest))
            fail(TypeError::Kind::UnusedResource, "T-call", p, "leftover context " + print(rest) + " is not end");
        d.premises.push_back(std::move(x));
        d.premises.push_back(end_node(d.theta, rest));
        for (auto& a : args) d.premises.push_back(std::move(a));
        for (const auto& s : sorts) d.side_conditions.push_back(print(s) + " not<= end");
    }

    void res(Derivation& d) {
        d.rule = "T-G-nu";
        const auto& p = *d.process;
        const auto& s = p.session();
        if (d.context.has_session(s))
            fail(TypeError::Kind::NonLinearSplit, "T-G-nu", p, "session " + s.str() + " already occurs in the context");
        const auto& ann = p.annotation();
        if (!ann.global)
            fail(TypeError::Kind::AssociationFailure, "T-G-nu", p, "restriction has no global type to associate with");
        if (!well_formed(*ann.global).empty())
            fail(TypeError::Kind::AssociationFailure, "T-G-nu", p, "global type is not well-formed");
        TypingContext local;
        if (ann.context) {
            auto report = check_association(ann.global, *ann.context, s);
            if (!report.holds)
                fail(TypeError::Kind::AssociationFailure, "T-G-nu", p,
                     report.failure.value_or("context is not associated with the global type"));
            local = *ann.context;
        } else {
            try {
                local = projected_context(*ann.global, s);
            } catch (const IllFormed& e) {
                fail(TypeError::Kind::AssociationFailure, "T-G-nu", p, std::string("global type not projectable: ") + e.what());
            }
        }
        d.side_conditions.push_back(print(*ann.global) + " |= " + print(local) + " for " + s.str());
        d.side_conditions.push_back(s.str() + " not in context");
        d.premises.push_back(check(d.theta, TypingContext::compose(d.context, local), p.body()));
    }
};

}  // namespace

TypingResult typecheck(const ProcVarEnv& theta, const TypingContext& ctx, const ProcessPtr& p) {
    try {
        Checker c;
        return c.check(theta, ctx, p);
    } catch (const Failure& f) {
        return f.error;
    }
}

// ---------------------------------------------------------------------------
// Guarded definitions and single-role processes

namespace {

bool guarded_body(const Process& p, const std::set<VarName>& tracked, std::set<VarName> guarded) {
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: return true;
    case Process::Kind::Res: return guarded_body(*p.body(), tracked, std::move(guarded));
    case Process::Kind::Select:
        if (p.channel().is_var()) guarded.insert(p.channel().var());
        return guarded_body(*p.cont(), tracked, std::move(guarded));
    case Process::Kind::Branch: {
        if (p.channel().is_var()) guarded.insert(p.channel().var());
        for (const auto& a : p.arms()) {
            auto inner_tracked = tracked;
            if (a.var) inner_tracked.erase(*a.var);
            if (!guarded_body(*a.body, inner_tracked, guarded)) return false;
        }
        return true;
    }
    case Process::Kind::Def: return guarded_body(*p.scope(), tracked, std::move(guarded));
    case Process::Kind::Call:
        for (const auto& a : p.args())
            if (a.is_var() && tracked.count(a.var()) && !guarded.count(a.var())) return false;
        return true;
    case Process::Kind::Par:
        return guarded_body(*p.left(), tracked, guarded) && guarded_body(*p.right(), tracked, guarded);
    }
    return true;
}

}  // namespace

bool guarded_definitions(const Process& p) {
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err:
    case Process::Kind::Call: return true;
    case Process::Kind::Res: return guarded_definitions(*p.body());
    case Process::Kind::Select: return guarded_definitions(*p.cont());
    case Process::Kind::Branch:
        return std::all_of(p.arms().begin(), p.arms().end(),
                           [](const BranchArm& a) { return guarded_definitions(*a.body); });
    case Process::Kind::Def: {
        std::set<VarName> tracked;
        for (const auto& prm : p.params())
            if (prm.sort.is_session()) tracked.insert(prm.name);
        return guarded_body(*p.body(), tracked, {}) && guarded_definitions(*p.body()) &&
               guarded_definitions(*p.scope());
    }
    case Process::Kind::Par: return guarded_definitions(*p.left()) && guarded_definitions(*p.right());
    }
    return true;
}

namespace {

bool restrictions_end_only(const Process& p) {
    switch (p.kind()) {
    case Process::Kind::Res: {
        const auto& ann = p.annotation();
        TypingContext local;
        if (ann.context) {
            local = *ann.context;
        } else if (ann.global) {
            try {
                local = projected_context(*ann.global, p.session());
            } catch (const IllFormed&) {
                return false;
            }
        }
        return end_predicate(local) && restrictions_end_only(*p.body());
    }
    case Process::Kind::Select: return restrictions_end_only(*p.cont());
    case Process::Kind::Branch:
        return std::all_of(p.arms().begin(), p.arms().end(),
                           [](const BranchArm& a) { return restrictions_end_only(*a.body); });
    case Process::Kind::Def: return restrictions_end_only(*p.body()) && restrictions_end_only(*p.scope());
    case Process::Kind::Par: return restrictions_end_only(*p.left()) && restrictions_end_only(*p.right());
    default: return true;
    }
}

}  // namespace

bool only_plays(const ProcessPtr& p, const Role& role, const SessionName& s, const TypingContext& ctx) {
    if (!typecheck({}, ctx, p).ok()) return false;
    if (!guarded_definitions(*p)) return false;
    if (!free_vars(*p).empty()) return false;
    const Endpoint ep{s, role};
    const Sort* t = ctx.find(ep);
    if (!t || is_end_like(*t) || t->is_basic()) return false;
    TypingContext rest = ctx;
    rest.erase(ep);
    if (!end_predicate(rest)) return false;
    return restrictions_end_only(*p);
}

// ---------------------------------------------------------------------------
// Subject reduction

namespace {

struct CtxCandidate {
    TypingContext ctx;
    std::vector<TransitionLabel> path;
};

std::vector<CtxCandidate> reachable_within(const TypingContext& start, std::size_t horizon, std::size_t cap) {
    std::vector<CtxCandidate> out{{start, {}}};
    std::set<std::string> seen{state_key(start)};
    for (std::size_t i = 0; i < out.size() && out.size() < cap; ++i) {
        if (out[i].path.size() >= horizon) continue;
        for (const auto& s : out[i].ctx.sessions()) {
            for (const auto& st : context_transmissions(out[i].ctx, s)) {
                if (!seen.insert(state_key(st.target)).second) continue;
                auto path = out[i].path;
                path.push_back(st.label);
                out.push_back(CtxCandidate{st.target, std::move(path)});
                if (out.size() >= cap) break;
            }
        }
    }
    return out;
}

std::optional<std::map<SessionName, GlobalTypePtr>> advance_globals(std::map<SessionName, GlobalTypePtr> globals,
                                                                     const TypingContext& start,
                                                                     const std::vector<TransitionLabel>& path) {
    TypingContext ctx = start;
    for (const auto& l : path) {
        auto next = apply_transmission(ctx, l);
        if (!next) return std::nullopt;
        ctx = std::move(*next);
        auto it = globals.find(l.session);
        if (it == globals.end()) continue;
        bool moved = false;
        for (const auto& st : global_steps(it->second, l.session)) {
            if (!(st.label == l)) continue;
            if (!associated(st.target, ctx.restrict_to(l.session), l.session)) continue;
            it->second = st.target;
            moved = true;
            break;
        }
        if (!moved) return std::nullopt;
    }
    return globals;
}

}  // namespace

SubjectReductionReport subject_reduction_harness(const ProcVarEnv& theta, const TypingContext& ctx, const ProcessPtr& p,
                                                 const SubjectReductionOptions& opts) {
    SubjectReductionReport report;
    auto fail_with = [&](SubjectReductionFailure::Kind k, std::size_t step, const ProcessPtr& at, std::string why) {
        report.failures.push_back(SubjectReductionFailure{k, step, print(*at), std::move(why)});
    };
    if (auto r = typecheck(theta, ctx, p); !r.ok()) {
        fail_with(SubjectReductionFailure::Kind::Refuted, 0, p, "initial process is not typable: " + describe(r.error()));
        return report;
    }
    std::mt19937_64 rng(opts.seed);
    TypingContext cur_ctx = ctx;
    auto globals = opts.globals;
    NormalForm cur = normalize(p);
    for (std::size_t step = 1; step <= opts.steps; ++step) {
        std::vector<Reduction> next;
        try {
            next = reduce_steps(cur);
        } catch (const DynamicFault& e) {
            fail_with(SubjectReductionFailure::Kind::Error, step, denormalize(cur), e.what());
            return report;
        }
        if (next.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
        const Reduction& r = next[pick(rng)];
        ProcessPtr after = denormalize(r.result);
        report.steps_taken = step;
        if (r.rule == Reduction::Rule::Err || has_error(r.result)) {
            fail_with(SubjectReductionFailure::Kind::Error, step, after, "reductum has an error");
            return report;
        }
        // The transmission fired on a free session is the natural witness.
        std::optional<TypingContext> natural;
        if (r.rule == Reduction::Rule::Comm && r.label && cur_ctx.has_session(r.label->session))
            natural = apply_transmission(cur_ctx, *r.label);
        else if (r.rule == Reduction::Rule::Call || (r.label && !cur_ctx.has_session(r.label->session)))
            natural = cur_ctx;

        bool found = false;
        std::string last_error;
        auto candidates = reachable_within(cur_ctx, opts.horizon, 512);
        if (natural) {
            auto it = std::find_if(candidates.begin(), candidates.end(),
                                   [&](const CtxCandidate& c) { return c.ctx == *natural; });
            if (it != candidates.end()) std::rotate(candidates.begin(), it, it + 1);
        }
        for (const auto& c : candidates) {
            auto typed = typecheck(theta, c.ctx, after);
            if (!typed.ok()) {
                if (natural && c.ctx == *natural) last_error = describe(typed.error());
                continue;
            }
            auto g2 = advance_globals(globals, cur_ctx, c.path);
            if (!g2) continue;
            cur_ctx = c.ctx;
            globals = std::move(*g2);
            found = true;
            break;
        }
        if (!found) {
            if (natural)
                fail_with(SubjectReductionFailure::Kind::Refuted, step, after,
                          last_error.empty() ? "association not preserved" : last_error);
            else
                fail_with(SubjectReductionFailure::Kind::NotFound, step, after,
                          "no context within the horizon types the reductum");
            return report;
        }
        cur = r.result;
    }
    return report;
}

// ---------------------------------------------------------------------------
// Fidelity premises

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
}

}  // namespace

PremiseCheck check_fidelity_premises(const GlobalTypePtr& g, const TypingContext& ctx, const ProcessPtr& p,
                                     const SessionName& s) {
    PremiseCheck out;
    auto violate = [&](std::string why) {
        out.holds = false;
        out.violation = std::move(why);
        out.components.clear();
        return out;
    };
    if (!g) return violate("no global type given");
    if (auto rep = check_association(g, ctx, s); !rep.holds)
        return violate("context not associated: " + rep.failure.value_or("?"));
    if (auto r = typecheck({}, ctx, p); !r.ok()) return violate("process not typable: " + describe(r.error()));

    NormalForm nf = normalize(p);
    const auto& ts = nf.threads;
    std::set<SessionName> restricted;
    for (const auto& r : nf.restrictions) restricted.insert(r.session);

    std::vector<std::size_t> parent(ts.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::map<SessionName, std::size_t> owner;
    std::vector<std::set<Role>> roles(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (const auto& k : free_keys(*ts[i])) {
            if (!std::holds_alternative<Endpoint>(k)) continue;
            const auto& e = std::get<Endpoint>(k);
            if (e.session == s && !restricted.count(s)) roles[i].insert(e.role);
        }
        for (const auto& fs : free_sessions(*ts[i])) {
            if (!restricted.count(fs)) continue;
            auto [it, fresh] = owner.emplace(fs, i);
            if (!fresh) parent[find_root(parent, i)] = find_root(parent, it->second);
        }
    }
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ts.size(); ++i) groups[find_root(parent, i)].push_back(i);

    std::map<Role, std::vector<std::size_t>> by_role;
    std::vector<std::size_t> roleless;
    for (const auto& [root, members] : groups) {
        std::set<Role> rs;
        for (auto m : members) rs.insert(roles[m].begin(), roles[m].end());
        if (rs.size() > 1) {
            std::string names;
            for (const auto& r : rs) names += (names.empty() ? "" : ", ") + r.str();
            return violate("one component uses several roles: " + names);
        }
        auto& dest = rs.empty() ? roleless : by_role[*rs.begin()];
        dest.insert(dest.end(), members.begin(), members.end());
    }
    if (!roleless.empty()) {
        if (by_role.empty()) by_role[Role("")] = {};
        auto& first = by_role.begin()->second;
        first.insert(first.end(), roleless.begin(), roleless.end());
    }

    auto component = [&](const std::vector<std::size_t>& members) {
        NormalForm part;
        std::set<SessionName> sessions;
        std::set<ProcVar> procs;
        for (auto m : members) {
            part.threads.push_back(ts[m]);
            auto fs = free_sessions(*ts[m]);
            sessions.insert(fs.begin(), fs.end());
            auto fp = free_proc_vars(*ts[m]);
            procs.insert(fp.begin(), fp.end());
        }
        std::vector<ProcVar> work(procs.begin(), procs.end());
        while (!work.empty()) {
            ProcVar x = work.back();
            work.pop_back();
            if (const auto* d = nf.find_def(x)) {
                for (const auto& y : free_proc_vars(*d->body))
                    if (procs.insert(y).second) work.push_back(y);
                auto fs = free_sessions(*d->body);
                sessions.insert(fs.begin(), fs.end());
            }
        }
        for (const auto& d : nf.defs)
            if (procs.count(d.name)) part.defs.push_back(d);
        for (const auto& r : nf.restrictions)
            if (sessions.count(r.session)) part.restrictions.push_back(r);
        return denormalize(part);
    };

    std::set<Role> covered;
    for (const auto& [role, members] : by_role) {
        RoleComponent rc;
        rc.role = role;
        rc.process = component(members);
        if (!role.str().empty()) {
            const Endpoint ep{s, role};
            const Sort* t = ctx.find(ep);
            if (!t) return violate("role " + role.str() + " has no entry in the context");
            rc.context.insert(ep, *t);
            covered.insert(role);
        }
        if (auto r = typecheck({}, rc.context, rc.process); !r.ok())
            return violate("component for " + role.str() + " not typable: " + describe(r.error()));
        if (!normalize(rc.process).is_nil() && !only_plays(rc.process, role, s, rc.context))
            return violate("component for " + role.str() + " does not only play its role");
        out.components.push_back(std::move(rc));
    }
    for (const auto& [k, v] : ctx) {
        if (!std::holds_alternative<Endpoint>(k)) return violate("context has a variable entry " + to_string(k));
        const auto& e = std::get<Endpoint>(k);
        if (covered.count(e.role)) continue;
        if (!is_end_like(v)) return violate("role " + e.role.str() + " has no process but type " + print(v));
        out.components.push_back(RoleComponent{e.role, singleton(k, v), Process::nil()});
    }
    out.holds = true;
    return out;
}

// ---------------------------------------------------------------------------
// Session fidelity

namespace {

struct Match {
    NormalForm state;
    TransitionLabel label;
};

/// Process reductions that reach a transmission on `s`, with any other
/// reduction taken silently.
std::vector<Match> matches_on(const NormalForm& start, const SessionName& s, std::size_t cap, std::string& error) {
    std::vector<Match> out;
    std::deque<NormalForm> work{start};
    std::set<std::string> seen{nf_key(start)};
    while (!work.empty() && seen.size() <= cap) {
        NormalForm cur = std::move(work.front());
        work.pop_front();
        std::vector<Reduction> next;
        try {
            next = reduce_steps(cur);
        } catch (const DynamicFault& e) {
            error = e.what();
            return out;
        }
        for (auto& r : next) {
            if (r.rule == Reduction::Rule::Err) {
                error = "error reduction on " + format_label(*r.label);
                return out;
            }
            if (r.rule == Reduction::Rule::Comm && r.label->session == s && !cur.find_restriction(s)) {
                out.push_back(Match{std::move(r.result), *r.label});
                continue;
            }
            if (seen.insert(nf_key(r.result)).second) work.push_back(std::move(r.result));
        }
    }
    return out;
}

}  // namespace

FidelityReport session_fidelity_harness(const GlobalTypePtr& g, const TypingContext& ctx, const ProcessPtr& p,
                                        const SessionName& s, std::size_t limit) {
    FidelityReport report;
    report.premises = check_fidelity_premises(g, ctx, p, s);
    if (!report.premises.holds) return report;

    struct State {
        GlobalTypePtr g;
        TypingContext ctx;
        NormalForm nf;
        std::vector<TransitionLabel> trace;
    };
    std::deque<State> work{State{g, ctx, normalize(p), {}}};
    std::set<std::string> seen{state_key(ctx) + "|" + nf_key(work.front().nf)};
    auto trace_text = [](const std::vector<TransitionLabel>& t) {
        std::string out;
        for (const auto& l : t) out += (out.empty() ? "" : " ") + format_label(l);
        return out.empty() ? std::string("<start>") : out;
    };
    while (!work.empty()) {
        if (report.states_explored >= limit) {
            report.failures.push_back("state limit " + std::to_string(limit) + " reached");
            return report;
        }
        State st = std::move(work.front());
        work.pop_front();
        ++report.states_explored;
        auto moves = context_transmissions(st.ctx, s);
        if (moves.empty()) continue;
        std::string error;
        auto found = matches_on(st.nf, s, 256, error);
        if (!error.empty()) {
            report.failures.push_back("after " + trace_text(st.trace) + ": " + error);
            continue;
        }
        bool any = false;
        for (const auto& m : found) {
            auto ctx2 = apply_transmission(st.ctx, m.label);
            if (!ctx2) {
                report.failures.push_back("after " + trace_text(st.trace) + ": process fired " + format_label(m.label) +
                                          " which the context cannot");
                continue;
            }
            GlobalTypePtr g2;
            for (const auto& gs : global_steps(st.g, s)) {
                if (gs.label == m.label && associated(gs.target, *ctx2, s)) {
                    g2 = gs.target;
                    break;
                }
            }
            auto trace = st.trace;
            trace.push_back(m.label);
            if (!g2) {
                report.failures.push_back("after " + trace_text(trace) + ": no associated global type");
                continue;
            }
            auto pr = check_fidelity_premises(g2, *ctx2, denormalize(m.state), s);
            if (!pr.holds) {
                report.failures.push_back("after " + trace_text(trace) + ": " + pr.violation);
                continue;
            }
            any = true;
            if (seen.insert(state_key(*ctx2) + "|" + nf_key(m.state)).second)
                work.push_back(State{g2, std::move(*ctx2), m.state, std::move(trace)});
        }
        if (!any && found.empty())
            report.failures.push_back("after " + trace_text(st.trace) + ": context moves on " + s.str() +
                                      " but the process cannot follow");
    }
    return report;
}

// ---------------------------------------------------------------------------
// Process properties

ProcessPropertiesReport process_properties(const ProcessPtr& p, std::size_t limit) {
    ProcessPropertiesReport rep;
    rep.premises.holds = true;
    std::vector<NormalForm> nodes;
    std::vector<std::vector<std::pair<std::size_t, std::optional<TransitionLabel>>>> out;
    std::unordered_map<std::string, std::size_t> index;
    auto add = [&](NormalForm nf) {
        auto key = nf_key(nf);
        auto [it, fresh] = index.emplace(std::move(key), nodes.size());
        if (fresh) {
            nodes.push_back(std::move(nf));
            out.emplace_back();
        }
        return it->second;
    };
    add(normalize(p));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes.size() > limit) {
            rep.witness = "state limit " + std::to_string(limit) + " reached";
            rep.states = nodes.size();
            return rep;
        }
        std::vector<Reduction> next;
        try {
            next = reduce_steps(nodes[i]);
        } catch (const DynamicFault& e) {
            rep.witness = std::string("dynamic fault: ") + e.what();
            rep.states = nodes.size();
            return rep;
        }
        for (auto& r : next) {
            auto lbl = r.rule == Reduction::Rule::Comm ? r.label : std::nullopt;
            std::size_t j = add(std::move(r.result));
            out[i].emplace_back(j, std::move(lbl));
        }
    }
    rep.states = nodes.size();

    rep.deadlock_free = true;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (out[i].empty() && !nodes[i].is_nil()) {
            rep.deadlock_free = false;
            rep.witness = "stuck at " + print(nodes[i]);
            break;
        }
    }

    // An obligation is discharged by a transmission matching its endpoint,
    // peer and one of its labels; linearity makes the thread unique.
    struct Obligation {
        SessionName session;
        Role from;
        Role to;
        std::set<Label> labels;
        auto tie() const { return std::tie(session, from, to, labels); }
        bool operator<(const Obligation& o) const { return tie() < o.tie(); }
    };
    std::map<Obligation, std::vector<std::size_t>> pending;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const auto& t : nodes[i].threads) {
            if (t->kind() != Process::Kind::Select && t->kind() != Process::Kind::Branch) continue;
            if (!t->channel().is_endpoint()) continue;
            const auto& e = t->channel().endpoint();
            Obligation o;
            o.session = e.session;
            if (t->kind() == Process::Kind::Select) {
                o.from = e.role;
                o.to = t->peer();
                o.labels = {t->label()};
            } else {
                o.from = t->peer();
                o.to = e.role;
                for (const auto& a : t->arms()) o.labels.insert(a.label);
            }
            pending[o].push_back(i);
        }
    }
    std::vector<std::vector<std::size_t>> in(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (const auto& [j, l] : out[i]) in[j].push_back(i);
    rep.live = true;
    for (const auto& [o, at] : pending) {
        std::vector<char> can(nodes.size(), 0);
        std::vector<std::size_t> work;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            for (const auto& [j, l] : out[i]) {
                if (l && l->session == o.session && l->from() == o.from && l->to() == o.to && o.labels.count(l->label)) {
                    if (!can[i]) {
                        can[i] = 1;
                        work.push_back(i);
                    }
                }
            }
        }
        while (!work.empty()) {
            auto n = work.back();
            work.pop_back();
            for (auto m : in[n])
                if (!can[m]) {
                    can[m] = 1;
                    work.push_back(m);
                }
        }
        for (auto i : at) {
            if (!can[i]) {
                rep.live = false;
                if (rep.witness.empty())
                    rep.witness = "pending " + o.session.str() + ":" + o.from.str() + "->" + o.to.str() +
                                  " never fires from " + print(nodes[i]);
                break;
            }
        }
        if (!rep.live) break;
    }
    return rep;
}

ProcessPropertiesReport typed_process_properties(const GlobalTypePtr& g, const TypingContext& ctx,
                                                 const ProcessPtr& p, const SessionName& s, std::size_t limit) {
    auto premises = check_fidelity_premises(g, ctx, p, s);
    if (!premises.holds) {
        ProcessPropertiesReport rep;
        rep.premises = std::move(premises);
        rep.witness = "premise violation: " + rep.premises.violation;
        return rep;
    }
    auto rep = process_properties(p, limit);
    rep.premises = std::move(premises);
    return rep;
}

}  // namespace mpst
