#include "mpst/process.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>

#include "mpst/lts.hpp"
#include "mpst/surface.hpp"

namespace mpst {

BasicSort sort_of(const Literal& l) noexcept {
    switch (l.index()) {
    case 0: return BasicSort::Int;
    case 1: return BasicSort::Real;
    case 2: return BasicSort::Bool;
    case 3: return BasicSort::Str;
    default: return BasicSort::Unit;
    }
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::shared_ptr<Process> make(Process::Kind k) { return std::make_shared<Process>(Process::Token{}, k); }

}  // namespace

ProcessPtr Process::nil() {
    static const ProcessPtr kNil = make(Kind::Nil);
    return kNil;
}

ProcessPtr Process::err() {
    static const ProcessPtr kErr = make(Kind::Err);
    return kErr;
}

ProcessPtr Process::res(SessionName s, Annotation a, ProcessPtr body) {
    auto p = make(Kind::Res);
    p->session_ = std::move(s);
    p->annotation_ = std::move(a);
    p->a_ = std::move(body);
    return p;
}

ProcessPtr Process::select(Value chan, Role to, Label l, Value payload, ProcessPtr cont) {
    auto p = make(Kind::Select);
    p->chan_ = std::move(chan);
    p->peer_ = std::move(to);
    p->label_ = std::move(l);
    p->payload_ = std::move(payload);
    p->a_ = std::move(cont);
    return p;
}

ProcessPtr Process::branch(Value chan, Role from, std::vector<BranchArm> arms) {
    if (arms.empty()) throw std::invalid_argument("branch needs at least one arm");
    auto p = make(Kind::Branch);
    p->chan_ = std::move(chan);
    p->peer_ = std::move(from);
    p->arms_ = std::move(arms);
    return p;
}

ProcessPtr Process::def(ProcVar name, std::vector<Param> params, ProcessPtr body, ProcessPtr scope) {
    auto p = make(Kind::Def);
    p->name_ = std::move(name);
    p->params_ = std::move(params);
    p->a_ = std::move(body);
    p->b_ = std::move(scope);
    return p;
}

ProcessPtr Process::call(ProcVar name, std::vector<Value> args) {
    auto p = make(Kind::Call);
    p->name_ = std::move(name);
    p->args_ = std::move(args);
    return p;
}

ProcessPtr Process::par(ProcessPtr l, ProcessPtr r) {
    auto p = make(Kind::Par);
    p->a_ = std::move(l);
    p->b_ = std::move(r);
    return p;
}

ProcessPtr Process::par_all(const std::vector<ProcessPtr>& ps) {
    if (ps.empty()) return nil();
    ProcessPtr acc = ps.back();
    for (std::size_t i = ps.size() - 1; i-- > 0;) acc = par(ps[i], acc);
    return acc;
}

const BranchArm* Process::find_arm(const Label& l) const noexcept {
    for (const auto& a : arms_)
        if (a.label == l) return &a;
    return nullptr;
}

namespace {

bool same_annotation(const Annotation& a, const Annotation& b) {
    if (static_cast<bool>(a.global) != static_cast<bool>(b.global)) return false;
    if (a.global && !(*a.global == *b.global)) return false;
    return a.context == b.context;
}

}  // namespace

bool operator==(const Process& a, const Process& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: return true;
    case Process::Kind::Res:
        return a.session() == b.session() && same_annotation(a.annotation(), b.annotation()) && *a.body() == *b.body();
    case Process::Kind::Select:
        return a.channel() == b.channel() && a.peer() == b.peer() && a.label() == b.label() &&
               a.payload() == b.payload() && *a.cont() == *b.cont();
    case Process::Kind::Branch:
        if (!(a.channel() == b.channel()) || a.peer() != b.peer() || a.arms().size() != b.arms().size()) return false;
        for (std::size_t i = 0; i < a.arms().size(); ++i) {
            const auto& x = a.arms()[i];
            const auto& y = b.arms()[i];
            if (x.label != y.label || x.var != y.var || !(*x.body == *y.body)) return false;
        }
        return true;
    case Process::Kind::Def:
        if (a.name() != b.name() || a.params().size() != b.params().size()) return false;
        for (std::size_t i = 0; i < a.params().size(); ++i)
            if (a.params()[i].name != b.params()[i].name || !(a.params()[i].sort == b.params()[i].sort)) return false;
        return *a.body() == *b.body() && *a.scope() == *b.scope();
    case Process::Kind::Call: return a.name() == b.name() && a.args() == b.args();
    case Process::Kind::Par: return *a.left() == *b.left() && *a.right() == *b.right();
    }
    return false;
}

// ---------------------------------------------------------------------------
// Free names

namespace {

void value_vars(const Value& v, std::set<VarName>& out) {
    if (v.is_var()) out.insert(v.var());
}

void value_sessions(const Value& v, std::set<SessionName>& out) {
    if (v.is_endpoint()) out.insert(v.endpoint().session);
}

}  // namespace

std::set<VarName> free_vars(const Process& p) {
    std::set<VarName> out;
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: break;
    case Process::Kind::Res: out = free_vars(*p.body()); break;
    case Process::Kind::Select:
        out = free_vars(*p.cont());
        value_vars(p.channel(), out);
        value_vars(p.payload(), out);
        break;
    case Process::Kind::Branch:
        value_vars(p.channel(), out);
        for (const auto& a : p.arms()) {
            auto inner = free_vars(*a.body);
            if (a.var) inner.erase(*a.var);
            out.insert(inner.begin(), inner.end());
        }
        break;
    case Process::Kind::Def: {
        auto inner = free_vars(*p.body());
        for (const auto& prm : p.params()) inner.erase(prm.name);
        out = free_vars(*p.scope());
        out.insert(inner.begin(), inner.end());
        break;
    }
    case Process::Kind::Call:
        for (const auto& v : p.args()) value_vars(v, out);
        break;
    case Process::Kind::Par: {
        out = free_vars(*p.left());
        auto r = free_vars(*p.right());
        out.insert(r.begin(), r.end());
        break;
    }
    }
    return out;
}

std::set<SessionName> free_sessions(const Process& p) {
    std::set<SessionName> out;
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: break;
    case Process::Kind::Res:
        out = free_sessions(*p.body());
        out.erase(p.session());
        break;
    case Process::Kind::Select:
        out = free_sessions(*p.cont());
        value_sessions(p.channel(), out);
        value_sessions(p.payload(), out);
        break;
    case Process::Kind::Branch:
        value_sessions(p.channel(), out);
        for (const auto& a : p.arms()) {
            auto inner = free_sessions(*a.body);
            out.insert(inner.begin(), inner.end());
        }
        break;
    case Process::Kind::Def: {
        out = free_sessions(*p.body());
        auto r = free_sessions(*p.scope());
        out.insert(r.begin(), r.end());
        break;
    }
    case Process::Kind::Call:
        for (const auto& v : p.args()) value_sessions(v, out);
        break;
    case Process::Kind::Par: {
        out = free_sessions(*p.left());
        auto r = free_sessions(*p.right());
        out.insert(r.begin(), r.end());
        break;
    }
    }
    return out;
}

std::set<ProcVar> free_proc_vars(const Process& p) {
    std::set<ProcVar> out;
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: break;
    case Process::Kind::Res: out = free_proc_vars(*p.body()); break;
    case Process::Kind::Select: out = free_proc_vars(*p.cont()); break;
    case Process::Kind::Branch:
        for (const auto& a : p.arms()) {
            auto inner = free_proc_vars(*a.body);
            out.insert(inner.begin(), inner.end());
        }
        break;
    case Process::Kind::Def: {
        out = free_proc_vars(*p.body());
        auto r = free_proc_vars(*p.scope());
        out.insert(r.begin(), r.end());
        out.erase(p.name());
        break;
    }
    case Process::Kind::Call: out.insert(p.name()); break;
    case Process::Kind::Par: {
        out = free_proc_vars(*p.left());
        auto r = free_proc_vars(*p.right());
        out.insert(r.begin(), r.end());
        break;
    }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Substitution and renaming

namespace {

/// Generic structural map over values; `bind_var` reports value binders so
/// that callers can stop at shadowing.
struct Rewriter {
    std::function<Value(const Value&)> value;
    std::function<bool(const VarName&)> stops_at_var = [](const VarName&) { return false; };
    std::function<bool(const SessionName&)> stops_at_session = [](const SessionName&) { return false; };
    std::function<bool(const ProcVar&)> stops_at_proc = [](const ProcVar&) { return false; };
    std::function<ProcVar(const ProcVar&)> proc = [](const ProcVar& x) { return x; };
    std::function<Annotation(const Annotation&)> annotation = [](const Annotation& a) { return a; };

    ProcessPtr run(const ProcessPtr& p) const {
        switch (p->kind()) {
        case Process::Kind::Nil:
        case Process::Kind::Err: return p;
        case Process::Kind::Res:
            if (stops_at_session(p->session())) return p;
            return Process::res(p->session(), annotation(p->annotation()), run(p->body()));
        case Process::Kind::Select:
            return Process::select(value(p->channel()), p->peer(), p->label(), value(p->payload()), run(p->cont()));
        case Process::Kind::Branch: {
            std::vector<BranchArm> arms;
            for (const auto& a : p->arms())
                arms.push_back(BranchArm{a.label, a.var, a.var && stops_at_var(*a.var) ? a.body : run(a.body)});
            return Process::branch(value(p->channel()), p->peer(), std::move(arms));
        }
        case Process::Kind::Def: {
            if (stops_at_proc(p->name())) return p;
            bool shadow = false;
            for (const auto& prm : p->params()) shadow = shadow || stops_at_var(prm.name);
            return Process::def(proc(p->name()), p->params(), shadow ? p->body() : run(p->body()), run(p->scope()));
        }
        case Process::Kind::Call: {
            std::vector<Value> args;
            for (const auto& v : p->args()) args.push_back(value(v));
            return Process::call(proc(p->name()), std::move(args));
        }
        case Process::Kind::Par: return Process::par(run(p->left()), run(p->right()));
        }
        return p;
    }
};

TypingContext rename_context(const TypingContext& ctx, const SessionName& from, const SessionName& to) {
    TypingContext out;
    for (const auto& [k, v] : ctx) {
        if (const auto* ep = std::get_if<Endpoint>(&k); ep && ep->session == from) out.insert(Endpoint{to, ep->role}, v);
        else out.insert(k, v);
    }
    return out;
}

ProcessPtr rename_session(const ProcessPtr& p, const SessionName& from, const SessionName& to) {
    Rewriter rw;
    rw.value = [&](const Value& v) -> Value {
        if (v.is_endpoint() && v.endpoint().session == from) return Endpoint{to, v.endpoint().role};
        return v;
    };
    rw.stops_at_session = [&](const SessionName& s) { return s == from; };
    return rw.run(p);
}

ProcessPtr rename_proc(const ProcessPtr& p, const ProcVar& from, const ProcVar& to) {
    Rewriter rw;
    rw.value = [](const Value& v) { return v; };
    rw.stops_at_proc = [&](const ProcVar& x) { return x == from; };
    rw.proc = [&](const ProcVar& x) { return x == from ? to : x; };
    return rw.run(p);
}

void all_sessions(const Process& p, std::set<SessionName>& out) {
    auto add = [&](const Value& v) { value_sessions(v, out); };
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: return;
    case Process::Kind::Res:
        out.insert(p.session());
        all_sessions(*p.body(), out);
        return;
    case Process::Kind::Select:
        add(p.channel());
        add(p.payload());
        all_sessions(*p.cont(), out);
        return;
    case Process::Kind::Branch:
        add(p.channel());
        for (const auto& a : p.arms()) all_sessions(*a.body, out);
        return;
    case Process::Kind::Def:
        all_sessions(*p.body(), out);
        all_sessions(*p.scope(), out);
        return;
    case Process::Kind::Call:
        for (const auto& v : p.args()) add(v);
        return;
    case Process::Kind::Par:
        all_sessions(*p.left(), out);
        all_sessions(*p.right(), out);
        return;
    }
}

void all_procs(const Process& p, std::set<ProcVar>& out) {
    switch (p.kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err: return;
    case Process::Kind::Res: all_procs(*p.body(), out); return;
    case Process::Kind::Select: all_procs(*p.cont(), out); return;
    case Process::Kind::Branch:
        for (const auto& a : p.arms()) all_procs(*a.body, out);
        return;
    case Process::Kind::Def:
        out.insert(p.name());
        all_procs(*p.body(), out);
        all_procs(*p.scope(), out);
        return;
    case Process::Kind::Call: out.insert(p.name()); return;
    case Process::Kind::Par:
        all_procs(*p.left(), out);
        all_procs(*p.right(), out);
        return;
    }
}

template <typename Name>
Name fresh_name(const Name& base, const std::set<Name>& used) {
    if (!used.count(base)) return base;
    for (std::size_t k = 1;; ++k) {
        Name candidate(base.str() + "_" + std::to_string(k));
        if (!used.count(candidate)) return candidate;
    }
}

/// Renames every restriction and definition bound inside p away from `used`.
ProcessPtr freshen(const ProcessPtr& p, std::set<SessionName>& sessions, std::set<ProcVar>& procs) {
    switch (p->kind()) {
    case Process::Kind::Nil:
    case Process::Kind::Err:
    case Process::Kind::Call: return p;
    case Process::Kind::Res: {
        auto s = fresh_name(p->session(), sessions);
        sessions.insert(s);
        auto body = s == p->session() ? p->body() : rename_session(p->body(), p->session(), s);
        Annotation ann = p->annotation();
        if (ann.context && s != p->session()) ann.context = rename_context(*ann.context, p->session(), s);
        return Process::res(s, std::move(ann), freshen(body, sessions, procs));
    }
    case Process::Kind::Select:
        return Process::select(p->channel(), p->peer(), p->label(), p->payload(), freshen(p->cont(), sessions, procs));
    case Process::Kind::Branch: {
        std::vector<BranchArm> arms;
        for (const auto& a : p->arms()) arms.push_back(BranchArm{a.label, a.var, freshen(a.body, sessions, procs)});
        return Process::branch(p->channel(), p->peer(), std::move(arms));
    }
    case Process::Kind::Def: {
        auto x = fresh_name(p->name(), procs);
        procs.insert(x);
        ProcessPtr renamed = p;
        if (x != p->name()) {
            renamed = Process::def(x, p->params(), rename_proc(p->body(), p->name(), x),
                                   rename_proc(p->scope(), p->name(), x));
        }
        return Process::def(x, renamed->params(), freshen(renamed->body(), sessions, procs),
                            freshen(renamed->scope(), sessions, procs));
    }
    case Process::Kind::Par:
        return Process::par(freshen(p->left(), sessions, procs), freshen(p->right(), sessions, procs));
    }
    return p;
}

}  // namespace

ProcessPtr substitute(const ProcessPtr& p, const VarName& x, const Value& v) {
    Rewriter rw;
    rw.value = [&](const Value& w) { return w.is_var() && w.var() == x ? v : w; };
    rw.stops_at_var = [&](const VarName& y) { return y == x; };
    return rw.run(p);
}

// ---------------------------------------------------------------------------
// Normal forms

const Definition* NormalForm::find_def(const ProcVar& x) const {
    for (const auto& d : defs)
        if (d.name == x) return &d;
    return nullptr;
}

const Restriction* NormalForm::find_restriction(const SessionName& s) const {
    for (const auto& r : restrictions)
        if (r.session == s) return &r;
    return nullptr;
}

namespace {

struct Normalizer {
    std::set<SessionName> sessions;  // every session name in sight
    std::set<ProcVar> procs;
    std::set<SessionName> bound;
    std::set<ProcVar> defined;
    NormalForm out;

    void flatten(const ProcessPtr& p) {
        switch (p->kind()) {
        case Process::Kind::Nil: return;
        case Process::Kind::Par:
            flatten(p->left());
            flatten(p->right());
            return;
        case Process::Kind::Res: {
            SessionName s = p->session();
            ProcessPtr body = p->body();
            Annotation ann = p->annotation();
            if (bound.count(s)) {
                s = fresh_name(s, sessions);
                body = rename_session(body, p->session(), s);
                if (ann.context) ann.context = rename_context(*ann.context, p->session(), s);
            }
            sessions.insert(s);
            bound.insert(s);
            out.restrictions.push_back(Restriction{s, std::move(ann)});
            flatten(body);
            return;
        }
        case Process::Kind::Def: {
            ProcVar x = p->name();
            ProcessPtr body = p->body();
            ProcessPtr scope = p->scope();
            if (defined.count(x)) {
                x = fresh_name(x, procs);
                body = rename_proc(body, p->name(), x);
                scope = rename_proc(scope, p->name(), x);
            }
            procs.insert(x);
            defined.insert(x);
            out.defs.push_back(Definition{x, p->params(), body});
            flatten(scope);
            return;
        }
        default: out.threads.push_back(p); return;
        }
    }

    void collect_garbage() {
        std::set<ProcVar> live_procs;
        std::vector<ProcVar> work;
        for (const auto& t : out.threads)
            for (const auto& x : free_proc_vars(*t)) work.push_back(x);
        while (!work.empty()) {
            auto x = work.back();
            work.pop_back();
            if (!live_procs.insert(x).second) continue;
            if (const auto* d = out.find_def(x))
                for (const auto& y : free_proc_vars(*d->body)) work.push_back(y);
        }
        std::vector<Definition> defs;
        for (auto& d : out.defs)
            if (live_procs.count(d.name)) defs.push_back(std::move(d));
        out.defs = std::move(defs);

        std::set<SessionName> used;
        for (const auto& t : out.threads) {
            auto f = free_sessions(*t);
            used.insert(f.begin(), f.end());
        }
        for (const auto& d : out.defs) {
            auto f = free_sessions(*d.body);
            used.insert(f.begin(), f.end());
        }
        std::vector<Restriction> rs;
        for (auto& r : out.restrictions)
            if (used.count(r.session)) rs.push_back(std::move(r));
        out.restrictions = std::move(rs);
    }
};

}  // namespace

NormalForm normalize(const ProcessPtr& p) {
    Normalizer n;
    all_sessions(*p, n.sessions);
    all_procs(*p, n.procs);
    // Free names must never be captured by a floated binder.
    auto fs = free_sessions(*p);
    n.bound.insert(fs.begin(), fs.end());
    auto fp = free_proc_vars(*p);
    n.defined.insert(fp.begin(), fp.end());
    n.flatten(p);
    n.collect_garbage();
    return std::move(n.out);
}

ProcessPtr denormalize(const NormalForm& nf) {
    ProcessPtr p = Process::par_all(nf.threads);
    for (std::size_t i = nf.defs.size(); i-- > 0;)
        p = Process::def(nf.defs[i].name, nf.defs[i].params, nf.defs[i].body, p);
    for (std::size_t i = nf.restrictions.size(); i-- > 0;)
        p = Process::res(nf.restrictions[i].session, nf.restrictions[i].annotation, p);
    return p;
}

std::string nf_key(const NormalForm& nf) {
    std::map<SessionName, SessionName> sren;
    std::map<ProcVar, ProcVar> pren;
    for (std::size_t i = 0; i < nf.restrictions.size(); ++i)
        sren.emplace(nf.restrictions[i].session, SessionName("%" + std::to_string(i)));
    for (std::size_t i = 0; i < nf.defs.size(); ++i) pren.emplace(nf.defs[i].name, ProcVar("%" + std::to_string(i)));
    Rewriter rw;
    rw.value = [&](const Value& v) -> Value {
        if (v.is_endpoint())
            if (auto it = sren.find(v.endpoint().session); it != sren.end()) return Endpoint{it->second, v.endpoint().role};
        return v;
    };
    rw.proc = [&](const ProcVar& x) {
        auto it = pren.find(x);
        return it == pren.end() ? x : it->second;
    };
    std::vector<std::string> threads;
    for (const auto& t : nf.threads) threads.push_back(print(*rw.run(t)));
    std::sort(threads.begin(), threads.end());
    std::string out;
    for (const auto& d : nf.defs) out += "def " + rw.proc(d.name).str() + "=" + print(*rw.run(d.body)) + ";";
    for (const auto& t : threads) out += t + "|";
    return out;
}

// ---------------------------------------------------------------------------
// Reduction

std::string_view to_string(Reduction::Rule r) noexcept {
    switch (r) {
    case Reduction::Rule::Comm: return "R-comm";
    case Reduction::Rule::Err: return "R-err";
    case Reduction::Rule::Call: return "R-call";
    }
    return "?";
}

namespace {

const Endpoint& endpoint_of(const Value& chan) {
    if (chan.is_literal()) throw DynamicFault("literal used as a channel");
    return chan.endpoint();
}

bool is_live_channel(const Value& chan) {
    if (chan.is_literal()) throw DynamicFault("literal used as a channel");
    return chan.is_endpoint();
}

void advance_annotation(Annotation& ann, const TransitionLabel& label) {
    if (ann.context) {
        if (auto next = apply_transmission(*ann.context, label)) ann.context = std::move(next);
    }
    if (ann.global) {
        for (const auto& st : global_steps(ann.global, label.session)) {
            if (!(st.label == label)) continue;
            ann.global = st.target;
            break;
        }
    }
}

NormalForm rebuild(const NormalForm& base, std::vector<ProcessPtr> threads) {
    NormalForm nf = base;
    nf.threads = std::move(threads);
    return normalize(denormalize(nf));
}

}  // namespace

std::vector<Reduction> reduce_steps(const NormalForm& nf) {
    std::vector<Reduction> out;
    const auto& ts = nf.threads;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& sel = ts[i];
        if (sel->kind() != Process::Kind::Select || !is_live_channel(sel->channel())) continue;
        const Endpoint& from = endpoint_of(sel->channel());
        for (std::size_t j = 0; j < ts.size(); ++j) {
            const auto& br = ts[j];
            if (j == i || br->kind() != Process::Kind::Branch || !is_live_channel(br->channel())) continue;
            const Endpoint& to = endpoint_of(br->channel());
            if (to.session != from.session || to.role != sel->peer() || br->peer() != from.role) continue;
            auto label = TransitionLabel::transmission(from.session, from.role, to.role, sel->label());
            std::vector<ProcessPtr> rest;
            for (std::size_t k = 0; k < ts.size(); ++k)
                if (k != i && k != j) rest.push_back(ts[k]);
            const BranchArm* arm = br->find_arm(sel->label());
            if (!arm) {
                rest.push_back(Process::err());
                out.push_back(Reduction{Reduction::Rule::Err, label, rebuild(nf, std::move(rest))});
                continue;
            }
            rest.push_back(sel->cont());
            rest.push_back(arm->var ? substitute(arm->body, *arm->var, sel->payload()) : arm->body);
            NormalForm base = nf;
            for (auto& r : base.restrictions)
                if (r.session == from.session) advance_annotation(r.annotation, label);
            out.push_back(Reduction{Reduction::Rule::Comm, label, rebuild(base, std::move(rest))});
        }
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& c = ts[i];
        if (c->kind() != Process::Kind::Call) continue;
        const Definition* d = nf.find_def(c->name());
        if (!d) throw DynamicFault("call to undefined process " + c->name().str());
        if (d->params.size() != c->args().size())
            throw DynamicFault("arity mismatch calling " + c->name().str());
        ProcessPtr body = d->body;
        for (std::size_t k = 0; k < d->params.size(); ++k) body = substitute(body, d->params[k].name, c->args()[k]);
        std::set<SessionName> sessions;
        std::set<ProcVar> procs;
        auto whole = denormalize(nf);
        all_sessions(*whole, sessions);
        all_procs(*whole, procs);
        body = freshen(body, sessions, procs);
        std::vector<ProcessPtr> rest;
        for (std::size_t k = 0; k < ts.size(); ++k)
            if (k != i) rest.push_back(ts[k]);
        rest.push_back(body);
        out.push_back(Reduction{Reduction::Rule::Call, std::nullopt, rebuild(nf, std::move(rest))});
    }
    return out;
}

std::vector<Reduction> reduce_steps(const ProcessPtr& p) { return reduce_steps(normalize(p)); }

bool has_error(const NormalForm& nf) {
    return std::any_of(nf.threads.begin(), nf.threads.end(),
                       [](const ProcessPtr& t) { return t->kind() == Process::Kind::Err; });
}

bool has_error(const ProcessPtr& p) { return has_error(normalize(p)); }

std::string_view to_string(Trace::Outcome o) noexcept {
    switch (o) {
    case Trace::Outcome::Terminated: return "terminated";
    case Trace::Outcome::Stuck: return "stuck";
    case Trace::Outcome::Error: return "error";
    case Trace::Outcome::BudgetExhausted: return "budget-exhausted";
    case Trace::Outcome::DynamicFault: return "dynamic-fault";
    }
    return "?";
}

Trace run(const ProcessPtr& p, std::size_t max_steps, std::uint64_t seed) {
    Trace tr;
    std::mt19937_64 rng(seed);
    tr.initial = normalize(p);
    NormalForm cur = tr.initial;
    for (std::size_t step = 1;; ++step) {
        if (has_error(cur)) {
            tr.outcome = Trace::Outcome::Error;
            return tr;
        }
        std::vector<Reduction> next;
        try {
            next = reduce_steps(cur);
        } catch (const DynamicFault& e) {
            tr.outcome = Trace::Outcome::DynamicFault;
            tr.fault = e.what();
            return tr;
        }
        if (next.empty()) {
            tr.outcome = cur.is_nil() ? Trace::Outcome::Terminated : Trace::Outcome::Stuck;
            return tr;
        }
        if (step > max_steps) {
            tr.outcome = Trace::Outcome::BudgetExhausted;
            return tr;
        }
        std::uniform_int_distribution<std::size_t> pick(0, next.size() - 1);
        auto& chosen = next[pick(rng)];
        cur = chosen.result;
        tr.steps.push_back(Trace::Entry{step, chosen.rule, chosen.label, chosen.result});
    }
}

}  // namespace mpst
