#include "mpst/types.hpp"

#include <algorithm>
#include <sstream>

namespace mpst {

std::string_view to_string(BasicSort b) noexcept {
    switch (b) {
    case BasicSort::Int: return "int";
    case BasicSort::Bool: return "bool";
    case BasicSort::Real: return "real";
    case BasicSort::Str: return "str";
    case BasicSort::Unit: return "unit";
    }
    return "?";
}

std::optional<BasicSort> parse_basic_sort(std::string_view word) noexcept {
    if (word == "int") return BasicSort::Int;
    if (word == "bool") return BasicSort::Bool;
    if (word == "real") return BasicSort::Real;
    if (word == "str") return BasicSort::Str;
    if (word == "unit") return BasicSort::Unit;
    return std::nullopt;
}

Sort::Sort(LocalTypePtr t) : value_(std::move(t)) {
    if (!std::get<LocalTypePtr>(value_)) throw std::invalid_argument("null session payload");
}

bool operator==(const Sort& a, const Sort& b) {
    if (a.is_basic() != b.is_basic()) return false;
    if (a.is_basic()) return a.basic() == b.basic();
    return *a.session() == *b.session();
}

// ---------------------------------------------------------------------------
// Local types

LocalType::LocalType(Token, Kind k, Role peer, std::vector<LocalBranch> br, RecVar v, LocalTypePtr body)
    : kind_(k), peer_(std::move(peer)), branches_(std::move(br)), var_(std::move(v)), body_(std::move(body)) {}

LocalTypePtr LocalType::internal(Role peer, std::vector<LocalBranch> branches) {
    if (branches.empty()) throw std::invalid_argument("internal choice needs at least one branch");
    return std::make_shared<const LocalType>(Token{}, Kind::Internal, std::move(peer), std::move(branches),
                                             RecVar{}, nullptr);
}

LocalTypePtr LocalType::external(Role peer, std::vector<LocalBranch> branches) {
    if (branches.empty()) throw std::invalid_argument("external choice needs at least one branch");
    return std::make_shared<const LocalType>(Token{}, Kind::External, std::move(peer), std::move(branches),
                                             RecVar{}, nullptr);
}

LocalTypePtr LocalType::rec(RecVar var, LocalTypePtr body) {
    if (!body) throw std::invalid_argument("null recursion body");
    return std::make_shared<const LocalType>(Token{}, Kind::Rec, Role{}, std::vector<LocalBranch>{},
                                             std::move(var), std::move(body));
}

LocalTypePtr LocalType::var(RecVar var) {
    return std::make_shared<const LocalType>(Token{}, Kind::Var, Role{}, std::vector<LocalBranch>{},
                                             std::move(var), nullptr);
}

LocalTypePtr LocalType::end() {
    static const LocalTypePtr kEnd = std::make_shared<const LocalType>(
        Token{}, Kind::End, Role{}, std::vector<LocalBranch>{}, RecVar{}, nullptr);
    return kEnd;
}

const LocalBranch* LocalType::find_branch(const Label& l) const noexcept {
    for (const auto& b : branches_)
        if (b.label == l) return &b;
    return nullptr;
}

bool operator==(const LocalType& a, const LocalType& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case LocalType::Kind::End: return true;
    case LocalType::Kind::Var: return a.rec_var() == b.rec_var();
    case LocalType::Kind::Rec: return a.rec_var() == b.rec_var() && *a.body() == *b.body();
    case LocalType::Kind::Internal:
    case LocalType::Kind::External:
        if (a.peer() != b.peer() || a.branches().size() != b.branches().size()) return false;
        for (std::size_t i = 0; i < a.branches().size(); ++i) {
            const auto& x = a.branches()[i];
            const auto& y = b.branches()[i];
            if (x.label != y.label || !(x.payload == y.payload) || !(*x.cont == *y.cont)) return false;
        }
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Global types

GlobalType::GlobalType(Token, Kind k, Role from, Role to, std::vector<GlobalBranch> br, RecVar v,
                       GlobalTypePtr body)
    : kind_(k), from_(std::move(from)), to_(std::move(to)), branches_(std::move(br)), var_(std::move(v)),
      body_(std::move(body)) {}

GlobalTypePtr GlobalType::transmission(Role from, Role to, std::vector<GlobalBranch> branches) {
    if (branches.empty()) throw std::invalid_argument("transmission needs at least one branch");
    return std::make_shared<const GlobalType>(Token{}, Kind::Transmission, std::move(from), std::move(to),
                                              std::move(branches), RecVar{}, nullptr);
}

GlobalTypePtr GlobalType::rec(RecVar var, GlobalTypePtr body) {
    if (!body) throw std::invalid_argument("null recursion body");
    return std::make_shared<const GlobalType>(Token{}, Kind::Rec, Role{}, Role{}, std::vector<GlobalBranch>{},
                                              std::move(var), std::move(body));
}

GlobalTypePtr GlobalType::var(RecVar var) {
    return std::make_shared<const GlobalType>(Token{}, Kind::Var, Role{}, Role{}, std::vector<GlobalBranch>{},
                                              std::move(var), nullptr);
}

GlobalTypePtr GlobalType::end() {
    static const GlobalTypePtr kEnd = std::make_shared<const GlobalType>(
        Token{}, Kind::End, Role{}, Role{}, std::vector<GlobalBranch>{}, RecVar{}, nullptr);
    return kEnd;
}

bool operator==(const GlobalType& a, const GlobalType& b) {
    if (&a == &b) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case GlobalType::Kind::End: return true;
    case GlobalType::Kind::Var: return a.rec_var() == b.rec_var();
    case GlobalType::Kind::Rec: return a.rec_var() == b.rec_var() && *a.body() == *b.body();
    case GlobalType::Kind::Transmission:
        if (a.from() != b.from() || a.to() != b.to() || a.branches().size() != b.branches().size())
            return false;
        for (std::size_t i = 0; i < a.branches().size(); ++i) {
            const auto& x = a.branches()[i];
            const auto& y = b.branches()[i];
            if (x.label != y.label || !(x.payload == y.payload) || !(*x.cont == *y.cont)) return false;
        }
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace {

void collect_free(const LocalType& t, std::vector<RecVar>& bound, std::set<RecVar>& out) {
    switch (t.kind()) {
    case LocalType::Kind::End: return;
    case LocalType::Kind::Var:
        if (std::find(bound.begin(), bound.end(), t.rec_var()) == bound.end()) out.insert(t.rec_var());
        return;
    case LocalType::Kind::Rec:
        bound.push_back(t.rec_var());
        collect_free(*t.body(), bound, out);
        bound.pop_back();
        return;
    case LocalType::Kind::Internal:
    case LocalType::Kind::External:
        for (const auto& b : t.branches()) {
            if (b.payload.is_session()) collect_free(*b.payload.session(), bound, out);
            collect_free(*b.cont, bound, out);
        }
        return;
    }
}

void collect_free(const GlobalType& g, std::vector<RecVar>& bound, std::set<RecVar>& out) {
    switch (g.kind()) {
    case GlobalType::Kind::End: return;
    case GlobalType::Kind::Var:
        if (std::find(bound.begin(), bound.end(), g.rec_var()) == bound.end()) out.insert(g.rec_var());
        return;
    case GlobalType::Kind::Rec:
        bound.push_back(g.rec_var());
        collect_free(*g.body(), bound, out);
        bound.pop_back();
        return;
    case GlobalType::Kind::Transmission:
        for (const auto& b : g.branches()) collect_free(*b.cont, bound, out);
        return;
    }
}

}  // namespace

std::set<RecVar> free_vars(const LocalType& t) {
    std::vector<RecVar> bound;
    std::set<RecVar> out;
    collect_free(t, bound, out);
    return out;
}

std::set<RecVar> free_vars(const GlobalType& g) {
    std::vector<RecVar> bound;
    std::set<RecVar> out;
    collect_free(g, bound, out);
    return out;
}

LocalTypePtr substitute(const LocalTypePtr& body, const RecVar& v, const LocalTypePtr& replacement) {
    switch (body->kind()) {
    case LocalType::Kind::End: return body;
    case LocalType::Kind::Var: return body->rec_var() == v ? replacement : body;
    case LocalType::Kind::Rec: {
        if (body->rec_var() == v) return body;
        auto nb = substitute(body->body(), v, replacement);
        return nb == body->body() ? body : LocalType::rec(body->rec_var(), std::move(nb));
    }
    case LocalType::Kind::Internal:
    case LocalType::Kind::External: {
        bool changed = false;
        std::vector<LocalBranch> branches;
        branches.reserve(body->branches().size());
        for (const auto& b : body->branches()) {
            Sort payload = b.payload;
            if (b.payload.is_session()) {
                auto np = substitute(b.payload.session(), v, replacement);
                if (np != b.payload.session()) {
                    payload = Sort(np);
                    changed = true;
                }
            }
            auto nc = substitute(b.cont, v, replacement);
            if (nc != b.cont) changed = true;
            branches.push_back(LocalBranch{b.label, std::move(payload), std::move(nc)});
        }
        if (!changed) return body;
        return body->kind() == LocalType::Kind::Internal ? LocalType::internal(body->peer(), std::move(branches))
                                                         : LocalType::external(body->peer(), std::move(branches));
    }
    }
    return body;
}

GlobalTypePtr substitute(const GlobalTypePtr& body, const RecVar& v, const GlobalTypePtr& replacement) {
    switch (body->kind()) {
    case GlobalType::Kind::End: return body;
    case GlobalType::Kind::Var: return body->rec_var() == v ? replacement : body;
    case GlobalType::Kind::Rec: {
        if (body->rec_var() == v) return body;
        auto nb = substitute(body->body(), v, replacement);
        return nb == body->body() ? body : GlobalType::rec(body->rec_var(), std::move(nb));
    }
    case GlobalType::Kind::Transmission: {
        bool changed = false;
        std::vector<GlobalBranch> branches;
        branches.reserve(body->branches().size());
        for (const auto& b : body->branches()) {
            auto nc = substitute(b.cont, v, replacement);
            if (nc != b.cont) changed = true;
            branches.push_back(GlobalBranch{b.label, b.payload, std::move(nc)});
        }
        if (!changed) return body;
        return GlobalType::transmission(body->from(), body->to(), std::move(branches));
    }
    }
    return body;
}

namespace {

template <typename Ptr>
std::size_t rec_chain_length(const Ptr& t) {
    std::size_t n = 0;
    const auto* cur = t.get();
    while (cur->kind() == std::remove_cvref_t<decltype(*cur)>::Kind::Rec) {
        ++n;
        cur = cur->body().get();
    }
    return n;
}

}  // namespace

// Contractive closed input reaches a prefix within as many unfoldings as there
// are binders at the head; anything else is a guard violation or a free var.
LocalTypePtr unfold_once(const LocalTypePtr& t) {
    if (t->kind() == LocalType::Kind::Var) throw IllFormed("unfold of open type: free variable " + t->rec_var().str());
    if (t->kind() != LocalType::Kind::Rec) return t;
    const std::size_t limit = rec_chain_length(t);
    LocalTypePtr cur = t;
    for (std::size_t i = 0; i < limit && cur->kind() == LocalType::Kind::Rec; ++i)
        cur = substitute(cur->body(), cur->rec_var(), cur);
    if (cur->kind() == LocalType::Kind::Rec) throw IllFormed("unfold of non-contractive type");
    if (cur->kind() == LocalType::Kind::Var) throw IllFormed("unfold of open type: free variable " + cur->rec_var().str());
    return cur;
}

GlobalTypePtr unfold_once(const GlobalTypePtr& g) {
    if (g->kind() == GlobalType::Kind::Var) throw IllFormed("unfold of open type: free variable " + g->rec_var().str());
    if (g->kind() != GlobalType::Kind::Rec) return g;
    const std::size_t limit = rec_chain_length(g);
    GlobalTypePtr cur = g;
    for (std::size_t i = 0; i < limit && cur->kind() == GlobalType::Kind::Rec; ++i)
        cur = substitute(cur->body(), cur->rec_var(), cur);
    if (cur->kind() == GlobalType::Kind::Rec) throw IllFormed("unfold of non-contractive type");
    if (cur->kind() == GlobalType::Kind::Var) throw IllFormed("unfold of open type: free variable " + cur->rec_var().str());
    return cur;
}

namespace {

void collect_roles(const GlobalType& g, std::set<Role>& out) {
    switch (g.kind()) {
    case GlobalType::Kind::End:
    case GlobalType::Kind::Var: return;
    case GlobalType::Kind::Rec: collect_roles(*g.body(), out); return;
    case GlobalType::Kind::Transmission:
        out.insert(g.from());
        out.insert(g.to());
        for (const auto& b : g.branches()) collect_roles(*b.cont, out);
        return;
    }
}

bool payload_recursive(const LocalType& t) {
    if (!t.is_choice()) return t.kind() == LocalType::Kind::Rec && payload_recursive(*t.body());
    for (const auto& b : t.branches()) {
        if (b.payload.is_session()) {
            if (!free_vars(*b.payload.session()).empty()) return true;
            if (payload_recursive(*b.payload.session())) return true;
        }
        if (payload_recursive(*b.cont)) return true;
    }
    return false;
}

bool contractive(const LocalType& t, std::vector<RecVar>& unguarded) {
    switch (t.kind()) {
    case LocalType::Kind::End: return true;
    case LocalType::Kind::Var:
        return std::find(unguarded.begin(), unguarded.end(), t.rec_var()) == unguarded.end();
    case LocalType::Kind::Rec: {
        unguarded.push_back(t.rec_var());
        bool ok = contractive(*t.body(), unguarded);
        unguarded.pop_back();
        return ok;
    }
    case LocalType::Kind::Internal:
    case LocalType::Kind::External:
        for (const auto& b : t.branches()) {
            std::vector<RecVar> fresh;
            if (b.payload.is_session() && !contractive(*b.payload.session(), fresh)) return false;
            if (!contractive(*b.cont, fresh)) return false;
        }
        return true;
    }
    return true;
}

bool contractive(const GlobalType& g, std::vector<RecVar>& unguarded) {
    switch (g.kind()) {
    case GlobalType::Kind::End: return true;
    case GlobalType::Kind::Var:
        return std::find(unguarded.begin(), unguarded.end(), g.rec_var()) == unguarded.end();
    case GlobalType::Kind::Rec: {
        unguarded.push_back(g.rec_var());
        bool ok = contractive(*g.body(), unguarded);
        unguarded.pop_back();
        return ok;
    }
    case GlobalType::Kind::Transmission:
        for (const auto& b : g.branches()) {
            std::vector<RecVar> fresh;
            if (b.payload.is_session() && !is_contractive(*b.payload.session())) return false;
            if (!contractive(*b.cont, fresh)) return false;
        }
        return true;
    }
    return true;
}

}  // namespace

std::set<Role> roles_of(const GlobalType& g) {
    std::set<Role> out;
    collect_roles(g, out);
    return out;
}

bool has_recursive_payload(const LocalType& t) { return payload_recursive(t); }

bool is_contractive(const LocalType& t) {
    std::vector<RecVar> unguarded;
    return contractive(t, unguarded);
}

bool is_contractive(const GlobalType& g) {
    std::vector<RecVar> unguarded;
    return contractive(g, unguarded);
}

// ---------------------------------------------------------------------------
// Well-formedness

std::string_view to_string(Diagnostic::Kind k) noexcept {
    switch (k) {
    case Diagnostic::Kind::OpenType: return "OpenType";
    case Diagnostic::Kind::NonContractive: return "NonContractive";
    case Diagnostic::Kind::DuplicateLabel: return "DuplicateLabel";
    case Diagnostic::Kind::SelfReception: return "SelfReception";
    case Diagnostic::Kind::OpenPayload: return "OpenPayload";
    }
    return "?";
}

namespace {

struct WfWalker {
    std::vector<Diagnostic> out;
    std::vector<std::string> path;

    void report(Diagnostic::Kind k, std::string msg) { out.push_back(Diagnostic{k, std::move(msg), path}); }

    void check_labels(const auto& branches) {
        std::set<Label> seen;
        for (const auto& b : branches)
            if (!seen.insert(b.label).second) report(Diagnostic::Kind::DuplicateLabel, "duplicate label " + b.label.str());
    }

    // Payload session types must be closed on their own.
    void check_payload(const Sort& s, const Label& l) {
        if (!s.is_session()) return;
        path.push_back(l.str() + "(payload)");
        auto fv = free_vars(*s.session());
        if (!fv.empty()) report(Diagnostic::Kind::OpenPayload, "payload mentions recursion variable " + fv.begin()->str());
        else walk_local_body(*s.session());
        path.pop_back();
    }

    void walk_local_body(const LocalType& t) {
        switch (t.kind()) {
        case LocalType::Kind::End:
        case LocalType::Kind::Var: return;
        case LocalType::Kind::Rec: walk_local_body(*t.body()); return;
        case LocalType::Kind::Internal:
        case LocalType::Kind::External:
            check_labels(t.branches());
            for (const auto& b : t.branches()) {
                check_payload(b.payload, b.label);
                path.push_back(b.label.str());
                walk_local_body(*b.cont);
                path.pop_back();
            }
            return;
        }
    }

    void walk_global_body(const GlobalType& g) {
        switch (g.kind()) {
        case GlobalType::Kind::End:
        case GlobalType::Kind::Var: return;
        case GlobalType::Kind::Rec: walk_global_body(*g.body()); return;
        case GlobalType::Kind::Transmission:
            if (g.from() == g.to()) report(Diagnostic::Kind::SelfReception, "self reception at role " + g.from().str());
            check_labels(g.branches());
            for (const auto& b : g.branches()) {
                check_payload(b.payload, b.label);
                path.push_back(b.label.str());
                walk_global_body(*b.cont);
                path.pop_back();
            }
            return;
        }
    }
};

}  // namespace

std::vector<Diagnostic> well_formed(const LocalType& t) {
    WfWalker w;
    auto fv = free_vars(t);
    for (const auto& v : fv) w.report(Diagnostic::Kind::OpenType, "free recursion variable " + v.str());
    if (!is_contractive(t)) w.report(Diagnostic::Kind::NonContractive, "recursion variable not guarded by a prefix");
    w.walk_local_body(t);
    return std::move(w.out);
}

std::vector<Diagnostic> well_formed(const GlobalType& g) {
    WfWalker w;
    auto fv = free_vars(g);
    for (const auto& v : fv) w.report(Diagnostic::Kind::OpenType, "free recursion variable " + v.str());
    if (!is_contractive(g)) w.report(Diagnostic::Kind::NonContractive, "recursion variable not guarded by a prefix");
    w.walk_global_body(g);
    return std::move(w.out);
}

// ---------------------------------------------------------------------------
// Canonical keys

namespace {

struct KeyWriter {
    bool allow_free = false;
    std::vector<RecVar> local_binders;
    std::vector<RecVar> global_binders;

    static std::size_t index_of(const std::vector<RecVar>& stack, const RecVar& v) {
        for (std::size_t i = stack.size(); i-- > 0;)
            if (stack[i] == v) return stack.size() - 1 - i;
        return static_cast<std::size_t>(-1);
    }

    void sort(const Sort& s, std::string& out) {
        if (s.is_basic()) {
            out += '#';
            out += to_string(s.basic());
        } else {
            out += '<';
            local(*s.session(), out);
            out += '>';
        }
    }

    void local(const LocalType& t, std::string& out) {
        switch (t.kind()) {
        case LocalType::Kind::End: out += 'e'; return;
        case LocalType::Kind::Var: {
            auto idx = index_of(local_binders, t.rec_var());
            if (idx == static_cast<std::size_t>(-1)) {
                if (!allow_free) throw IllFormed("canonical key of open type: free variable " + t.rec_var().str());
                out += "f:" + t.rec_var().str() + ';';
            } else {
                out += 'v' + std::to_string(idx) + ';';
            }
            return;
        }
        case LocalType::Kind::Rec:
            local_binders.push_back(t.rec_var());
            out += "m(";
            local(*t.body(), out);
            out += ')';
            local_binders.pop_back();
            return;
        case LocalType::Kind::Internal:
        case LocalType::Kind::External: {
            out += t.kind() == LocalType::Kind::Internal ? '+' : '&';
            out += t.peer().str();
            out += '{';
            std::vector<std::string> parts;
            for (const auto& b : t.branches()) {
                std::string p = b.label.str() + ':';
                sort(b.payload, p);
                p += '.';
                local(*b.cont, p);
                parts.push_back(std::move(p));
            }
            std::sort(parts.begin(), parts.end());
            for (const auto& p : parts) out += p + ',';
            out += '}';
            return;
        }
        }
    }

    void global(const GlobalType& g, std::string& out) {
        switch (g.kind()) {
        case GlobalType::Kind::End: out += 'e'; return;
        case GlobalType::Kind::Var: {
            auto idx = index_of(global_binders, g.rec_var());
            if (idx == static_cast<std::size_t>(-1)) {
                if (!allow_free) throw IllFormed("canonical key of open type: free variable " + g.rec_var().str());
                out += "f:" + g.rec_var().str() + ';';
            } else {
                out += 'v' + std::to_string(idx) + ';';
            }
            return;
        }
        case GlobalType::Kind::Rec:
            global_binders.push_back(g.rec_var());
            out += "m(";
            global(*g.body(), out);
            out += ')';
            global_binders.pop_back();
            return;
        case GlobalType::Kind::Transmission: {
            out += g.from().str() + '>' + g.to().str() + '{';
            std::vector<std::string> parts;
            for (const auto& b : g.branches()) {
                std::string p = b.label.str() + ':';
                KeyWriter payload_writer{allow_free, {}, {}};
                payload_writer.sort(b.payload, p);
                p += '.';
                global(*b.cont, p);
                parts.push_back(std::move(p));
            }
            std::sort(parts.begin(), parts.end());
            for (const auto& p : parts) out += p + ',';
            out += '}';
            return;
        }
        }
    }
};

}  // namespace

CanonicalKey canonical_key(const LocalType& t) {
    KeyWriter w;
    std::string out;
    w.local(t, out);
    return CanonicalKey(std::move(out));
}

CanonicalKey canonical_key(const GlobalType& g) {
    KeyWriter w;
    std::string out;
    w.global(g, out);
    return CanonicalKey(std::move(out));
}

CanonicalKey canonical_key(const Sort& s) {
    KeyWriter w;
    std::string out;
    w.sort(s, out);
    return CanonicalKey(std::move(out));
}

bool alpha_equal(const Sort& a, const Sort& b) {
    KeyWriter wa{true, {}, {}};
    KeyWriter wb{true, {}, {}};
    std::string ka;
    std::string kb;
    wa.sort(a, ka);
    wb.sort(b, kb);
    return ka == kb;
}

// ---------------------------------------------------------------------------
// Typing contexts

std::string to_string(const ContextKey& k) {
    if (const auto* e = std::get_if<Endpoint>(&k)) return e->session.str() + "[" + e->role.str() + "]";
    return std::get<VarName>(k).str();
}

TypingContext::TypingContext(std::initializer_list<Map::value_type> entries) {
    for (const auto& [k, v] : entries) insert(k, v);
}

const Sort* TypingContext::find(const ContextKey& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? nullptr : &it->second;
}

const Sort& TypingContext::at(const ContextKey& k) const {
    auto it = entries_.find(k);
    if (it == entries_.end()) throw std::out_of_range("no context entry for " + to_string(k));
    return it->second;
}

void TypingContext::insert(const ContextKey& k, Sort s) {
    if (!entries_.emplace(k, std::move(s)).second)
        throw std::invalid_argument("duplicate context entry for " + to_string(k));
}

void TypingContext::assign(const ContextKey& k, Sort s) { entries_.insert_or_assign(k, std::move(s)); }

TypingContext TypingContext::compose(const TypingContext& a, const TypingContext& b) {
    TypingContext out = a;
    for (const auto& [k, v] : b.entries_) out.insert(k, v);
    return out;
}

TypingContext TypingContext::restrict_to(const SessionName& s) const {
    TypingContext out;
    for (const auto& [k, v] : entries_)
        if (const auto* e = std::get_if<Endpoint>(&k); e && e->session == s) out.entries_.emplace(k, v);
    return out;
}

bool TypingContext::has_session(const SessionName& s) const {
    for (const auto& [k, v] : entries_)
        if (const auto* e = std::get_if<Endpoint>(&k); e && e->session == s) return true;
    return false;
}

std::set<SessionName> TypingContext::sessions() const {
    std::set<SessionName> out;
    for (const auto& [k, v] : entries_)
        if (const auto* e = std::get_if<Endpoint>(&k)) out.insert(e->session);
    return out;
}

std::vector<ContextKey> TypingContext::domain() const {
    std::vector<ContextKey> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
}

bool operator==(const TypingContext& a, const TypingContext& b) { return a.entries_ == b.entries_; }

// ---------------------------------------------------------------------------
// Labels

TransitionLabel TransitionLabel::output(SessionName s, Role p, Role q, Label l, Sort payload) {
    return TransitionLabel{Kind::Output, std::move(s), std::move(p), std::move(q), std::move(l), std::move(payload)};
}

TransitionLabel TransitionLabel::input(SessionName s, Role p, Role q, Label l, Sort payload) {
    return TransitionLabel{Kind::Input, std::move(s), std::move(p), std::move(q), std::move(l), std::move(payload)};
}

TransitionLabel TransitionLabel::transmission(SessionName s, Role from, Role to, Label l) {
    return TransitionLabel{Kind::Transmission, std::move(s), std::move(from), std::move(to), std::move(l),
                           std::nullopt};
}

std::set<Role> TransitionLabel::subjects() const {
    if (kind == Kind::Transmission) return {subject, peer};
    return {subject};
}

bool operator==(const TransitionLabel& a, const TransitionLabel& b) {
    if (a.kind != b.kind || a.session != b.session || a.subject != b.subject || a.peer != b.peer ||
        a.label != b.label)
        return false;
    if (a.payload.has_value() != b.payload.has_value()) return false;
    return !a.payload || alpha_equal(*a.payload, *b.payload);
}

bool operator<(const TransitionLabel& a, const TransitionLabel& b) {
    auto tie = [](const TransitionLabel& x) { return std::tie(x.kind, x.session, x.subject, x.peer, x.label); };
    if (tie(a) != tie(b)) return tie(a) < tie(b);
    if (a.payload.has_value() != b.payload.has_value()) return !a.payload.has_value();
    if (!a.payload) return false;
    KeyWriter wa{true, {}, {}};
    KeyWriter wb{true, {}, {}};
    std::string ka;
    std::string kb;
    wa.sort(*a.payload, ka);
    wb.sort(*b.payload, kb);
    return ka < kb;
}

}  // namespace mpst
