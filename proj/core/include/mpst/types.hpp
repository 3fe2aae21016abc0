#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mpst/ident.hpp"

namespace mpst {

/// Raised when an operation needs a closed, contractive type and gets
/// something else.
class IllFormed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BasicSort : std::uint8_t { Int, Bool, Real, Str, Unit };

std::string_view to_string(BasicSort b) noexcept;
std::optional<BasicSort> parse_basic_sort(std::string_view word) noexcept;

class LocalType;
class GlobalType;
using LocalTypePtr = std::shared_ptr<const LocalType>;
using GlobalTypePtr = std::shared_ptr<const GlobalType>;

/// Message payload: a basic sort or a (delegated) session type.
class Sort {
public:
    Sort(BasicSort b) : value_(b) {}                     // NOLINT(google-explicit-constructor)
    Sort(LocalTypePtr t);                                // NOLINT(google-explicit-constructor)

    bool is_basic() const noexcept { return std::holds_alternative<BasicSort>(value_); }
    bool is_session() const noexcept { return !is_basic(); }
    BasicSort basic() const { return std::get<BasicSort>(value_); }
    const LocalTypePtr& session() const { return std::get<LocalTypePtr>(value_); }

private:
    std::variant<BasicSort, LocalTypePtr> value_;
};

/// Deep structural equality (binder names significant).
bool operator==(const Sort& a, const Sort& b);

struct LocalBranch {
    Label label;
    Sort payload;
    LocalTypePtr cont;
};

class LocalType {
public:
    enum class Kind : std::uint8_t { Internal, External, Rec, Var, End };

    static LocalTypePtr internal(Role peer, std::vector<LocalBranch> branches);
    static LocalTypePtr external(Role peer, std::vector<LocalBranch> branches);
    static LocalTypePtr rec(RecVar var, LocalTypePtr body);
    static LocalTypePtr var(RecVar var);
    static LocalTypePtr end();

    Kind kind() const noexcept { return kind_; }
    bool is_choice() const noexcept { return kind_ == Kind::Internal || kind_ == Kind::External; }
    bool is_end() const noexcept { return kind_ == Kind::End; }

    const Role& peer() const noexcept { return peer_; }
    const std::vector<LocalBranch>& branches() const noexcept { return branches_; }
    const LocalBranch* find_branch(const Label& l) const noexcept;
    const RecVar& rec_var() const noexcept { return var_; }
    const LocalTypePtr& body() const noexcept { return body_; }

    // Only reachable through the factories above.
    struct Token {};
    LocalType(Token, Kind k, Role peer, std::vector<LocalBranch> br, RecVar v, LocalTypePtr body);

private:
    Kind kind_;
    Role peer_;
    std::vector<LocalBranch> branches_;
    RecVar var_;
    LocalTypePtr body_;
};

bool operator==(const LocalType& a, const LocalType& b);

struct GlobalBranch {
    Label label;
    Sort payload;
    GlobalTypePtr cont;
};

class GlobalType {
public:
    enum class Kind : std::uint8_t { Transmission, Rec, Var, End };

    static GlobalTypePtr transmission(Role from, Role to, std::vector<GlobalBranch> branches);
    static GlobalTypePtr rec(RecVar var, GlobalTypePtr body);
    static GlobalTypePtr var(RecVar var);
    static GlobalTypePtr end();

    Kind kind() const noexcept { return kind_; }
    bool is_end() const noexcept { return kind_ == Kind::End; }
    const Role& from() const noexcept { return from_; }
    const Role& to() const noexcept { return to_; }
    const std::vector<GlobalBranch>& branches() const noexcept { return branches_; }
    const RecVar& rec_var() const noexcept { return var_; }
    const GlobalTypePtr& body() const noexcept { return body_; }

    struct Token {};
    GlobalType(Token, Kind k, Role from, Role to, std::vector<GlobalBranch> br, RecVar v, GlobalTypePtr body);

private:
    Kind kind_;
    Role from_;
    Role to_;
    std::vector<GlobalBranch> branches_;
    RecVar var_;
    GlobalTypePtr body_;
};

bool operator==(const GlobalType& a, const GlobalType& b);

// ---------------------------------------------------------------------------
// Structural queries

/// Free recursion variables. For local types payloads are included, since a
/// payload may mention a variable bound by an enclosing binder.
std::set<RecVar> free_vars(const LocalType& t);
/// Free global recursion variables (payloads live in the local namespace).
std::set<RecVar> free_vars(const GlobalType& g);

/// `body` with every free occurrence of `v` replaced by `replacement`.
LocalTypePtr substitute(const LocalTypePtr& body, const RecVar& v, const LocalTypePtr& replacement);
GlobalTypePtr substitute(const GlobalTypePtr& body, const RecVar& v, const GlobalTypePtr& replacement);

/// Unfolds head recursion until the head is a choice/transmission or end.
/// Throws IllFormed on open or non-contractive input.
LocalTypePtr unfold_once(const LocalTypePtr& t);
GlobalTypePtr unfold_once(const GlobalTypePtr& g);

std::set<Role> roles_of(const GlobalType& g);

/// True when some payload (at any depth) mentions a recursion variable that
/// is not bound inside the payload itself, e.g. `rec t . q(+)l(t) . end`.
bool has_recursive_payload(const LocalType& t);

bool is_contractive(const LocalType& t);
bool is_contractive(const GlobalType& g);

// ---------------------------------------------------------------------------
// Well-formedness

struct Diagnostic {
    enum class Kind : std::uint8_t {
        OpenType,
        NonContractive,
        DuplicateLabel,
        SelfReception,
        OpenPayload,
    };
    Kind kind;
    std::string message;
    std::vector<std::string> path;  // branch labels from the root
};

std::string_view to_string(Diagnostic::Kind k) noexcept;

std::vector<Diagnostic> well_formed(const LocalType& t);
std::vector<Diagnostic> well_formed(const GlobalType& g);

// ---------------------------------------------------------------------------
// Alpha-equivalence

/// Opaque key; equal iff the types are alpha-equivalent (binders renamed to
/// de Bruijn indices, branch order ignored).
class CanonicalKey {
public:
    explicit CanonicalKey(std::string repr) : repr_(std::move(repr)) {}
    const std::string& repr() const noexcept { return repr_; }
    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;

private:
    std::string repr_;
};

CanonicalKey canonical_key(const LocalType& t);
CanonicalKey canonical_key(const GlobalType& g);
CanonicalKey canonical_key(const Sort& s);

bool alpha_equal(const Sort& a, const Sort& b);

// ---------------------------------------------------------------------------
// Typing contexts

struct Endpoint {
    SessionName session;
    Role role;
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

/// Either a session endpoint `s[p]` or a value variable `x`.
using ContextKey = std::variant<Endpoint, VarName>;

std::string to_string(const ContextKey& k);

class TypingContext {
public:
    using Map = std::map<ContextKey, Sort>;

    TypingContext() = default;
    TypingContext(std::initializer_list<Map::value_type> entries);

    bool contains(const ContextKey& k) const { return entries_.count(k) != 0; }
    const Sort* find(const ContextKey& k) const;
    const Sort& at(const ContextKey& k) const;

    /// Adds a fresh key; throws std::invalid_argument if already present.
    void insert(const ContextKey& k, Sort s);
    /// Adds or replaces.
    void assign(const ContextKey& k, Sort s);
    void erase(const ContextKey& k) { entries_.erase(k); }

    /// Composition; defined only for disjoint domains (throws otherwise).
    static TypingContext compose(const TypingContext& a, const TypingContext& b);

    TypingContext restrict_to(const SessionName& s) const;
    bool has_session(const SessionName& s) const;
    std::set<SessionName> sessions() const;
    std::vector<ContextKey> domain() const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    Map::const_iterator begin() const { return entries_.begin(); }
    Map::const_iterator end() const { return entries_.end(); }
    const Map& entries() const noexcept { return entries_; }

    friend bool operator==(const TypingContext& a, const TypingContext& b);

private:
    Map entries_;
};

// ---------------------------------------------------------------------------
// Transition labels

struct TransitionLabel {
    enum class Kind : std::uint8_t { Output, Input, Transmission };

    Kind kind = Kind::Transmission;
    SessionName session;
    Role subject;  // sender for Transmission
    Role peer;     // receiver for Transmission
    Label label;
    std::optional<Sort> payload;  // absent on Transmission

    static TransitionLabel output(SessionName s, Role p, Role q, Label l, Sort payload);
    static TransitionLabel input(SessionName s, Role p, Role q, Label l, Sort payload);
    static TransitionLabel transmission(SessionName s, Role from, Role to, Label l);

    const Role& from() const noexcept { return subject; }
    const Role& to() const noexcept { return peer; }
    std::set<Role> subjects() const;
};

bool operator==(const TransitionLabel& a, const TransitionLabel& b);
bool operator<(const TransitionLabel& a, const TransitionLabel& b);

}  // namespace mpst
