#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mpst/types.hpp"

namespace mpst {

struct Unit {
    friend bool operator==(Unit, Unit) { return true; }
};

using Literal = std::variant<std::int64_t, double, bool, std::string, Unit>;

BasicSort sort_of(const Literal& l) noexcept;

/// Literal, value variable, or session endpoint.
class Value {
public:
    Value(Literal l) : v_(std::move(l)) {}   // NOLINT(google-explicit-constructor)
    Value(VarName x) : v_(std::move(x)) {}   // NOLINT(google-explicit-constructor)
    Value(Endpoint e) : v_(std::move(e)) {}  // NOLINT(google-explicit-constructor)

    bool is_literal() const noexcept { return v_.index() == 0; }
    bool is_var() const noexcept { return v_.index() == 1; }
    bool is_endpoint() const noexcept { return v_.index() == 2; }
    const Literal& literal() const { return std::get<0>(v_); }
    const VarName& var() const { return std::get<1>(v_); }
    const Endpoint& endpoint() const { return std::get<2>(v_); }

    friend bool operator==(const Value&, const Value&) = default;

private:
    std::variant<Literal, VarName, Endpoint> v_;
};

/// Restriction annotation: a global type, an explicit context, or both.
struct Annotation {
    GlobalTypePtr global;                 // may be null when only a context is given
    std::optional<TypingContext> context;
};

class Process;
using ProcessPtr = std::shared_ptr<const Process>;

struct BranchArm {
    Label label;
    std::optional<VarName> var;
    ProcessPtr body;
};

struct Param {
    VarName name;
    Sort sort;
};

class Process {
public:
    enum class Kind : std::uint8_t { Nil, Res, Select, Branch, Def, Call, Par, Err };

    static ProcessPtr nil();
    static ProcessPtr err();
    static ProcessPtr res(SessionName s, Annotation a, ProcessPtr body);
    static ProcessPtr select(Value chan, Role to, Label l, Value payload, ProcessPtr cont);
    static ProcessPtr branch(Value chan, Role from, std::vector<BranchArm> arms);
    static ProcessPtr def(ProcVar name, std::vector<Param> params, ProcessPtr body, ProcessPtr scope);
    static ProcessPtr call(ProcVar name, std::vector<Value> args);
    static ProcessPtr par(ProcessPtr l, ProcessPtr r);
    /// Right-nested parallel composition; nil for an empty list.
    static ProcessPtr par_all(const std::vector<ProcessPtr>& ps);

    Kind kind() const noexcept { return kind_; }

    // Res
    const SessionName& session() const noexcept { return session_; }
    const Annotation& annotation() const noexcept { return annotation_; }
    // Select / Branch
    const Value& channel() const { return *chan_; }
    const Role& peer() const noexcept { return peer_; }
    const Label& label() const noexcept { return label_; }
    const Value& payload() const { return *payload_; }
    const std::vector<BranchArm>& arms() const noexcept { return arms_; }
    const BranchArm* find_arm(const Label& l) const noexcept;
    // Def / Call
    const ProcVar& name() const noexcept { return name_; }
    const std::vector<Param>& params() const noexcept { return params_; }
    const std::vector<Value>& args() const noexcept { return args_; }
    // Res / Select / Def body; Par left
    const ProcessPtr& body() const noexcept { return a_; }
    // Def scope; Par right
    const ProcessPtr& scope() const noexcept { return b_; }
    const ProcessPtr& left() const noexcept { return a_; }
    const ProcessPtr& right() const noexcept { return b_; }
    const ProcessPtr& cont() const noexcept { return a_; }

    struct Token {};
    explicit Process(Token, Kind k) : kind_(k) {}

private:
    Kind kind_;
    SessionName session_;
    Annotation annotation_;
    std::optional<Value> chan_;
    Role peer_;
    Label label_;
    std::optional<Value> payload_;
    std::vector<BranchArm> arms_;
    ProcVar name_;
    std::vector<Param> params_;
    std::vector<Value> args_;
    ProcessPtr a_;
    ProcessPtr b_;
};

/// Structural equality (bound names significant).
bool operator==(const Process& a, const Process& b);

// ---------------------------------------------------------------------------
// Free names and substitution

std::set<VarName> free_vars(const Process& p);
std::set<SessionName> free_sessions(const Process& p);
std::set<ProcVar> free_proc_vars(const Process& p);

/// Replaces free occurrences of x by a closed value.
ProcessPtr substitute(const ProcessPtr& p, const VarName& x, const Value& v);

// ---------------------------------------------------------------------------
// Normal forms

struct Restriction {
    SessionName session;
    Annotation annotation;
};

struct Definition {
    ProcVar name;
    std::vector<Param> params;
    ProcessPtr body;
};

/// ν-stack, def-stack and a flat multiset of Select/Branch/Call/Err threads.
struct NormalForm {
    std::vector<Restriction> restrictions;
    std::vector<Definition> defs;
    std::vector<ProcessPtr> threads;

    bool is_nil() const noexcept { return threads.empty(); }
    const Definition* find_def(const ProcVar& x) const;
    const Restriction* find_restriction(const SessionName& s) const;
};

NormalForm normalize(const ProcessPtr& p);
ProcessPtr denormalize(const NormalForm& nf);

/// Alpha-insensitive identity of a normal form (bound names are positional,
/// threads are sorted).
std::string nf_key(const NormalForm& nf);

// ---------------------------------------------------------------------------
// Reduction

/// Misuse of a value that the untyped semantics cannot interpret
/// (a literal used as a channel, a call to an unknown process, ...).
class DynamicFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Reduction {
    enum class Rule : std::uint8_t { Comm, Err, Call };
    Rule rule;
    std::optional<TransitionLabel> label;  // Comm and Err: the session transmission attempted
    NormalForm result;
};

std::string_view to_string(Reduction::Rule r) noexcept;

std::vector<Reduction> reduce_steps(const NormalForm& nf);
std::vector<Reduction> reduce_steps(const ProcessPtr& p);

bool has_error(const NormalForm& nf);
bool has_error(const ProcessPtr& p);

struct Trace {
    enum class Outcome : std::uint8_t { Terminated, Stuck, Error, BudgetExhausted, DynamicFault };
    struct Entry {
        std::size_t step;
        Reduction::Rule rule;
        std::optional<TransitionLabel> label;
        NormalForm state;
    };
    NormalForm initial;
    std::vector<Entry> steps;
    Outcome outcome = Outcome::Terminated;
    std::string fault;
};

std::string_view to_string(Trace::Outcome o) noexcept;

Trace run(const ProcessPtr& p, std::size_t max_steps, std::uint64_t seed);

}  // namespace mpst
