#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpst/analysis.hpp"
#include "mpst/process.hpp"
#include "mpst/result.hpp"
#include "mpst/types.hpp"

namespace mpst {

/// Θ: process variables to parameter sorts.
using ProcVarEnv = std::map<ProcVar, std::vector<Sort>>;

/// One node of a typing derivation.
///
/// Process judgments carry `process`; value judgments (T-B, T-sub) carry
/// `value` and `sort`; T-X carries `proc_var` and `sorts`; T-end carries only
/// its context.
struct Derivation {
    std::string rule;
    ProcVarEnv theta;
    TypingContext context;
    ProcessPtr process;
    std::optional<Value> value;
    std::optional<Sort> sort;
    std::optional<ProcVar> proc_var;
    std::vector<Sort> sorts;
    std::vector<std::string> side_conditions;
    std::vector<Derivation> premises;

    std::string judgment() const;
    std::size_t size() const;
    const Derivation* find_rule(std::string_view rule_name) const;
};

/// Indented tree, one judgment per line.
std::string print(const Derivation& d);

struct TypeError {
    enum class Kind : std::uint8_t {
        UnboundChannel,
        LabelNotInType,
        PayloadMismatch,
        NonLinearSplit,
        EndDelegation,
        AssociationFailure,
        ArityMismatch,
        ChannelShape,
        UnusedResource,
        UnboundProcessVariable,
        ErrorProcess,
    };
    Kind kind;
    std::string rule;
    std::string position;  // printed subterm where checking failed
    std::string reason;
};

std::string_view to_string(TypeError::Kind k) noexcept;
std::string describe(const TypeError& e);

using TypingResult = Result<Derivation, TypeError>;

/// Every entry is basic or a session type below end.
bool end_predicate(const TypingContext& ctx);

TypingResult typecheck(const ProcVarEnv& theta, const TypingContext& ctx, const ProcessPtr& p);

bool guarded_definitions(const Process& p);

bool only_plays(const ProcessPtr& p, const Role& role, const SessionName& s, const TypingContext& ctx);

// ---------------------------------------------------------------------------
// Harnesses

struct SubjectReductionFailure {
    enum class Kind : std::uint8_t { Refuted, NotFound, Error };
    Kind kind;
    std::size_t step;
    std::string process;
    std::string reason;
};

std::string_view to_string(SubjectReductionFailure::Kind k) noexcept;

struct SubjectReductionReport {
    std::size_t steps_taken = 0;
    std::vector<SubjectReductionFailure> failures;
    bool ok() const noexcept { return failures.empty(); }
};

struct SubjectReductionOptions {
    std::size_t steps = 6;
    std::uint64_t seed = 0;
    std::size_t horizon = 4;
    /// Global types for the free sessions of the context.
    std::map<SessionName, GlobalTypePtr> globals;
};

/// Follows one seeded reduction path and, after each step, looks for a
/// context reachable within `horizon` transmissions that types the reductum.
SubjectReductionReport subject_reduction_harness(const ProcVarEnv& theta, const TypingContext& ctx, const ProcessPtr& p,
                                                 const SubjectReductionOptions& opts = {});

/// Per-role split of a single-session process.
struct RoleComponent {
    Role role;
    TypingContext context;
    ProcessPtr process;
};

struct PremiseCheck {
    bool holds = false;
    std::string violation;
    std::vector<RoleComponent> components;
};

/// Hypotheses shared by the fidelity and process-property theorems.
PremiseCheck check_fidelity_premises(const GlobalTypePtr& g, const TypingContext& ctx, const ProcessPtr& p,
                                     const SessionName& s);

struct FidelityReport {
    PremiseCheck premises;
    std::size_t states_explored = 0;
    std::vector<std::string> failures;
    bool ok() const noexcept { return premises.holds && failures.empty(); }
};

/// Explores context transitions on `s` and checks each is matched by process
/// reductions reaching a state that satisfies the premises again.
FidelityReport session_fidelity_harness(const GlobalTypePtr& g, const TypingContext& ctx, const ProcessPtr& p,
                                        const SessionName& s, std::size_t limit = 2000);

struct ProcessPropertiesReport {
    PremiseCheck premises;
    bool deadlock_free = false;
    bool live = false;
    std::size_t states = 0;
    std::string witness;
};

/// Exhaustive exploration of the process reduction graph.
ProcessPropertiesReport typed_process_properties(const GlobalTypePtr& g, const TypingContext& ctx,
                                                 const ProcessPtr& p, const SessionName& s,
                                                 std::size_t limit = 20000);

/// Deadlock-freedom and liveness of a process, with no typing premises.
ProcessPropertiesReport process_properties(const ProcessPtr& p, std::size_t limit = 20000);

}  // namespace mpst
