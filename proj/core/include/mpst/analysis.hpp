#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpst/lts.hpp"
#include "mpst/projection.hpp"
#include "mpst/types.hpp"

namespace mpst {

struct AssociationReport {
    struct RoleResult {
        Role role;
        std::optional<LocalTypePtr> projection;
        std::optional<MergeFailure> projection_failure;
        std::optional<Sort> entry;  // absent when the context lacks s[role]
        bool subtype_holds = false;
    };

    bool holds = false;
    std::vector<RoleResult> roles;
    std::vector<ContextKey> end_part;
    std::optional<std::string> failure;
};

AssociationReport check_association(const GlobalTypePtr& g, const TypingContext& ctx, const SessionName& s);
bool associated(const GlobalTypePtr& g, const TypingContext& ctx, const SessionName& s);

/// Context whose s-endpoints are the projections of g; throws IllFormed if
/// some role cannot be projected.
TypingContext projected_context(const GlobalType& g, const SessionName& s);

enum class Property : std::uint8_t { Safe, DeadlockFree, Live };
std::string_view to_string(Property p) noexcept;

struct PropertyVerdict {
    struct CycleEdge {
        std::size_t source;
        TransitionLabel label;
        std::size_t target;
    };

    Property property = Property::Safe;
    bool holds = true;
    std::vector<TransitionLabel> trace;         // from the initial context to the violating node
    std::optional<std::size_t> node;            // violating node in the explored graph
    std::optional<TransitionLabel> pending;     // offending half action (safety, liveness)
    std::vector<CycleEdge> cycle;               // fair cycle avoiding `pending` (liveness)
    std::string reason;
};

PropertyVerdict check_safety(const StateGraph& graph);
PropertyVerdict check_deadlock_free(const StateGraph& graph);
PropertyVerdict check_live(const StateGraph& graph);

PropertyVerdict check_safety(const TypingContext& ctx, const SessionName& s, std::size_t limit = kDefaultLimit);
PropertyVerdict check_deadlock_free(const TypingContext& ctx, const SessionName& s, std::size_t limit = kDefaultLimit);
PropertyVerdict check_live(const TypingContext& ctx, const SessionName& s, std::size_t limit = kDefaultLimit);

/// Pair (from, to) of a transmission, or the pair an output/input half waits for.
std::pair<Role, Role> obligation_pair(const TransitionLabel& half);

struct CorrespondenceViolation {
    std::vector<TransitionLabel> trace;  // joint trace reaching the pair
    TransitionLabel label;               // the unmatched step
    std::string reason;
};

std::vector<CorrespondenceViolation> check_soundness_correspondence(const GlobalTypePtr& g, const TypingContext& ctx,
                                                                    const SessionName& s, std::size_t depth);
std::vector<CorrespondenceViolation> check_completeness_correspondence(const GlobalTypePtr& g,
                                                                       const TypingContext& ctx,
                                                                       const SessionName& s, std::size_t depth);

struct AllPropertiesReport {
    AssociationReport association;
    PropertyVerdict safe;
    PropertyVerdict deadlock_free;
    PropertyVerdict live;
    bool holds() const noexcept { return association.holds && safe.holds && deadlock_free.holds && live.holds; }
};

AllPropertiesReport check_all_by_association(const GlobalTypePtr& g, const SessionName& s,
                                             std::size_t limit = kDefaultLimit);

}  // namespace mpst
