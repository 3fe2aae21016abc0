#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpst/result.hpp"
#include "mpst/types.hpp"

namespace mpst {

struct MergeFailure {
    enum class Reason : std::uint8_t {
        InternalChoiceClash,
        PeerMismatch,
        PayloadMismatch,
        LabelPayloadClash,
        ShapeMismatch,
        BinderMismatch,
    };
    Reason reason;
    std::vector<std::string> path;  // branch labels down to the clashing pair
    std::optional<Role> role;       // set by project()
    std::string detail;
};

std::string_view to_string(MergeFailure::Reason r) noexcept;
std::string describe(const MergeFailure& f);

using MergeResult = Result<LocalTypePtr, MergeFailure>;

/// Full merge. Binders are matched positionally, so alpha-variants merge; the
/// result keeps the left operand's binder names.
MergeResult merge(const LocalTypePtr& a, const LocalTypePtr& b);

/// Left fold of merge over a nonempty family.
MergeResult merge_all(const std::vector<LocalTypePtr>& family);

MergeResult project(const GlobalType& g, const Role& p);
MergeResult project(const GlobalTypePtr& g, const Role& p);

using ProjectionMap = std::map<Role, LocalTypePtr>;

/// Projection onto every role of g; on failure every failing role is listed.
Result<ProjectionMap, std::vector<MergeFailure>> project_all(const GlobalType& g);

}  // namespace mpst
