#pragma once

#include <string>
#include <vector>

#include "mpst/lts.hpp"
#include "mpst/typing.hpp"

namespace mpst::testing {

/// Liveness by enumerating every node subset as the infinite part of a lasso.
/// Only meant for graphs of a dozen nodes.
bool brute_force_live(const StateGraph& g);

/// Safety by evaluating the defining clause at every reachable node.
bool clause_safe(const StateGraph& g);

/// Every terminal node maps all s-endpoints to end.
bool clause_deadlock_free(const StateGraph& g);

/// Re-checks every node of a derivation against its rule; returns the
/// problems found, empty when the tree is well formed.
std::vector<std::string> validate_derivation(const Derivation& d);

}  // namespace mpst::testing
