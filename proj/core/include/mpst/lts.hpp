#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpst/types.hpp"

namespace mpst {

struct GlobalStep {
    TransitionLabel label;  // Transmission form
    GlobalTypePtr target;
};

struct ContextStep {
    TransitionLabel label;
    TypingContext target;
};

/// Steps of a closed global type; labels carry `session`.
std::vector<GlobalStep> global_steps(const GlobalTypePtr& g, const SessionName& session = "s");

/// Output/input half steps of the s-endpoints.
std::vector<ContextStep> context_half_steps(const TypingContext& ctx, const SessionName& s);

/// Synchronised transmissions of the s-endpoints (payload of the output must
/// be a subtype of the payload of the input).
std::vector<ContextStep> context_transmissions(const TypingContext& ctx, const SessionName& s);

/// Applies one transmission label; nullopt if it is not enabled.
std::optional<TypingContext> apply_transmission(const TypingContext& ctx, const TransitionLabel& label);

/// Identity of a context up to alpha-equivalence of its entries.
std::string state_key(const TypingContext& ctx);

class LimitExceeded : public std::runtime_error {
public:
    explicit LimitExceeded(std::size_t limit)
        : std::runtime_error("state space exceeds limit of " + std::to_string(limit) + " nodes"), limit_(limit) {}
    std::size_t limit() const noexcept { return limit_; }

private:
    std::size_t limit_;
};

constexpr std::size_t kDefaultLimit = 100000;

struct StateGraph {
    struct Edge {
        TransitionLabel label;
        std::size_t target;
    };
    SessionName session;
    std::vector<TypingContext> nodes;  // nodes[0] is the initial context
    std::vector<std::vector<Edge>> out;
    std::vector<std::size_t> parent;       // BFS tree, parent[0] == 0
    std::vector<TransitionLabel> via;      // label on the BFS tree edge into each node

    std::size_t size() const noexcept { return nodes.size(); }
    /// Labels along the BFS tree from the initial node to n.
    std::vector<TransitionLabel> trace_to(std::size_t n) const;
};

/// Breadth-first exploration over transmissions of session s.
StateGraph reachable_contexts(const TypingContext& ctx, const SessionName& s, std::size_t limit = kDefaultLimit);

}  // namespace mpst
