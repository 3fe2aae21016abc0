#include "mpst/subtyping.hpp"

#include <set>
#include <utility>

namespace mpst {

bool basic_subtype(BasicSort a, BasicSort b) noexcept {
    return a == b || (a == BasicSort::Int && b == BasicSort::Real);
}

namespace {

class Checker {
public:
    bool sort(const Sort& a, const Sort& b) {
        if (a.is_basic() && b.is_basic()) return basic_subtype(a.basic(), b.basic());
        if (a.is_basic() || b.is_basic()) return false;
        return session(a.session(), b.session());
    }

    bool session(const LocalTypePtr& a, const LocalTypePtr& b) {
        if (a == b) return true;
        auto key = std::make_pair(canonical_key(*a), canonical_key(*b));
        if (!visited_.insert(key).second) return true;
        const LocalTypePtr x = unfold_once(a);
        const LocalTypePtr y = unfold_once(b);
        if (x->kind() != y->kind()) return false;
        switch (x->kind()) {
        case LocalType::Kind::End: return true;
        case LocalType::Kind::Internal:
            if (x->peer() != y->peer()) return false;
            for (const auto& yb : y->branches()) {
                const auto* xb = x->find_branch(yb.label);
                if (!xb || !sort(yb.payload, xb->payload) || !session(xb->cont, yb.cont)) return false;
            }
            return true;
        case LocalType::Kind::External:
            if (x->peer() != y->peer()) return false;
            for (const auto& xb : x->branches()) {
                const auto* yb = y->find_branch(xb.label);
                if (!yb || !sort(xb.payload, yb->payload) || !session(xb.cont, yb->cont)) return false;
            }
            return true;
        case LocalType::Kind::Rec:
        case LocalType::Kind::Var: return false;
        }
        return false;
    }

private:
    std::set<std::pair<CanonicalKey, CanonicalKey>> visited_;
};

}  // namespace

bool subtype(const LocalTypePtr& a, const LocalTypePtr& b) {
    if (alpha_equal(Sort(a), Sort(b))) return true;
    if (has_recursive_payload(*a) || has_recursive_payload(*b)) return false;
    if (!free_vars(*a).empty() || !free_vars(*b).empty()) return false;
    if (!is_contractive(*a) || !is_contractive(*b)) return false;
    Checker c;
    return c.session(a, b);
}

bool subtype(const Sort& a, const Sort& b) {
    if (a.is_basic() && b.is_basic()) return basic_subtype(a.basic(), b.basic());
    if (a.is_basic() || b.is_basic()) return false;
    return subtype(a.session(), b.session());
}

bool context_subtype(const TypingContext& a, const TypingContext& b) {
    if (a.size() != b.size()) return false;
    for (const auto& [k, v] : a) {
        const Sort* w = b.find(k);
        if (!w || !subtype(v, *w)) return false;
    }
    return true;
}

bool is_end_like(const Sort& s) { return s.is_session() && subtype(s, Sort(LocalType::end())); }

}  // namespace mpst
