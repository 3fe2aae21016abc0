#pragma once

#include "mpst/types.hpp"

namespace mpst {

/// int <: real, plus reflexivity.
bool basic_subtype(BasicSort a, BasicSort b) noexcept;

/// Coinductive session subtyping. Internal choices are covariant in their
/// label set (the subtype may offer more) and contravariant in payloads;
/// external choices the other way round. Mixed basic/session queries are
/// false. Operands whose payloads mention an enclosing recursion variable
/// relate only to an alpha-equivalent copy of themselves.
bool subtype(const Sort& a, const Sort& b);
bool subtype(const LocalTypePtr& a, const LocalTypePtr& b);

/// Equal domains and pointwise subtyping.
bool context_subtype(const TypingContext& a, const TypingContext& b);

/// True when s is a session type that is a subtype of end.
bool is_end_like(const Sort& s);

}  // namespace mpst
