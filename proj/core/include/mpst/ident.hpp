#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace mpst {

/// Interned-style identifier with a phantom tag so that roles, labels,
/// sessions and variables cannot be mixed up by accident.
template <typename Tag>
class Ident {
public:
    Ident() = default;
    Ident(std::string_view s) : name_(s) {}  // NOLINT(google-explicit-constructor)
    Ident(const char* s) : name_(s) {}       // NOLINT(google-explicit-constructor)
    Ident(std::string s) : name_(std::move(s)) {}  // NOLINT(google-explicit-constructor)

    const std::string& str() const noexcept { return name_; }
    bool empty() const noexcept { return name_.empty(); }

    friend bool operator==(const Ident&, const Ident&) = default;
    friend auto operator<=>(const Ident&, const Ident&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Ident& id) { return os << id.name_; }

private:
    std::string name_;
};

struct RoleTag;
struct LabelTag;
struct RecVarTag;
struct SessionTag;
struct VarTag;
struct ProcVarTag;

using Role = Ident<RoleTag>;
using Label = Ident<LabelTag>;
using RecVar = Ident<RecVarTag>;
using SessionName = Ident<SessionTag>;
using VarName = Ident<VarTag>;
using ProcVar = Ident<ProcVarTag>;

}  // namespace mpst

template <typename Tag>
struct std::hash<mpst::Ident<Tag>> {
    std::size_t operator()(const mpst::Ident<Tag>& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
