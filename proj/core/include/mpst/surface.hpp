#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mpst/process.hpp"
#include "mpst/types.hpp"

namespace mpst {

class SyntaxError : public std::runtime_error {
public:
    SyntaxError(std::size_t line, std::size_t column, std::string expected, std::string found);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string& expected() const noexcept { return expected_; }
    const std::string& found() const noexcept { return found_; }

private:
    std::size_t line_;
    std::size_t column_;
    std::string expected_;
    std::string found_;
};

struct Declaration {
    enum class Kind : std::uint8_t { Global, Local, Context, Process };
    Kind kind;
    std::string name;
    std::variant<GlobalTypePtr, LocalTypePtr, TypingContext, ProcessPtr> value;
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<Diagnostic> diagnostics;  // well-formedness findings

    const GlobalTypePtr& global() const { return std::get<GlobalTypePtr>(value); }
    const LocalTypePtr& local() const { return std::get<LocalTypePtr>(value); }
    const TypingContext& context() const { return std::get<TypingContext>(value); }
    const ProcessPtr& process() const { return std::get<ProcessPtr>(value); }
};

std::string_view to_string(Declaration::Kind k) noexcept;

struct SourceFile {
    std::vector<Declaration> decls;

    const Declaration* find(std::string_view name) const;
    /// Throw std::out_of_range if the name is missing or of another kind.
    const GlobalTypePtr& global(std::string_view name) const;
    const LocalTypePtr& local(std::string_view name) const;
    const TypingContext& context(std::string_view name) const;
    const ProcessPtr& process(std::string_view name) const;
};

/// Parses a whole file. Syntax errors throw; well-formedness findings are
/// attached to the declarations.
SourceFile parse(std::string_view text);

/// Single-item parsers; names declared in `env` may be referenced.
GlobalTypePtr parse_global(std::string_view text, const SourceFile* env = nullptr);
LocalTypePtr parse_local(std::string_view text, const SourceFile* env = nullptr);
Sort parse_sort(std::string_view text, const SourceFile* env = nullptr);
TypingContext parse_context(std::string_view text, const SourceFile* env = nullptr);
ProcessPtr parse_process(std::string_view text, const SourceFile* env = nullptr);
TransitionLabel parse_label(std::string_view text);

std::string print(const GlobalType& g);
std::string print(const LocalType& t);
std::string print(const Sort& s);
std::string print(const TypingContext& ctx);
std::string print(const Process& p);
std::string print(const Value& v);
std::string print(const NormalForm& nf);
std::string print(const Declaration& d);
std::string print(const SourceFile& f);

/// `s:p->q:l`, `s:p!q:l(S)`, `s:p?q:l(S)`.
std::string format_label(const TransitionLabel& l);

}  // namespace mpst
