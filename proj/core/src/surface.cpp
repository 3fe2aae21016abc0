#include "mpst/surface.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace mpst {

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string expected, std::string found)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": expected " + expected +
                         ", found " + found),
      line_(line), column_(column), expected_(std::move(expected)), found_(std::move(found)) {}

std::string_view to_string(Declaration::Kind k) noexcept {
    switch (k) {
    case Declaration::Kind::Global: return "global";
    case Declaration::Kind::Local: return "local";
    case Declaration::Kind::Context: return "context";
    case Declaration::Kind::Process: return "process";
    }
    return "?";
}

const Declaration* SourceFile::find(std::string_view name) const {
    for (const auto& d : decls)
        if (d.name == name) return &d;
    return nullptr;
}

namespace {

const Declaration& lookup(const SourceFile& f, std::string_view name, Declaration::Kind k) {
    const auto* d = f.find(name);
    if (!d) throw std::out_of_range("no declaration named " + std::string(name));
    if (d->kind != k)
        throw std::out_of_range(std::string(name) + " is a " + std::string(to_string(d->kind)) + " declaration, not " +
                                std::string(to_string(k)));
    return *d;
}

}  // namespace

const GlobalTypePtr& SourceFile::global(std::string_view n) const {
    return lookup(*this, n, Declaration::Kind::Global).global();
}
const LocalTypePtr& SourceFile::local(std::string_view n) const {
    return lookup(*this, n, Declaration::Kind::Local).local();
}
const TypingContext& SourceFile::context(std::string_view n) const {
    return lookup(*this, n, Declaration::Kind::Context).context();
}
const ProcessPtr& SourceFile::process(std::string_view n) const {
    return lookup(*this, n, Declaration::Kind::Process).process();
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok : std::uint8_t {
    Ident,
    Int,
    Real,
    String,
    Arrow,     // ->
    Plus,      // (+)
    Amp,       // &
    LBrace,
    RBrace,
    LParen,
    RParen,
    Lt,
    Gt,
    LBracket,
    RBracket,
    Dot,
    Comma,
    Colon,
    Eq,
    Bar,
    Bang,
    Query,
    Semi,
    Eof,
};

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

std::string describe(const Token& t) {
    if (t.kind == Tok::Eof) return "end of input";
    return "'" + t.text + "'";
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    std::size_t line = 1;
    std::size_t col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto is_ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
    auto is_ident = [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '\''; };
    while (i < src.size()) {
        const unsigned char c = static_cast<unsigned char>(src[i]);
        if (std::isspace(c)) {
            advance(1);
            continue;
        }
        if (src.substr(i, 2) == "//") {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        const std::size_t l0 = line;
        const std::size_t c0 = col;
        auto push = [&](Tok k, std::size_t n) {
            out.push_back(Token{k, std::string(src.substr(i, n)), l0, c0});
            advance(n);
        };
        if (is_ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && is_ident(static_cast<unsigned char>(src[j]))) ++j;
            push(Tok::Ident, j - i);
            continue;
        }
        if (std::isdigit(c) || (c == '-' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            bool real = false;
            if (j + 1 < src.size() && src[j] == '.' && std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
                real = true;
                j += 1;
                while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
                if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
                    std::size_t k = j + 1;
                    if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
                    if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
                        while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
                        j = k;
                    }
                }
            }
            push(real ? Tok::Real : Tok::Int, j - i);
            continue;
        }
        if (c == '"') {
            std::string value;
            std::size_t j = i + 1;
            bool closed = false;
            while (j < src.size()) {
                char d = src[j];
                if (d == '"') {
                    closed = true;
                    break;
                }
                if (d == '\\' && j + 1 < src.size()) {
                    char e = src[j + 1];
                    value += e == 'n' ? '\n' : e == 't' ? '\t' : e;
                    j += 2;
                    continue;
                }
                value += d;
                ++j;
            }
            if (!closed) throw SyntaxError(l0, c0, "closing '\"'", "end of input");
            out.push_back(Token{Tok::String, value, l0, c0});
            advance(j + 1 - i);
            continue;
        }
        if (src.substr(i, 2) == "->") {
            push(Tok::Arrow, 2);
            continue;
        }
        if (src.substr(i, 3) == "(+)") {
            push(Tok::Plus, 3);
            continue;
        }
        Tok k;
        switch (c) {
        case '&': k = Tok::Amp; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '<': k = Tok::Lt; break;
        case '>': k = Tok::Gt; break;
        case '[': k = Tok::LBracket; break;
        case ']': k = Tok::RBracket; break;
        case '.': k = Tok::Dot; break;
        case ',': k = Tok::Comma; break;
        case ':': k = Tok::Colon; break;
        case '=': k = Tok::Eq; break;
        case '|': k = Tok::Bar; break;
        case '!': k = Tok::Bang; break;
        case '?': k = Tok::Query; break;
        case ';': k = Tok::Semi; break;
        default: {
            std::string shown = std::isprint(c) ? std::string(1, static_cast<char>(c)) : "byte " + std::to_string(c);
            throw SyntaxError(l0, c0, "a token", "'" + shown + "'");
        }
        }
        push(k, 1);
    }
    out.push_back(Token{Tok::Eof, "", line, col});
    return out;
}

const std::set<std::string> kKeywords = {"global", "local", "context", "process", "end",  "rec",  "new",
                                         "def",    "in",    "err",     "with",    "int",  "bool", "real",
                                         "str",    "unit",  "true",    "false"};

// ---------------------------------------------------------------------------
// Parser

constexpr std::size_t kMaxDepth = 400;

class Parser {
public:
    Parser(std::string_view src, const SourceFile* env) : toks_(lex(src)), env_(env) {}

    SourceFile file() {
        SourceFile f;
        env_ = &f;
        while (!at(Tok::Eof)) {
            if (accept(Tok::Semi)) continue;
            const Token& kw = peek();
            Declaration d{Declaration::Kind::Global, "", GlobalTypePtr{}, kw.line, kw.column, {}};
            if (is_kw("global")) d.kind = Declaration::Kind::Global;
            else if (is_kw("local")) d.kind = Declaration::Kind::Local;
            else if (is_kw("context")) d.kind = Declaration::Kind::Context;
            else if (is_kw("process")) d.kind = Declaration::Kind::Process;
            else fail("a declaration keyword");
            next();
            const Token& name = expect_ident("a declaration name");
            if (f.find(name.text)) throw SyntaxError(name.line, name.column, "a fresh declaration name", describe(name));
            d.name = name.text;
            expect(Tok::Eq, "'='");
            switch (d.kind) {
            case Declaration::Kind::Global:
                d.value = global();
                d.diagnostics = well_formed(*d.global());
                break;
            case Declaration::Kind::Local:
                d.value = local();
                d.diagnostics = well_formed(*d.local());
                break;
            case Declaration::Kind::Context:
                d.value = context();
                d.diagnostics = context_diagnostics(d.context());
                break;
            case Declaration::Kind::Process:
                d.value = process();
                d.diagnostics = process_diagnostics(*d.process());
                break;
            }
            f.decls.push_back(std::move(d));
        }
        return f;
    }

    template <typename F>
    auto whole(F item) {
        auto v = item();
        if (!at(Tok::Eof)) fail("end of input");
        return v;
    }

    GlobalTypePtr global() {
        Depth guard(*this);
        if (accept_kw("end")) return GlobalType::end();
        if (accept_kw("rec")) {
            const Token& v = expect_ident("a recursion variable");
            expect(Tok::Dot, "'.'");
            gbinders_.push_back(v.text);
            auto body = global();
            gbinders_.pop_back();
            return GlobalType::rec(RecVar(v.text), std::move(body));
        }
        if (accept(Tok::LParen)) {
            auto g = global();
            expect(Tok::RParen, "')'");
            return g;
        }
        const Token& id = expect_ident("a global type");
        if (accept(Tok::Arrow)) {
            const Token& to = expect_ident("a receiving role");
            std::vector<GlobalBranch> branches;
            if (accept(Tok::Colon)) {
                branches.push_back(gbranch());
            } else {
                expect(Tok::LBrace, "'{' or ':'");
                do branches.push_back(gbranch());
                while (accept(Tok::Comma));
                expect(Tok::RBrace, "'}'");
            }
            return GlobalType::transmission(Role(id.text), Role(to.text), std::move(branches));
        }
        if (bound(gbinders_, id.text)) return GlobalType::var(RecVar(id.text));
        if (const auto* d = decl(id.text); d && d->kind == Declaration::Kind::Global) return d->global();
        return GlobalType::var(RecVar(id.text));
    }

    LocalTypePtr local() {
        Depth guard(*this);
        if (accept_kw("end")) return LocalType::end();
        if (accept_kw("rec")) {
            const Token& v = expect_ident("a recursion variable");
            expect(Tok::Dot, "'.'");
            lbinders_.push_back(v.text);
            auto body = local();
            lbinders_.pop_back();
            return LocalType::rec(RecVar(v.text), std::move(body));
        }
        if (accept(Tok::LParen)) {
            auto t = local();
            expect(Tok::RParen, "')'");
            return t;
        }
        const Token& id = expect_ident("a local type");
        if (at(Tok::Plus) || at(Tok::Amp)) {
            const bool internal = next().kind == Tok::Plus;
            std::vector<LocalBranch> branches;
            if (accept(Tok::LBrace)) {
                do branches.push_back(lbranch());
                while (accept(Tok::Comma));
                expect(Tok::RBrace, "'}'");
            } else {
                branches.push_back(lbranch());
            }
            return internal ? LocalType::internal(Role(id.text), std::move(branches))
                            : LocalType::external(Role(id.text), std::move(branches));
        }
        if (bound(lbinders_, id.text)) return LocalType::var(RecVar(id.text));
        if (const auto* d = decl(id.text); d && d->kind == Declaration::Kind::Local) return d->local();
        return LocalType::var(RecVar(id.text));
    }

    Sort sort() {
        if (at(Tok::Ident)) {
            if (auto b = parse_basic_sort(peek().text)) {
                next();
                return *b;
            }
        }
        if (accept(Tok::Lt)) {
            auto t = local();
            expect(Tok::Gt, "'>'");
            return Sort(std::move(t));
        }
        const Token& id = expect_ident("a sort");
        if (bound(lbinders_, id.text)) return Sort(LocalType::var(RecVar(id.text)));
        if (const auto* d = decl(id.text); d && d->kind == Declaration::Kind::Local) return Sort(d->local());
        throw SyntaxError(id.line, id.column, "a sort", describe(id));
    }

    TypingContext context() {
        if (at(Tok::Ident) && !kKeywords.count(peek().text)) {
            const Token& id = next();
            if (const auto* d = decl(id.text); d && d->kind == Declaration::Kind::Context) return d->context();
            throw SyntaxError(id.line, id.column, "a context name", describe(id));
        }
        expect(Tok::LBrace, "'{'");
        TypingContext ctx;
        if (accept(Tok::RBrace)) return ctx;
        do {
            const Token& id = expect_ident("a context entry");
            ContextKey key = VarName(id.text);
            bool endpoint = false;
            if (accept(Tok::LBracket)) {
                const Token& r = expect_ident("a role");
                expect(Tok::RBracket, "']'");
                key = Endpoint{SessionName(id.text), Role(r.text)};
                endpoint = true;
            }
            expect(Tok::Colon, "':'");
            Sort s = endpoint ? Sort(local()) : sort();
            if (ctx.contains(key)) throw SyntaxError(id.line, id.column, "a fresh context key", describe(id));
            ctx.insert(key, std::move(s));
        } while (accept(Tok::Comma));
        expect(Tok::RBrace, "'}'");
        return ctx;
    }

    ProcessPtr process() {
        Depth guard(*this);
        auto p = prefix();
        while (accept(Tok::Bar)) p = Process::par(std::move(p), prefix());
        return p;
    }

    TransitionLabel label() {
        const Token& s = expect_ident("a session");
        expect(Tok::Colon, "':'");
        const Token& p = expect_ident("a role");
        TransitionLabel::Kind kind;
        if (accept(Tok::Arrow)) kind = TransitionLabel::Kind::Transmission;
        else if (accept(Tok::Bang)) kind = TransitionLabel::Kind::Output;
        else if (accept(Tok::Query)) kind = TransitionLabel::Kind::Input;
        else fail("'->', '!' or '?'");
        const Token& q = expect_ident("a role");
        expect(Tok::Colon, "':'");
        const Token& l = expect_ident("a label");
        if (kind == TransitionLabel::Kind::Transmission) return TransitionLabel::transmission(s.text, p.text, q.text, l.text);
        Sort payload = BasicSort::Unit;
        if (accept(Tok::LParen)) {
            payload = sort();
            expect(Tok::RParen, "')'");
        }
        return kind == TransitionLabel::Kind::Output ? TransitionLabel::output(s.text, p.text, q.text, l.text, payload)
                                                     : TransitionLabel::input(s.text, p.text, q.text, l.text, payload);
    }

private:
    struct Depth {
        explicit Depth(Parser& p) : p_(p) {
            if (++p_.depth_ > kMaxDepth) p_.fail("less deeply nested input");
        }
        ~Depth() { --p_.depth_; }
        Parser& p_;
    };

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    const SourceFile* env_;
    std::vector<std::string> gbinders_;
    std::vector<std::string> lbinders_;
    std::size_t depth_ = 0;

    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept(Tok k) {
        if (!at(k)) return false;
        next();
        return true;
    }
    bool is_kw(std::string_view w) const { return at(Tok::Ident) && peek().text == w; }
    bool accept_kw(std::string_view w) {
        if (!is_kw(w)) return false;
        next();
        return true;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(peek().line, peek().column, expected, describe(peek()));
    }
    const Token& expect(Tok k, const std::string& expected) {
        if (!at(k)) fail(expected);
        return next();
    }
    const Token& expect_ident(const std::string& expected) {
        if (!at(Tok::Ident) || kKeywords.count(peek().text)) fail(expected);
        return next();
    }
    void expect_kw(std::string_view w) {
        if (!accept_kw(w)) fail("'" + std::string(w) + "'");
    }
    static bool bound(const std::vector<std::string>& stack, const std::string& v) {
        for (const auto& b : stack)
            if (b == v) return true;
        return false;
    }
    const Declaration* decl(const std::string& name) const { return env_ ? env_->find(name) : nullptr; }

    GlobalBranch gbranch() {
        const Token& l = expect_ident("a label");
        Sort payload = BasicSort::Unit;
        if (accept(Tok::LParen)) {
            // Payloads open a fresh local scope.
            auto saved = std::move(lbinders_);
            lbinders_.clear();
            payload = sort();
            lbinders_ = std::move(saved);
            expect(Tok::RParen, "')'");
        }
        GlobalTypePtr cont = GlobalType::end();
        if (accept(Tok::Dot)) cont = global();
        return GlobalBranch{Label(l.text), std::move(payload), std::move(cont)};
    }

    LocalBranch lbranch() {
        const Token& l = expect_ident("a label");
        Sort payload = BasicSort::Unit;
        if (accept(Tok::LParen)) {
            payload = sort();
            expect(Tok::RParen, "')'");
        }
        LocalTypePtr cont = LocalType::end();
        if (accept(Tok::Dot)) cont = local();
        return LocalBranch{Label(l.text), std::move(payload), std::move(cont)};
    }

    Value value() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Int: {
            next();
            std::int64_t v = 0;
            auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
            if (ec != std::errc{} || ptr != t.text.data() + t.text.size())
                throw SyntaxError(t.line, t.column, "an integer in range", describe(t));
            return Literal(v);
        }
        case Tok::Real: {
            next();
            return Literal(std::stod(t.text));
        }
        case Tok::String: next(); return Literal(t.text);
        case Tok::LParen:
            next();
            expect(Tok::RParen, "')'");
            return Literal(Unit{});
        case Tok::Ident: {
            if (t.text == "true" || t.text == "false") {
                next();
                return Literal(t.text == "true");
            }
            const Token& id = expect_ident("a value");
            if (accept(Tok::LBracket)) {
                const Token& r = expect_ident("a role");
                expect(Tok::RBracket, "']'");
                return Endpoint{SessionName(id.text), Role(r.text)};
            }
            return VarName(id.text);
        }
        default: fail("a value");
        }
    }

    ProcessPtr continuation() {
        if (accept(Tok::Dot)) return prefix();
        return Process::nil();
    }

    BranchArm arm() {
        const Token& l = expect_ident("a label");
        std::optional<VarName> var;
        if (accept(Tok::LParen)) {
            var = VarName(expect_ident("a variable").text);
            expect(Tok::RParen, "')'");
        }
        return BranchArm{Label(l.text), std::move(var), continuation()};
    }

    Annotation annotation() {
        Annotation a;
        const bool ctx_form = at(Tok::LBrace) || (at(Tok::Ident) && decl(peek().text) &&
                                                  decl(peek().text)->kind == Declaration::Kind::Context);
        if (ctx_form) {
            a.context = context();
            if (accept_kw("with")) {
                expect_kw("global");
                a.global = global();
            }
        } else {
            a.global = global();
            if (accept_kw("with")) a.context = context();
        }
        return a;
    }

    ProcessPtr prefix() {
        Depth guard(*this);
        const Token& t = peek();
        if (t.kind == Tok::Int && t.text == "0") {
            next();
            return Process::nil();
        }
        if (accept(Tok::LParen)) {
            auto p = process();
            expect(Tok::RParen, "')'");
            return p;
        }
        if (accept_kw("err")) return Process::err();
        if (accept_kw("new")) {
            const Token& s = expect_ident("a session name");
            expect(Tok::Colon, "':'");
            Annotation a = annotation();
            expect_kw("in");
            return Process::res(SessionName(s.text), std::move(a), process());
        }
        if (accept_kw("def")) {
            const Token& x = expect_ident("a process variable");
            expect(Tok::LParen, "'('");
            std::vector<Param> params;
            if (!at(Tok::RParen)) {
                do {
                    const Token& v = expect_ident("a parameter");
                    expect(Tok::Colon, "':'");
                    params.push_back(Param{VarName(v.text), sort()});
                } while (accept(Tok::Comma));
            }
            expect(Tok::RParen, "')'");
            expect(Tok::Eq, "'='");
            auto body = process();
            expect_kw("in");
            return Process::def(ProcVar(x.text), std::move(params), std::move(body), process());
        }
        const Token& id = expect_ident("a process");
        if (at(Tok::LParen)) {
            next();
            std::vector<Value> args;
            if (!at(Tok::RParen)) {
                do args.push_back(value());
                while (accept(Tok::Comma));
            }
            expect(Tok::RParen, "')'");
            return Process::call(ProcVar(id.text), std::move(args));
        }
        if (accept(Tok::LBracket)) {
            const Token& r1 = expect_ident("a role");
            expect(Tok::RBracket, "']'");
            Value chan = VarName(id.text);
            Role peer(r1.text);
            if (accept(Tok::LBracket)) {
                const Token& r2 = expect_ident("a role");
                expect(Tok::RBracket, "']'");
                chan = Endpoint{SessionName(id.text), Role(r1.text)};
                peer = Role(r2.text);
            }
            if (accept(Tok::Plus)) {
                const Token& l = expect_ident("a label");
                Value payload = Literal(Unit{});
                if (accept(Tok::Lt)) {
                    payload = value();
                    expect(Tok::Gt, "'>'");
                }
                return Process::select(std::move(chan), std::move(peer), Label(l.text), std::move(payload),
                                       continuation());
            }
            expect(Tok::Amp, "'(+)' or '&'");
            std::vector<BranchArm> arms;
            if (accept(Tok::LBrace)) {
                do arms.push_back(arm());
                while (accept(Tok::Comma));
                expect(Tok::RBrace, "'}'");
            } else {
                arms.push_back(arm());
            }
            return Process::branch(std::move(chan), std::move(peer), std::move(arms));
        }
        if (const auto* d = decl(id.text); d && d->kind == Declaration::Kind::Process) return d->process();
        throw SyntaxError(id.line, id.column, "a process", describe(id));
    }

    static std::vector<Diagnostic> context_diagnostics(const TypingContext& ctx) {
        std::vector<Diagnostic> out;
        for (const auto& [k, v] : ctx) {
            if (!v.is_session()) continue;
            for (auto d : well_formed(*v.session())) {
                d.path.insert(d.path.begin(), to_string(k));
                out.push_back(std::move(d));
            }
        }
        return out;
    }

    static void process_diagnostics(const Process& p, std::vector<Diagnostic>& out) {
        switch (p.kind()) {
        case Process::Kind::Res: {
            const auto& a = p.annotation();
            if (a.global)
                for (auto d : well_formed(*a.global)) out.push_back(std::move(d));
            if (a.context)
                for (auto d : context_diagnostics(*a.context)) out.push_back(std::move(d));
            process_diagnostics(*p.body(), out);
            return;
        }
        case Process::Kind::Select: process_diagnostics(*p.cont(), out); return;
        case Process::Kind::Branch: {
            std::set<Label> seen;
            for (const auto& a : p.arms()) {
                if (!seen.insert(a.label).second)
                    out.push_back(Diagnostic{Diagnostic::Kind::DuplicateLabel, "duplicate branch " + a.label.str(), {}});
                process_diagnostics(*a.body, out);
            }
            return;
        }
        case Process::Kind::Def:
            for (const auto& prm : p.params())
                if (prm.sort.is_session())
                    for (auto d : well_formed(*prm.sort.session())) out.push_back(std::move(d));
            process_diagnostics(*p.body(), out);
            process_diagnostics(*p.scope(), out);
            return;
        case Process::Kind::Par:
            process_diagnostics(*p.left(), out);
            process_diagnostics(*p.right(), out);
            return;
        default: return;
        }
    }

    static std::vector<Diagnostic> process_diagnostics(const Process& p) {
        std::vector<Diagnostic> out;
        process_diagnostics(p, out);
        return out;
    }
};

}  // namespace

SourceFile parse(std::string_view text) {
    Parser p(text, nullptr);
    return p.file();
}

GlobalTypePtr parse_global(std::string_view text, const SourceFile* env) {
    Parser p(text, env);
    return p.whole([&] { return p.global(); });
}

LocalTypePtr parse_local(std::string_view text, const SourceFile* env) {
    Parser p(text, env);
    return p.whole([&] { return p.local(); });
}

Sort parse_sort(std::string_view text, const SourceFile* env) {
    Parser p(text, env);
    return p.whole([&] { return p.sort(); });
}

TypingContext parse_context(std::string_view text, const SourceFile* env) {
    Parser p(text, env);
    return p.whole([&] { return p.context(); });
}

ProcessPtr parse_process(std::string_view text, const SourceFile* env) {
    Parser p(text, env);
    return p.whole([&] { return p.process(); });
}

TransitionLabel parse_label(std::string_view text) {
    Parser p(text, nullptr);
    return p.whole([&] { return p.label(); });
}

// ---------------------------------------------------------------------------
// Printer

namespace {

bool is_unit(const Sort& s) { return s.is_basic() && s.basic() == BasicSort::Unit; }

void print_local(const LocalType& t, std::string& out);

void print_sort(const Sort& s, std::string& out) {
    if (s.is_basic()) {
        out += to_string(s.basic());
    } else {
        out += '<';
        print_local(*s.session(), out);
        out += '>';
    }
}

void print_payload(const Sort& s, std::string& out) {
    if (is_unit(s)) return;
    out += '(';
    print_sort(s, out);
    out += ')';
}

void print_local(const LocalType& t, std::string& out) {
    switch (t.kind()) {
    case LocalType::Kind::End: out += "end"; return;
    case LocalType::Kind::Var: out += t.rec_var().str(); return;
    case LocalType::Kind::Rec:
        out += "rec " + t.rec_var().str() + " . ";
        print_local(*t.body(), out);
        return;
    case LocalType::Kind::Internal:
    case LocalType::Kind::External: {
        out += t.peer().str();
        out += t.kind() == LocalType::Kind::Internal ? "(+)" : "&";
        const bool braces = t.branches().size() > 1;
        if (braces) out += "{ ";
        for (std::size_t i = 0; i < t.branches().size(); ++i) {
            const auto& b = t.branches()[i];
            if (i) out += ", ";
            out += b.label.str();
            print_payload(b.payload, out);
            if (!b.cont->is_end()) {
                out += " . ";
                print_local(*b.cont, out);
            }
        }
        if (braces) out += " }";
        return;
    }
    }
}

void print_global(const GlobalType& g, std::string& out) {
    switch (g.kind()) {
    case GlobalType::Kind::End: out += "end"; return;
    case GlobalType::Kind::Var: out += g.rec_var().str(); return;
    case GlobalType::Kind::Rec:
        out += "rec " + g.rec_var().str() + " . ";
        print_global(*g.body(), out);
        return;
    case GlobalType::Kind::Transmission: {
        out += g.from().str() + "->" + g.to().str();
        const bool braces = g.branches().size() > 1;
        out += braces ? " { " : ":";
        for (std::size_t i = 0; i < g.branches().size(); ++i) {
            const auto& b = g.branches()[i];
            if (i) out += ", ";
            out += b.label.str();
            print_payload(b.payload, out);
            if (!b.cont->is_end()) {
                out += " . ";
                print_global(*b.cont, out);
            }
        }
        if (braces) out += " }";
        return;
    }
    }
}

std::string format_real(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    std::string s(buf);
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    else if (s.find('.') == std::string::npos && s.find_first_of("eE") != std::string::npos)
        s.insert(s.find_first_of("eE"), ".0");
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        if (c == '\t') {
            out += "\\t";
            continue;
        }
        out += c;
    }
    return out + "\"";
}

void print_value(const Value& v, std::string& out) {
    if (v.is_var()) {
        out += v.var().str();
    } else if (v.is_endpoint()) {
        out += v.endpoint().session.str() + "[" + v.endpoint().role.str() + "]";
    } else {
        const auto& l = v.literal();
        switch (l.index()) {
        case 0: out += std::to_string(std::get<std::int64_t>(l)); break;
        case 1: out += format_real(std::get<double>(l)); break;
        case 2: out += std::get<bool>(l) ? "true" : "false"; break;
        case 3: out += quote(std::get<std::string>(l)); break;
        default: out += "()"; break;
        }
    }
}

void print_context(const TypingContext& ctx, std::string& out) {
    if (ctx.empty()) {
        out += "{}";
        return;
    }
    out += "{ ";
    bool first = true;
    for (const auto& [k, v] : ctx) {
        if (!first) out += ", ";
        first = false;
        out += to_string(k) + ": ";
        if (std::holds_alternative<Endpoint>(k) && v.is_session()) print_local(*v.session(), out);
        else print_sort(v, out);
    }
    out += " }";
}

void print_process(const Process& p, std::string& out);

void print_operand(const Process& p, std::string& out) {
    const bool wrap = p.kind() == Process::Kind::Par || p.kind() == Process::Kind::Res || p.kind() == Process::Kind::Def;
    if (wrap) out += '(';
    print_process(p, out);
    if (wrap) out += ')';
}

void print_cont(const Process& p, std::string& out) {
    if (p.kind() == Process::Kind::Nil) return;
    out += '.';
    print_operand(p, out);
}

void print_process(const Process& p, std::string& out) {
    switch (p.kind()) {
    case Process::Kind::Nil: out += '0'; return;
    case Process::Kind::Err: out += "err"; return;
    case Process::Kind::Res: {
        out += "new " + p.session().str() + " : ";
        const auto& a = p.annotation();
        if (a.global) {
            print_global(*a.global, out);
            if (a.context) {
                out += " with ";
                print_context(*a.context, out);
            }
        } else if (a.context) {
            print_context(*a.context, out);
        }
        out += " in ";
        print_process(*p.body(), out);
        return;
    }
    case Process::Kind::Select: {
        const auto& c = p.channel();
        print_value(c, out);
        out += "[" + p.peer().str() + "](+)" + p.label().str();
        if (!(p.payload().is_literal() && p.payload().literal().index() == 4)) {
            out += '<';
            print_value(p.payload(), out);
            out += '>';
        }
        print_cont(*p.cont(), out);
        return;
    }
    case Process::Kind::Branch: {
        print_value(p.channel(), out);
        out += "[" + p.peer().str() + "]&";
        const bool braces = p.arms().size() > 1;
        if (braces) out += "{ ";
        for (std::size_t i = 0; i < p.arms().size(); ++i) {
            const auto& a = p.arms()[i];
            if (i) out += ", ";
            out += a.label.str();
            if (a.var) out += "(" + a.var->str() + ")";
            print_cont(*a.body, out);
        }
        if (braces) out += " }";
        return;
    }
    case Process::Kind::Def: {
        out += "def " + p.name().str() + "(";
        for (std::size_t i = 0; i < p.params().size(); ++i) {
            if (i) out += ", ";
            out += p.params()[i].name.str() + ":";
            print_sort(p.params()[i].sort, out);
        }
        out += ") = ";
        print_process(*p.body(), out);
        out += " in ";
        print_process(*p.scope(), out);
        return;
    }
    case Process::Kind::Call: {
        out += p.name().str() + "(";
        for (std::size_t i = 0; i < p.args().size(); ++i) {
            if (i) out += ", ";
            print_value(p.args()[i], out);
        }
        out += ")";
        return;
    }
    case Process::Kind::Par: {
        const auto& l = *p.left();
        const bool wrap_left = l.kind() == Process::Kind::Res || l.kind() == Process::Kind::Def;
        if (wrap_left) out += '(';
        print_process(l, out);
        if (wrap_left) out += ')';
        out += " | ";
        print_operand(*p.right(), out);
        return;
    }
    }
}

}  // namespace

std::string print(const GlobalType& g) {
    std::string out;
    print_global(g, out);
    return out;
}

std::string print(const LocalType& t) {
    std::string out;
    print_local(t, out);
    return out;
}

std::string print(const Sort& s) {
    std::string out;
    print_sort(s, out);
    return out;
}

std::string print(const TypingContext& ctx) {
    std::string out;
    print_context(ctx, out);
    return out;
}

std::string print(const Process& p) {
    std::string out;
    print_process(p, out);
    return out;
}

std::string print(const Value& v) {
    std::string out;
    print_value(v, out);
    return out;
}

std::string print(const NormalForm& nf) { return print(*denormalize(nf)); }

std::string print(const Declaration& d) {
    std::string out = std::string(to_string(d.kind)) + " " + d.name + " = ";
    switch (d.kind) {
    case Declaration::Kind::Global: out += print(*d.global()); break;
    case Declaration::Kind::Local: out += print(*d.local()); break;
    case Declaration::Kind::Context: out += print(d.context()); break;
    case Declaration::Kind::Process: out += print(*d.process()); break;
    }
    return out;
}

std::string print(const SourceFile& f) {
    std::string out;
    for (const auto& d : f.decls) out += print(d) + "\n";
    return out;
}

std::string format_label(const TransitionLabel& l) {
    std::string out = l.session.str() + ":" + l.subject.str();
    switch (l.kind) {
    case TransitionLabel::Kind::Transmission: return out + "->" + l.peer.str() + ":" + l.label.str();
    case TransitionLabel::Kind::Output: out += "!"; break;
    case TransitionLabel::Kind::Input: out += "?"; break;
    }
    out += l.peer.str() + ":" + l.label.str() + "(";
    if (l.payload) print_sort(*l.payload, out);
    return out + ")";
}

}  // namespace mpst
