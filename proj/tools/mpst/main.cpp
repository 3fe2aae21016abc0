#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mpst/analysis.hpp"
#include "mpst/lts.hpp"
#include "mpst/process.hpp"
#include "mpst/projection.hpp"
#include "mpst/subtyping.hpp"
#include "mpst/surface.hpp"
#include "mpst/typing.hpp"

using json = nlohmann::ordered_json;
using namespace mpst;

namespace {

enum Exit { kOk = 0, kRefuted = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file;
    std::string format = "text";
    std::string global;
    std::string context;
    std::string process;
    std::string role;
    std::string left;
    std::string right;
    std::string session = "s";
    std::string replay;
    std::size_t steps = 6;
    std::size_t depth = 6;
    std::size_t budget = 200;
    std::uint64_t seed = 0;
    std::size_t limit = kDefaultLimit;
};

SourceFile load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::size_t limit_from_env(std::size_t fallback) {
    if (const char* v = std::getenv("MPST_LIMIT")) {
        try {
            return static_cast<std::size_t>(std::stoull(v));
        } catch (const std::exception&) {
            throw UsageError(std::string("MPST_LIMIT is not a number: ") + v);
        }
    }
    return fallback;
}

void require(const std::string& value, const char* flag) {
    if (value.empty()) throw UsageError(std::string("missing ") + flag);
}

bool json_out(const Options& o) { return o.format == "json"; }

json label_json(const TransitionLabel& l) { return format_label(l); }

json trace_json(const std::vector<TransitionLabel>& t) {
    json a = json::array();
    for (const auto& l : t) a.push_back(label_json(l));
    return a;
}

std::string trace_text(const std::vector<TransitionLabel>& t) {
    std::string out;
    for (const auto& l : t) out += (out.empty() ? "" : " ") + format_label(l);
    return out.empty() ? "(empty)" : out;
}

json verdict_json(const PropertyVerdict& v) {
    json w;
    w["trace"] = trace_json(v.trace);
    json cycle = json::array();
    for (const auto& e : v.cycle)
        cycle.push_back(json{{"source", e.source}, {"label", format_label(e.label)}, {"target", e.target}});
    w["cycle"] = cycle;
    if (v.pending) w["pending"] = format_label(*v.pending);
    json out{{"property", std::string(to_string(v.property))}, {"holds", v.holds}, {"witness", w}};
    if (!v.reason.empty()) out["reason"] = v.reason;
    return out;
}

void print_verdict_text(const PropertyVerdict& v) {
    std::cout << to_string(v.property) << ": " << (v.holds ? "true" : "false") << "\n";
    if (v.holds) return;
    std::cout << "  trace: " << trace_text(v.trace) << "\n";
    if (v.pending) std::cout << "  pending: " << format_label(*v.pending) << "\n";
    if (!v.cycle.empty()) {
        std::cout << "  cycle:";
        for (const auto& e : v.cycle) std::cout << " " << e.source << "-[" << format_label(e.label) << "]->" << e.target;
        std::cout << "\n";
    }
    if (!v.reason.empty()) std::cout << "  reason: " << v.reason << "\n";
}

std::string entry_text(const Sort& s) { return s.is_session() ? print(*s.session()) : print(s); }

json association_json(const AssociationReport& r) {
    json roles = json::array();
    for (const auto& rr : r.roles) {
        json j{{"role", rr.role.str()}};
        if (rr.projection) j["projection"] = print(**rr.projection);
        if (rr.projection_failure) j["projection_failure"] = describe(*rr.projection_failure);
        j["entry"] = rr.entry ? json(entry_text(*rr.entry)) : json(nullptr);
        j["subtype"] = rr.subtype_holds;
        roles.push_back(j);
    }
    json end_part = json::array();
    for (const auto& k : r.end_part) end_part.push_back(to_string(k));
    json out{{"holds", r.holds}, {"roles", roles}, {"end_part", end_part}};
    if (r.failure) out["failure"] = *r.failure;
    return out;
}

void print_association_text(const AssociationReport& r) {
    std::cout << "associated: " << (r.holds ? "true" : "false") << "\n";
    for (const auto& rr : r.roles) {
        std::cout << "  " << rr.role.str() << ": ";
        if (rr.projection_failure) {
            std::cout << "not projectable (" << describe(*rr.projection_failure) << ")\n";
            continue;
        }
        std::cout << print(**rr.projection) << (rr.subtype_holds ? " <= " : " </= ")
                  << (rr.entry ? entry_text(*rr.entry) : std::string("(missing)")) << "\n";
    }
    for (const auto& k : r.end_part) std::cout << "  " << to_string(k) << ": end part\n";
    if (r.failure) std::cout << "  failure: " << *r.failure << "\n";
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

// ---------------------------------------------------------------------------

int cmd_check(const Options& o) {
    auto f = load(o.file);
    bool clean = true;
    json decls = json::array();
    for (const auto& d : f.decls) {
        json diags = json::array();
        for (const auto& g : d.diagnostics) {
            std::string path;
            for (const auto& seg : g.path) path += (path.empty() ? "" : "/") + seg;
            diags.push_back(json{{"message", g.message}, {"path", path}});
        }
        clean = clean && d.diagnostics.empty();
        decls.push_back(json{{"kind", std::string(to_string(d.kind))},
                             {"name", d.name},
                             {"line", d.line},
                             {"well_formed", d.diagnostics.empty()},
                             {"diagnostics", diags}});
        if (!json_out(o)) {
            std::cout << to_string(d.kind) << " " << d.name << ": " << (d.diagnostics.empty() ? "ok" : "ill-formed")
                      << "\n";
            for (const auto& g : d.diagnostics) std::cout << "  " << g.message << "\n";
        }
    }
    if (json_out(o)) std::cout << json{{"ok", clean}, {"declarations", decls}}.dump(2) << "\n";
    return clean ? kOk : kRefuted;
}

int cmd_project(const Options& o) {
    require(o.global, "--global");
    auto f = load(o.file);
    const auto& g = f.global(o.global);
    std::vector<Role> roles;
    if (!o.role.empty()) roles.push_back(Role(o.role));
    else
        for (const auto& r : roles_of(*g)) roles.push_back(r);
    bool ok = true;
    json out = json::object();
    for (const auto& r : roles) {
        auto res = project(g, r);
        if (res.ok()) {
            out[r.str()] = json{{"ok", true}, {"type", print(**res)}};
            if (!json_out(o)) std::cout << r.str() << ": " << print(**res) << "\n";
        } else {
            ok = false;
            const auto& e = res.error();
            std::string path;
            for (const auto& seg : e.path) path += (path.empty() ? "" : "/") + seg;
            out[r.str()] = json{{"ok", false},
                                {"reason", std::string(to_string(e.reason))},
                                {"path", path},
                                {"detail", e.detail}};
            if (!json_out(o)) std::cout << r.str() << ": undefined (" << describe(e) << ")\n";
        }
    }
    if (json_out(o)) std::cout << out.dump(2) << "\n";
    return ok ? kOk : kRefuted;
}

Sort resolve_sort(const SourceFile& f, const std::string& text) {
    if (const auto* d = f.find(text); d && d->kind == Declaration::Kind::Local) return Sort(d->local());
    try {
        return parse_sort(text, &f);
    } catch (const SyntaxError&) {
        return Sort(parse_local(text, &f));
    }
}

int cmd_subtype(const Options& o) {
    require(o.left, "--left");
    require(o.right, "--right");
    auto f = load(o.file);
    Sort a = o.left == "end" ? Sort(LocalType::end()) : resolve_sort(f, o.left);
    Sort b = o.right == "end" ? Sort(LocalType::end()) : resolve_sort(f, o.right);
    bool holds = subtype(a, b);
    if (json_out(o))
        std::cout << json{{"left", entry_text(a)}, {"right", entry_text(b)}, {"holds", holds}}.dump(2) << "\n";
    else
        std::cout << entry_text(a) << (holds ? " <= " : " </= ") << entry_text(b) << "\n";
    return holds ? kOk : kRefuted;
}

std::vector<TransitionLabel> parse_replay(const std::string& text) {
    std::vector<TransitionLabel> out;
    std::string item;
    std::stringstream in(text);
    while (std::getline(in, item, ',')) {
        std::stringstream words(item);
        std::string w;
        while (words >> w) out.push_back(parse_label(w));
    }
    return out;
}

int simulate_global(const Options& o, const SourceFile& f) {
    GlobalTypePtr g = f.global(o.global);
    if (!o.replay.empty()) {
        std::cout << "0: " << print(*g) << "\n";
        std::size_t i = 0;
        for (const auto& l : parse_replay(o.replay)) {
            GlobalTypePtr next;
            for (const auto& st : global_steps(g, o.session))
                if (st.label == l) {
                    next = st.target;
                    break;
                }
            if (!next) {
                std::cout << "cannot fire " << format_label(l) << "\n";
                return kRefuted;
            }
            g = next;
            std::cout << ++i << ": " << format_label(l) << " => " << print(*g) << "\n";
        }
        return kOk;
    }
    struct Node {
        GlobalTypePtr g;
        std::size_t depth;
    };
    std::vector<Node> nodes{{g, 0}};
    std::map<std::string, std::size_t> index{{canonical_key(*g).repr(), 0}};
    std::vector<std::tuple<std::size_t, std::string, std::size_t>> edges;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].depth >= o.steps) continue;
        for (const auto& st : global_steps(nodes[i].g, o.session)) {
            auto key = canonical_key(*st.target).repr();
            auto [it, fresh] = index.emplace(key, nodes.size());
            if (fresh) nodes.push_back(Node{st.target, nodes[i].depth + 1});
            edges.emplace_back(i, format_label(st.label), it->second);
        }
    }
    if (o.format == "dot") {
        std::cout << "digraph global {\n";
        for (std::size_t i = 0; i < nodes.size(); ++i)
            std::cout << "  n" << i << " [label=\"" << dot_escape(print(*nodes[i].g)) << "\"];\n";
        for (const auto& [a, l, b] : edges) std::cout << "  n" << a << " -> n" << b << " [label=\"" << dot_escape(l) << "\"];\n";
        std::cout << "}\n";
    } else if (json_out(o)) {
        json jn = json::array();
        for (const auto& n : nodes) jn.push_back(print(*n.g));
        json je = json::array();
        for (const auto& [a, l, b] : edges) je.push_back(json{{"source", a}, {"label", l}, {"target", b}});
        std::cout << json{{"nodes", jn}, {"edges", je}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < nodes.size(); ++i) std::cout << "n" << i << ": " << print(*nodes[i].g) << "\n";
        for (const auto& [a, l, b] : edges) std::cout << "n" << a << " --" << l << "--> n" << b << "\n";
    }
    return kOk;
}

int simulate_context(const Options& o, const SourceFile& f) {
    TypingContext ctx = f.context(o.context);
    if (!o.replay.empty()) {
        std::cout << "0: " << print(ctx) << "\n";
        std::size_t i = 0;
        for (const auto& l : parse_replay(o.replay)) {
            auto next = apply_transmission(ctx, l);
            if (!next) {
                std::cout << "cannot fire " << format_label(l) << "\n";
                return kRefuted;
            }
            ctx = std::move(*next);
            std::cout << ++i << ": " << format_label(l) << " => " << print(ctx) << "\n";
        }
        return kOk;
    }
    auto graph = reachable_contexts(ctx, o.session, o.limit);
    if (o.format == "dot") {
        std::cout << "digraph context {\n";
        for (std::size_t i = 0; i < graph.size(); ++i)
            std::cout << "  n" << i << " [label=\"" << dot_escape(print(graph.nodes[i])) << "\"];\n";
        for (std::size_t i = 0; i < graph.size(); ++i)
            for (const auto& e : graph.out[i])
                std::cout << "  n" << i << " -> n" << e.target << " [label=\"" << dot_escape(format_label(e.label))
                          << "\"];\n";
        std::cout << "}\n";
    } else if (json_out(o)) {
        json jn = json::array();
        for (const auto& n : graph.nodes) jn.push_back(print(n));
        json je = json::array();
        for (std::size_t i = 0; i < graph.size(); ++i)
            for (const auto& e : graph.out[i])
                je.push_back(json{{"source", i}, {"label", format_label(e.label)}, {"target", e.target}});
        std::cout << json{{"nodes", jn}, {"edges", je}}.dump(2) << "\n";
    } else {
        for (std::size_t i = 0; i < graph.size(); ++i) std::cout << "n" << i << ": " << print(graph.nodes[i]) << "\n";
        for (std::size_t i = 0; i < graph.size(); ++i)
            for (const auto& e : graph.out[i])
                std::cout << "n" << i << " --" << format_label(e.label) << "--> n" << e.target << "\n";
    }
    return kOk;
}

int cmd_simulate(const Options& o) {
    auto f = load(o.file);
    if (!o.global.empty()) return simulate_global(o, f);
    if (!o.context.empty()) return simulate_context(o, f);
    throw UsageError("simulate needs --global or --context");
}

int cmd_assoc(const Options& o) {
    require(o.global, "--global");
    require(o.context, "--context");
    auto f = load(o.file);
    auto rep = check_association(f.global(o.global), f.context(o.context), o.session);
    if (json_out(o)) std::cout << association_json(rep).dump(2) << "\n";
    else print_association_text(rep);
    return rep.holds ? kOk : kRefuted;
}

int cmd_props(const Options& o) {
    require(o.context, "--context");
    auto f = load(o.file);
    auto graph = reachable_contexts(f.context(o.context), o.session, o.limit);
    std::vector<PropertyVerdict> vs{check_safety(graph), check_deadlock_free(graph), check_live(graph)};
    bool all = true;
    json out = json::array();
    for (const auto& v : vs) {
        all = all && v.holds;
        out.push_back(verdict_json(v));
        if (!json_out(o)) print_verdict_text(v);
    }
    if (json_out(o)) std::cout << out.dump(2) << "\n";
    return all ? kOk : kRefuted;
}

int cmd_verify(const Options& o) {
    require(o.global, "--global");
    auto f = load(o.file);
    auto rep = check_all_by_association(f.global(o.global), o.session, o.limit);
    if (json_out(o)) {
        json out{{"holds", rep.holds()},
                 {"association", association_json(rep.association)},
                 {"properties", json::array({verdict_json(rep.safe), verdict_json(rep.deadlock_free),
                                             verdict_json(rep.live)})}};
        std::cout << out.dump(2) << "\n";
    } else {
        print_association_text(rep.association);
        print_verdict_text(rep.safe);
        print_verdict_text(rep.deadlock_free);
        print_verdict_text(rep.live);
    }
    return rep.holds() ? kOk : kRefuted;
}

int cmd_typecheck(const Options& o) {
    require(o.process, "--process");
    auto f = load(o.file);
    TypingContext ctx = o.context.empty() ? TypingContext{} : f.context(o.context);
    auto res = typecheck({}, ctx, f.process(o.process));
    if (json_out(o)) {
        if (res.ok())
            std::cout << json{{"ok", true}, {"rule", res->rule}, {"derivation", print(*res)}}.dump(2) << "\n";
        else
            std::cout << json{{"ok", false},
                              {"error", std::string(to_string(res.error().kind))},
                              {"rule", res.error().rule},
                              {"position", res.error().position},
                              {"reason", res.error().reason}}
                             .dump(2)
                      << "\n";
    } else {
        if (res.ok()) std::cout << print(*res);
        else std::cout << describe(res.error()) << "\n";
    }
    return res.ok() ? kOk : kRefuted;
}

int cmd_run(const Options& o) {
    require(o.process, "--process");
    auto f = load(o.file);
    auto tr = run(f.process(o.process), o.budget, o.seed);
    if (json_out(o)) {
        json steps = json::array();
        for (const auto& e : tr.steps)
            steps.push_back(json{{"step", e.step},
                                 {"rule", std::string(to_string(e.rule))},
                                 {"label", e.label ? json(format_label(*e.label)) : json(nullptr)},
                                 {"state", print(e.state)}});
        json out{{"initial", print(tr.initial)}, {"steps", steps}, {"outcome", std::string(to_string(tr.outcome))}};
        if (!tr.fault.empty()) out["fault"] = tr.fault;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "0 start " << print(tr.initial) << "\n";
        for (const auto& e : tr.steps) {
            std::cout << e.step << " " << to_string(e.rule);
            if (e.label) std::cout << " " << format_label(*e.label);
            std::cout << " " << print(e.state) << "\n";
        }
        std::cout << "outcome: " << to_string(tr.outcome) << (tr.fault.empty() ? "" : " (" + tr.fault + ")") << "\n";
    }
    const bool ok = tr.outcome == Trace::Outcome::Terminated || tr.outcome == Trace::Outcome::BudgetExhausted;
    return ok ? kOk : kRefuted;
}

int print_violations(const Options& o, const std::vector<CorrespondenceViolation>& vs) {
    if (json_out(o)) {
        json out = json::array();
        for (const auto& v : vs)
            out.push_back(json{{"trace", trace_json(v.trace)}, {"label", format_label(v.label)}, {"reason", v.reason}});
        std::cout << json{{"holds", vs.empty()}, {"violations", out}}.dump(2) << "\n";
    } else {
        std::cout << "violations: " << vs.size() << "\n";
        for (const auto& v : vs)
            std::cout << "  after " << trace_text(v.trace) << ": " << format_label(v.label) << " " << v.reason << "\n";
    }
    return vs.empty() ? kOk : kRefuted;
}

int cmd_harness(const Options& o, const std::string& which) {
    auto f = load(o.file);
    if (which == "soundness" || which == "completeness") {
        require(o.global, "--global");
        require(o.context, "--context");
        const auto& g = f.global(o.global);
        const auto& ctx = f.context(o.context);
        auto vs = which == "soundness" ? check_soundness_correspondence(g, ctx, o.session, o.depth)
                                       : check_completeness_correspondence(g, ctx, o.session, o.depth);
        return print_violations(o, vs);
    }
    if (which == "fidelity") {
        require(o.global, "--global");
        require(o.context, "--context");
        require(o.process, "--process");
        auto rep = session_fidelity_harness(f.global(o.global), f.context(o.context), f.process(o.process), o.session,
                                            o.limit);
        if (json_out(o)) {
            json out{{"holds", rep.ok()},
                     {"premises", rep.premises.holds},
                     {"states", rep.states_explored},
                     {"failures", rep.failures}};
            if (!rep.premises.holds) out["premise_violation"] = rep.premises.violation;
            std::cout << out.dump(2) << "\n";
        } else {
            if (!rep.premises.holds) std::cout << "PremiseViolation: " << rep.premises.violation << "\n";
            else std::cout << "states explored: " << rep.states_explored << ", failures: " << rep.failures.size() << "\n";
            for (const auto& m : rep.failures) std::cout << "  " << m << "\n";
        }
        if (!rep.premises.holds) return kUsage;
        return rep.ok() ? kOk : kRefuted;
    }
    if (which == "subject-reduction") {
        require(o.process, "--process");
        SubjectReductionOptions so;
        so.steps = o.steps;
        so.seed = o.seed;
        TypingContext ctx = o.context.empty() ? TypingContext{} : f.context(o.context);
        if (!o.global.empty()) so.globals[SessionName(o.session)] = f.global(o.global);
        auto rep = subject_reduction_harness({}, ctx, f.process(o.process), so);
        if (json_out(o)) {
            json fails = json::array();
            for (const auto& x : rep.failures)
                fails.push_back(json{{"kind", std::string(to_string(x.kind))},
                                     {"step", x.step},
                                     {"process", x.process},
                                     {"reason", x.reason}});
            std::cout << json{{"holds", rep.ok()}, {"steps", rep.steps_taken}, {"failures", fails}}.dump(2) << "\n";
        } else {
            std::cout << "steps: " << rep.steps_taken << ", failures: " << rep.failures.size() << "\n";
            for (const auto& x : rep.failures)
                std::cout << "  " << to_string(x.kind) << " at step " << x.step << ": " << x.reason << "\n";
        }
        return rep.ok() ? kOk : kRefuted;
    }
    throw UsageError("unknown harness " + which);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiparty session types: projection, association, context properties and process typing"};
    app.require_subcommand(1);
    Options o;
    std::string harness_kind;

    auto add_file = [&](CLI::App* sub) {
        sub->add_option("file", o.file, ".mpst source")->required();
        sub->add_option("--format", o.format, "text, json or dot")
            ->check(CLI::IsMember({"text", "json", "dot"}));
    };
    auto* check = app.add_subcommand("check", "parse and check well-formedness");
    add_file(check);

    auto* proj = app.add_subcommand("project", "project a global type");
    add_file(proj);
    proj->add_option("--global", o.global)->required();
    proj->add_option("--role", o.role);

    auto* sub = app.add_subcommand("subtype", "decide subtyping between two sorts");
    add_file(sub);
    sub->add_option("--left", o.left)->required();
    sub->add_option("--right", o.right)->required();

    auto* sim = app.add_subcommand("simulate", "enumerate LTS steps of a global type or context");
    add_file(sim);
    sim->add_option("--global", o.global);
    sim->add_option("--context", o.context);
    sim->add_option("--session", o.session);
    sim->add_option("--steps", o.steps);
    sim->add_option("--replay", o.replay, "labels such as s:p->q:l, separated by spaces or commas");

    auto* assoc = app.add_subcommand("assoc", "check association of a context with a global type");
    add_file(assoc);
    assoc->add_option("--global", o.global)->required();
    assoc->add_option("--context", o.context)->required();
    assoc->add_option("--session", o.session);

    auto* props = app.add_subcommand("props", "safety, deadlock-freedom and liveness of a context");
    add_file(props);
    props->add_option("--context", o.context)->required();
    props->add_option("--session", o.session);
    props->add_option("--limit", o.limit);

    auto* verify = app.add_subcommand("verify", "all properties of the projected context");
    add_file(verify);
    verify->add_option("--global", o.global)->required();
    verify->add_option("--session", o.session);
    verify->add_option("--limit", o.limit);

    auto* tc = app.add_subcommand("typecheck", "type a process");
    add_file(tc);
    tc->add_option("--process", o.process)->required();
    tc->add_option("--context", o.context);

    auto* rn = app.add_subcommand("run", "execute a process");
    add_file(rn);
    rn->add_option("--process", o.process)->required();
    rn->add_option("--seed", o.seed);
    rn->add_option("--budget", o.budget);

    auto* hs = app.add_subcommand("harness", "theorem harnesses");
    hs->add_option("kind", harness_kind, "soundness, completeness, fidelity or subject-reduction")
        ->required()
        ->check(CLI::IsMember({"soundness", "completeness", "fidelity", "subject-reduction"}));
    add_file(hs);
    hs->add_option("--global", o.global);
    hs->add_option("--context", o.context);
    hs->add_option("--process", o.process);
    hs->add_option("--session", o.session);
    hs->add_option("--depth", o.depth);
    hs->add_option("--steps", o.steps);
    hs->add_option("--seed", o.seed);
    hs->add_option("--limit", o.limit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    auto error = [](const std::string& kind, const std::string& message) {
        std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
        return kUsage;
    };
    try {
        bool limit_flag = false;
        for (auto* s : {props, verify, hs})
            if (s->parsed() && s->count("--limit")) limit_flag = true;
        if (!limit_flag) o.limit = limit_from_env(o.limit);
        if (check->parsed()) return cmd_check(o);
        if (proj->parsed()) return cmd_project(o);
        if (sub->parsed()) return cmd_subtype(o);
        if (sim->parsed()) return cmd_simulate(o);
        if (assoc->parsed()) return cmd_assoc(o);
        if (props->parsed()) return cmd_props(o);
        if (verify->parsed()) return cmd_verify(o);
        if (tc->parsed()) return cmd_typecheck(o);
        if (rn->parsed()) return cmd_run(o);
        if (hs->parsed()) return cmd_harness(o, harness_kind);
    } catch (const SyntaxError& e) {
        return error("SyntaxError", e.what());
    } catch (const UsageError& e) {
        return error("UsageError", e.what());
    } catch (const std::out_of_range& e) {
        return error("UnknownDeclaration", e.what());
    } catch (const LimitExceeded& e) {
        return error("LimitExceeded", e.what());
    } catch (const IllFormed& e) {
        return error("IllFormed", e.what());
    }
    return kUsage;
}
