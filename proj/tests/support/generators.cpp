#include "generators.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "mpst/analysis.hpp"
#include "mpst/projection.hpp"
#include "mpst/subtyping.hpp"

namespace mpst::testing {
namespace {

const std::vector<std::string> kLabels{"a", "b", "c", "d", "e"};
const std::vector<RecVar> kVars{"t", "u"};

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

BasicSort random_basic(Rng& rng) {
    static const BasicSort all[] = {BasicSort::Int, BasicSort::Bool, BasicSort::Real, BasicSort::Str, BasicSort::Unit};
    return all[uniform(rng, 0, 4)];
}

Role role(int i) { return Role("r" + std::to_string(i)); }

std::vector<std::string> pick_labels(Rng& rng, int width) {
    auto pool = kLabels;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(static_cast<std::size_t>(width));
    std::sort(pool.begin(), pool.end());
    return pool;
}

struct GlobalGen {
    Rng& rng;
    const GlobalGenConfig& cfg;
    int roles;
    int recs_left;

    GlobalTypePtr leaf(const std::vector<RecVar>& scope) {
        if (!scope.empty() && chance(rng, 0.6)) return GlobalType::var(scope[static_cast<std::size_t>(uniform(rng, 0, int(scope.size()) - 1))]);
        return GlobalType::end();
    }

    bool projectable(const GlobalTypePtr& g) const {
        for (int r = 0; r < roles; ++r)
            if (!project(g, role(r))) return false;
        return true;
    }

    // Branches are redrawn a few times when some role cannot merge them;
    // the last resort repeats the first continuation in every branch.
    GlobalTypePtr transmission(int depth, const std::vector<RecVar>& scope) {
        int p = uniform(rng, 0, roles - 1);
        int q = uniform(rng, 0, roles - 2);
        if (q >= p) ++q;
        auto labels = pick_labels(rng, uniform(rng, 1, cfg.max_width));
        std::vector<Sort> payloads;
        for (std::size_t i = 0; i < labels.size(); ++i) payloads.push_back(Sort(random_basic(rng)));
        const int saved_recs = recs_left;
        GlobalTypePtr first;
        for (int attempt = 0; attempt < 6; ++attempt) {
            recs_left = saved_recs;
            std::vector<GlobalBranch> br;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                auto cont = node(depth + 1, scope);
                if (!first) first = cont;
                br.push_back({Label(labels[i]), payloads[i], cont});
            }
            auto g = GlobalType::transmission(role(p), role(q), std::move(br));
            if (projectable(g)) return g;
        }
        std::vector<GlobalBranch> br;
        for (std::size_t i = 0; i < labels.size(); ++i) br.push_back({Label(labels[i]), payloads[i], first});
        return GlobalType::transmission(role(p), role(q), std::move(br));
    }

    GlobalTypePtr node(int depth, const std::vector<RecVar>& scope) {
        if (depth >= cfg.max_depth) return leaf(scope);
        if (depth > 0 && chance(rng, 0.2)) return leaf(scope);
        if (recs_left > 0 && chance(rng, 0.3)) {
            RecVar v = kVars[static_cast<std::size_t>(cfg.max_recs - recs_left) % kVars.size()];
            --recs_left;
            auto inner = scope;
            inner.push_back(v);
            return GlobalType::rec(v, transmission(depth + 1, inner));
        }
        return transmission(depth, scope);
    }
};

struct LocalGen {
    Rng& rng;
    int self;
    int roles;
    int max_depth;
    int max_width;
    int recs_left;

    LocalTypePtr leaf(const std::vector<RecVar>& scope) {
        if (!scope.empty() && chance(rng, 0.6)) return LocalType::var(scope[static_cast<std::size_t>(uniform(rng, 0, int(scope.size()) - 1))]);
        return LocalType::end();
    }

    LocalTypePtr choice(int depth, const std::vector<RecVar>& scope) {
        int q = uniform(rng, 0, roles - 2);
        if (q >= self) ++q;
        std::vector<LocalBranch> br;
        for (const auto& l : pick_labels(rng, uniform(rng, 1, max_width)))
            br.push_back({Label(l), Sort(random_basic(rng)), node(depth + 1, scope)});
        return chance(rng, 0.5) ? LocalType::internal(role(q), std::move(br)) : LocalType::external(role(q), std::move(br));
    }

    LocalTypePtr node(int depth, const std::vector<RecVar>& scope) {
        if (depth >= max_depth) return leaf(scope);
        if (depth > 0 && chance(rng, 0.25)) return leaf(scope);
        if (recs_left > 0 && chance(rng, 0.3)) {
            RecVar v = kVars[static_cast<std::size_t>(recs_left) % kVars.size()];
            --recs_left;
            auto inner = scope;
            inner.push_back(v);
            return LocalType::rec(v, choice(depth + 1, inner));
        }
        return choice(depth, scope);
    }
};

LocalTypePtr widen_rec(Rng& rng, const LocalTypePtr& t) {
    switch (t->kind()) {
    case LocalType::Kind::Internal: {
        std::vector<LocalBranch> br;
        for (const auto& b : t->branches()) {
            if (t->branches().size() > 1 && chance(rng, 0.25)) continue;
            Sort payload = b.payload;
            if (payload.is_basic() && payload.basic() == BasicSort::Real && chance(rng, 0.5)) payload = Sort(BasicSort::Int);
            br.push_back({b.label, payload, widen_rec(rng, b.cont)});
        }
        if (br.empty()) br.push_back(t->branches().front());
        return LocalType::internal(t->peer(), std::move(br));
    }
    case LocalType::Kind::External: {
        std::vector<LocalBranch> br;
        for (const auto& b : t->branches()) {
            Sort payload = b.payload;
            if (payload.is_basic() && payload.basic() == BasicSort::Int && chance(rng, 0.5)) payload = Sort(BasicSort::Real);
            br.push_back({b.label, payload, widen_rec(rng, b.cont)});
        }
        if (chance(rng, 0.3)) br.push_back({Label("x"), Sort(random_basic(rng)), LocalType::end()});
        return LocalType::external(t->peer(), std::move(br));
    }
    case LocalType::Kind::Rec: return LocalType::rec(t->rec_var(), widen_rec(rng, t->body()));
    default: return t;
    }
}

Literal literal_for(Rng& rng, BasicSort b) {
    switch (b) {
    case BasicSort::Int: return std::int64_t{uniform(rng, 0, 99)};
    case BasicSort::Real: return 1.5;
    case BasicSort::Bool: return chance(rng, 0.5);
    case BasicSort::Str: return std::string("m");
    case BasicSort::Unit: return Unit{};
    }
    return Unit{};
}

struct Synth {
    Rng& rng;
    std::string prefix;
    int defs = 0;
    int vars = 0;
    std::map<RecVar, std::pair<ProcVar, LocalTypePtr>> env;

    ProcessPtr go(const LocalTypePtr& t, const Value& chan) {
        switch (t->kind()) {
        case LocalType::Kind::End: return Process::nil();
        case LocalType::Kind::Var: return Process::call(env.at(t->rec_var()).first, {chan});
        case LocalType::Kind::Internal: {
            const auto& br = t->branches();
            const auto& b = br[static_cast<std::size_t>(uniform(rng, 0, int(br.size()) - 1))];
            if (!b.payload.is_basic()) throw std::invalid_argument("session payloads are not synthesised");
            return Process::select(chan, t->peer(), b.label, Value(literal_for(rng, b.payload.basic())), go(b.cont, chan));
        }
        case LocalType::Kind::External: {
            std::vector<BranchArm> arms;
            for (const auto& b : t->branches())
                arms.push_back({b.label, VarName("v" + std::to_string(++vars)), go(b.cont, chan)});
            return Process::branch(chan, t->peer(), std::move(arms));
        }
        case LocalType::Kind::Rec: {
            std::vector<RecVar> binders;
            LocalTypePtr inner = t;
            while (inner->kind() == LocalType::Kind::Rec) {
                binders.push_back(inner->rec_var());
                inner = inner->body();
            }
            if (inner->kind() == LocalType::Kind::Var && env.count(inner->rec_var()) &&
                std::find(binders.begin(), binders.end(), inner->rec_var()) == binders.end())
                return go(inner, chan);
            LocalTypePtr closed = t;
            for (const auto& [v, def] : env) closed = substitute(closed, v, def.second);
            ProcVar x("X" + prefix + "_" + std::to_string(++defs));
            VarName c("c" + prefix + "_" + std::to_string(defs));
            auto saved = env;
            for (const auto& v : binders) env[v] = {x, closed};
            auto body = go(inner, Value(c));
            env = std::move(saved);
            return Process::def(x, {Param{c, Sort(closed)}}, body, Process::call(x, {chan}));
        }
        }
        return Process::nil();
    }
};

}  // namespace

GlobalTypePtr random_global(Rng& rng, const GlobalGenConfig& cfg) {
    GlobalGen gen{rng, cfg, uniform(rng, 2, cfg.max_roles), cfg.max_recs};
    return gen.node(0, {});
}

GlobalTypePtr random_projectable_global(Rng& rng, const GlobalGenConfig& cfg) {
    for (int attempt = 0; attempt < 100000; ++attempt) {
        auto g = random_global(rng, cfg);
        if (!well_formed(*g).empty()) continue;
        if (project_all(*g)) return g;
    }
    throw std::runtime_error("no projectable global type found");
}

LocalTypePtr random_local(Rng& rng, int self, int roles, int max_depth, int max_width, int max_recs) {
    LocalGen gen{rng, self, roles, max_depth, max_width, max_recs};
    return gen.node(0, {});
}

LocalTypePtr widen(Rng& rng, const LocalTypePtr& t) {
    auto w = widen_rec(rng, t);
    return subtype(t, w) ? w : t;
}

TypingContext random_context(Rng& rng, int roles, int max_depth) {
    TypingContext ctx;
    for (int i = 0; i < roles; ++i)
        ctx.insert(Endpoint{"s", role(i)}, Sort(random_local(rng, i, roles, max_depth, 2, 1)));
    return ctx;
}

TypingContext associated_context(Rng& rng, const GlobalTypePtr& g, bool widen_entries) {
    TypingContext ctx;
    for (const auto& r : roles_of(*g)) {
        auto t = project(g, r).value();
        ctx.insert(Endpoint{"s", r}, Sort(widen_entries ? widen(rng, t) : t));
    }
    return ctx;
}

static void collect_families(const GlobalTypePtr& g, const std::set<Role>& roles,
                             std::vector<std::vector<LocalTypePtr>>& out) {
    if (g->kind() == GlobalType::Kind::Rec) return collect_families(g->body(), roles, out);
    if (g->kind() != GlobalType::Kind::Transmission) return;
    for (const auto& r : roles) {
        if (r == g->from() || r == g->to()) continue;
        std::vector<LocalTypePtr> family;
        for (const auto& b : g->branches()) {
            auto p = project(b.cont, r);
            if (p && free_vars(*p.value()).empty()) family.push_back(p.value());
        }
        if (family.size() == g->branches().size() && family.size() > 1) out.push_back(family);
    }
    for (const auto& b : g->branches()) collect_families(b.cont, roles, out);
}

std::vector<std::vector<LocalTypePtr>> merge_families(const GlobalTypePtr& g) {
    std::vector<std::vector<LocalTypePtr>> out;
    collect_families(g, roles_of(*g), out);
    return out;
}

ProcessPtr synthesize_role(Rng& rng, const Endpoint& ep, const LocalTypePtr& t) {
    Synth s{rng, ep.role.str(), 0, 0, {}};
    return s.go(t, Value(ep));
}

Instance random_instance(Rng& rng, const GlobalGenConfig& cfg, bool widen_entries) {
    Instance in;
    in.global = random_projectable_global(rng, cfg);
    in.context = associated_context(rng, in.global, widen_entries);
    for (const auto& [k, v] : in.context)
        in.parts.push_back(synthesize_role(rng, std::get<Endpoint>(k), v.session()));
    in.open = Process::par_all(in.parts);
    in.closed = Process::res("s", Annotation{in.global, in.context}, in.open);
    return in;
}

}  // namespace mpst::testing
